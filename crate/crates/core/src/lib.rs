//! Propagation of the 4-velocity and 4-position of a relativistic charged
//! particle in electromagnetic fields.
//!
//! Everything here works in scaled proper time `ξ = eτ/mc` for a particle of
//! charge `q = -e`, with the fields pre-multiplied so that `ξ|B|` is an angle
//! and `ξ|E|` a rapidity. The evolution of `u = (u0, u)` is then
//!
//! ```text
//! du0/dξ = -E·u
//! du/dξ  =  B×u - E u0
//! dx/dξ  =  u
//! ```
//!
//! The crate provides
//!
//! * [`exact`]: closed-form propagators for constant fields (finite rotation,
//!   finite boost, the full constant-field solution and its factored complex
//!   evaluation, and the analytic position displacement);
//! * [`oracle`]: an independent 4×4 matrix-exponential reference, the
//!   Lorentz-algebra commutator table and an RK4 integrator;
//! * [`splitting`]: fixed-coefficient operator-splitting steppers for
//!   constant and spatially varying fields;
//! * [`fields`]: field models (uniform, affine, dipole, tabulated grid);
//! * [`validate`]: the seeded randomized property suite and convergence
//!   studies shared by the tests and the command-line tool.

pub mod convergence;
pub mod error;
pub mod exact;
pub mod fields;
pub mod oracle;
pub mod splitting;
pub mod types;
pub mod validate;

pub use error::{Error, Result};
pub use exact::{
    boost, displacement_constant, push_constant, push_constant_complex_path, push_parallel, rotate,
    ComplexPathOutput, ComplexVec3,
};
pub use fields::{
    grid_eval, linear_gradient_model, uniform_model, DipoleModel, FieldModel, GridField,
    LinearGradientModel, UniformModel,
};
pub use oracle::{
    commutator_table, generator_matrix, matrix_exp, push_oracle, rk_final_state, rk_integrate,
    CommutatorReport, Matrix4,
};
pub use splitting::{
    integrate, scheme, split_step_constant, step_nonuniform, ParticleState, SchemeCoefficients,
};
pub use types::{
    field_invariants, minkowski_norm, FieldInvariants, FieldRegime, FourVelocity, ScaledTime,
    SpaceTimePoint, UniformField, Vec3, NULL_FIELD_EPS,
};
