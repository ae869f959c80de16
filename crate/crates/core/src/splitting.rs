//! Fixed-coefficient operator splitting.
//!
//! A scheme is an ordered list of stages `(t_i, v_i)`. Each stage first
//! applies a drift weighted by `t_i`, then a kick weighted by `v_i`.
//!
//! * For a constant field ([`split_step_constant`]) the drift is the finite
//!   rotation `exp(t_i ξ B·J)` and the kick the finite boost
//!   `exp(v_i ξ E·K)`.
//! * For a static non-uniform field ([`step_nonuniform`]) the drift moves the
//!   position, `x ← x + t_i Δξ u`, and the kick is the exact constant-field
//!   propagator over `v_i Δξ` with the field frozen at the current position.

use crate::error::{Error, Result};
use crate::exact::{boost, push_constant, rotate};
use crate::fields::FieldModel;
use crate::types::{FourVelocity, SpaceTimePoint, UniformField};

/// Ordered drift/kick weights of a splitting method.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeCoefficients {
    name: String,
    stages: Vec<(f64, f64)>,
    order: u32,
}

pub const SCHEME_NAMES: [&str; 4] = ["strang_kdk", "strang_dkd", "euler_split", "forest_ruth"];

impl SchemeCoefficients {
    /// Builds a scheme; the drift and kick weights must each sum to 1.
    pub fn new(name: impl Into<String>, stages: Vec<(f64, f64)>, order: u32) -> Result<Self> {
        let name = name.into();
        let drift: f64 = stages.iter().map(|s| s.0).sum();
        let kick: f64 = stages.iter().map(|s| s.1).sum();
        if (drift - 1.0).abs() > 1e-15 || (kick - 1.0).abs() > 1e-15 {
            return Err(Error::InvalidScheme(format!(
                "{name}: weights sum to drift {drift}, kick {kick}"
            )));
        }
        Ok(Self {
            name,
            stages,
            order,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> &[(f64, f64)] {
        &self.stages
    }

    /// Design order of accuracy.
    pub fn order(&self) -> u32 {
        self.order
    }
}

/// Looks up a built-in scheme by name.
///
/// * `strang_kdk`: half kick, drift, half kick (order 2)
/// * `strang_dkd`: half drift, kick, half drift (order 2)
/// * `euler_split`: drift then kick (order 1)
/// * `forest_ruth`: Forest–Ruth triple jump with `θ = 1/(2 − 2^(1/3))` (order 4)
pub fn scheme(name: &str) -> Result<SchemeCoefficients> {
    match name {
        "strang_kdk" => SchemeCoefficients::new(name, vec![(0.0, 0.5), (1.0, 0.5)], 2),
        "strang_dkd" => SchemeCoefficients::new(name, vec![(0.5, 1.0), (0.5, 0.0)], 2),
        "euler_split" => SchemeCoefficients::new(name, vec![(1.0, 1.0)], 1),
        "forest_ruth" => {
            let theta = 1.0 / (2.0 - 2f64.cbrt());
            SchemeCoefficients::new(
                name,
                vec![
                    (0.5 * theta, theta),
                    (0.5 * (1.0 - theta), 1.0 - 2.0 * theta),
                    (0.5 * (1.0 - theta), theta),
                    (0.5 * theta, 0.0),
                ],
                4,
            )
        }
        other => Err(Error::UnknownScheme(other.to_string())),
    }
}

/// Approximates the constant-field propagator over `xi` by the product of
/// finite rotations and boosts prescribed by `s`.
pub fn split_step_constant(
    u: FourVelocity,
    field: &UniformField,
    xi: f64,
    s: &SchemeCoefficients,
) -> FourVelocity {
    s.stages.iter().fold(u, |u, &(t, v)| {
        let u = if t != 0.0 {
            rotate(u, field.b_field, t * xi)
        } else {
            u
        };
        if v != 0.0 {
            boost(u, field.e_field, v * xi)
        } else {
            u
        }
    })
}

/// Position and 4-velocity of a particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub x: SpaceTimePoint,
    pub u: FourVelocity,
}

impl ParticleState {
    pub const fn new(x: SpaceTimePoint, u: FourVelocity) -> Self {
        Self { x, u }
    }
}

/// One step of size `dxi` through a static field model.
pub fn step_nonuniform(
    state: ParticleState,
    model: &dyn FieldModel,
    dxi: f64,
    s: &SchemeCoefficients,
) -> Result<ParticleState> {
    let mut x = state.x;
    let mut u = state.u;
    for &(t, v) in &s.stages {
        if t != 0.0 {
            x = x.drift(u, t * dxi);
        }
        if v != 0.0 {
            let field = model.eval(&x)?;
            u = push_constant(u, &field, v * dxi);
        }
    }
    Ok(ParticleState::new(x, u))
}

/// Uniform-step integration to `xi_end`; returns `steps + 1` samples,
/// endpoints included.
pub fn integrate(
    state: ParticleState,
    model: &dyn FieldModel,
    xi_end: f64,
    steps: usize,
    s: &SchemeCoefficients,
) -> Result<Vec<ParticleState>> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let dxi = xi_end / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut current = state;
    out.push(current);
    for _ in 0..steps {
        current = step_nonuniform(current, model, dxi, s)?;
        out.push(current);
    }
    Ok(out)
}

/// Endpoint of [`integrate`] without storing the trajectory.
pub fn integrate_final(
    state: ParticleState,
    model: &dyn FieldModel,
    xi_end: f64,
    steps: usize,
    s: &SchemeCoefficients,
) -> Result<ParticleState> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let dxi = xi_end / steps as f64;
    (0..steps).try_fold(state, |st, _| step_nonuniform(st, model, dxi, s))
}
