//! Closed-form propagators for a constant field.
//!
//! The velocity evolution `u(ξ) = exp(ξ(B·J + E·K)) u` is evaluated in
//! closed form from the invariants `E′`, `B′` of the complex field
//! `F = E + iB`. Pure rotations and pure boosts are the special cases
//! `E = 0` and `B = 0`. [`push_constant_complex_path`] evaluates the same
//! operator literally as the product of its two commuting complex factors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{
    field_invariants, FourVelocity, ScaledTime, SpaceTimePoint, UniformField, Vec3, NULL_FIELD_EPS,
};

/// Complex 3-vector `re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexVec3 {
    pub re: Vec3,
    pub im: Vec3,
}

impl ComplexVec3 {
    pub const fn new(re: Vec3, im: Vec3) -> Self {
        Self { re, im }
    }

    pub fn real(re: Vec3) -> Self {
        Self::new(re, Vec3::ZERO)
    }

    pub fn components(&self) -> [Complex64; 3] {
        [
            Complex64::new(self.re.x, self.im.x),
            Complex64::new(self.re.y, self.im.y),
            Complex64::new(self.re.z, self.im.z),
        ]
    }

    pub fn from_components(c: [Complex64; 3]) -> Self {
        Self::new(
            Vec3::new(c[0].re, c[1].re, c[2].re),
            Vec3::new(c[0].im, c[1].im, c[2].im),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Bilinear dot product (no conjugation).
    pub fn dot(&self, other: &ComplexVec3) -> Complex64 {
        let a = self.components();
        let b = other.components();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross(&self, other: &ComplexVec3) -> ComplexVec3 {
        let a = self.components();
        let b = other.components();
        Self::from_components([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn scale(&self, s: Complex64) -> ComplexVec3 {
        let a = self.components();
        Self::from_components([a[0] * s, a[1] * s, a[2] * s])
    }

    pub fn add(&self, other: &ComplexVec3) -> ComplexVec3 {
        Self::new(self.re + other.re, self.im + other.im)
    }

    pub fn sub(&self, other: &ComplexVec3) -> ComplexVec3 {
        Self::new(self.re - other.re, self.im - other.im)
    }
}

/// Finite rotation of the spatial part about `b_field` by the angle `ξ|B|`.
/// `u0` is carried through unchanged.
pub fn rotate(u: FourVelocity, b_field: Vec3, xi: impl Into<ScaledTime>) -> FourVelocity {
    let xi = xi.into().value();
    let b = b_field.norm();
    if b == 0.0 || xi == 0.0 {
        return u;
    }
    let axis = b_field / b;
    let angle = xi * b;
    let half = (0.5 * angle).sin();
    let n_cross_u = axis.cross(u.u);
    let spatial = u.u + n_cross_u * angle.sin() + axis.cross(n_cross_u) * (2.0 * half * half);
    FourVelocity::new(u.u0, spatial)
}

/// Lorentz boost along `e_field` with rapidity `ξ|E|`.
pub fn boost(u: FourVelocity, e_field: Vec3, xi: impl Into<ScaledTime>) -> FourVelocity {
    let xi = xi.into().value();
    let e = e_field.norm();
    if e == 0.0 || xi == 0.0 {
        return u;
    }
    let dir = e_field / e;
    let rapidity = xi * e;
    let (sh, ch) = (rapidity.sinh(), rapidity.cosh());
    let half = (0.5 * rapidity).sinh();
    let along = dir.dot(u.u);
    let u0 = ch * u.u0 - sh * along;
    // cosh(η) − 1 = 2 sinh²(η/2)
    let spatial = u.u + dir * (2.0 * half * half * along - sh * u.u0);
    FourVelocity::new(u0, spatial)
}

/// Propagator for parallel (or anti-parallel) `E` and `B`, where the
/// rotation and boost commute.
pub fn push_parallel(
    u: FourVelocity,
    field: &UniformField,
    xi: impl Into<ScaledTime>,
) -> Result<FourVelocity> {
    let xi = xi.into();
    let cross = field.e_field.cross(field.b_field).norm();
    let limit = 1e-12 * (field.e_field.norm() * field.b_field.norm()).max(1.0);
    if cross > limit {
        return Err(Error::NonParallelFields { cross, limit });
    }
    Ok(rotate(boost(u, field.e_field, xi), field.b_field, xi))
}

/// `true` when the field is treated as null (including the zero field).
pub fn is_null_field(field: &UniformField) -> bool {
    field_invariants(field).kappa <= NULL_FIELD_EPS * field.energy_scale()
}

/// `M·u` for the generator `M` of the equations of motion.
fn generator_apply(field: &UniformField, u: FourVelocity) -> FourVelocity {
    FourVelocity::new(
        -field.e_field.dot(u.u),
        field.b_field.cross(u.u) - field.e_field * u.u0,
    )
}

/// Scalar coefficients multiplying the fixed vector structures of the
/// closed-form solution (or of its integral over `[0, ξ]`).
struct Coefficients {
    /// coefficient of `u0` in `u0(ξ)`
    identity_plus: f64,
    /// coefficient of `u` in `u(ξ)`
    identity_minus: f64,
    /// coefficient of `E`
    along_e: f64,
    /// coefficient of `B`
    along_b: f64,
    /// coefficient of `E×B` and of the dyadic term `E(E·u) + B(B·u)`
    dyad: f64,
}

/// Applies the common structure
///
/// ```text
/// u0' = p u0 − (α E + β B + δ E×B)·u
/// u'  = m u  − (α E + β B − δ E×B) u0 + (−β E + α B)×u + δ (E(E·u) + B(B·u))
/// ```
fn apply_structure(c: &Coefficients, field: &UniformField, u: FourVelocity) -> FourVelocity {
    let e = field.e_field;
    let b = field.b_field;
    let exb = e.cross(b);
    let real_part = e * c.along_e + b * c.along_b;
    let u0 = c.identity_plus * u.u0 - (real_part + exb * c.dyad).dot(u.u);
    let spatial = u.u * c.identity_minus - (real_part - exb * c.dyad) * u.u0
        + (b * c.along_e - e * c.along_b).cross(u.u)
        + (e * e.dot(u.u) + b * b.dot(u.u)) * c.dyad;
    FourVelocity::new(u0, spatial)
}

/// Exact propagator for a constant field.
///
/// With `a = ξE′`, `b = ξB′` and `κ = E′² + B′²`:
///
/// ```text
/// u0(ξ) = [(ch+co)/2 + (E²+B²)/κ·(ch−co)/2] u0
///         − [E (E′sh + B′sn) + B (B′sh − E′sn) + E×B (ch − co)]/κ · u
/// u(ξ)  = [(ch+co)/2 − (E²+B²)/κ·(ch−co)/2] u
///         − [E (E′sh + B′sn) + B (B′sh − E′sn) − E×B (ch − co)]/κ · u0
///         + [E (E′sn − B′sh) + B (B′sn + E′sh)]/κ × u
///         + (ch − co) (E(E·u) + B(B·u))/κ
/// ```
///
/// where `ch = cosh a`, `co = cos b`, `sh = sinh a`, `sn = sin b`.
/// `ch − co` is evaluated as `2 sinh²(a/2) + 2 sin²(b/2)`, a sum of
/// non-negative terms, so nothing cancels as `κ → 0`. Null fields
/// (`κ ≤ 1e-10 (|E|² + |B|²)`) use `u + ξMu + ξ²M²u/2`, exact because the
/// generator cubes to zero.
pub fn push_constant(
    u: FourVelocity,
    field: &UniformField,
    xi: impl Into<ScaledTime>,
) -> FourVelocity {
    let xi = xi.into().value();
    let inv = field_invariants(field);
    if inv.kappa <= NULL_FIELD_EPS * field.energy_scale() {
        let mu = generator_apply(field, u);
        let mmu = generator_apply(field, mu);
        return u + mu * xi + mmu * (0.5 * xi * xi);
    }

    let (ep, bp) = inv.complex_norm();
    let kappa = inv.kappa;
    let a = xi * ep;
    let b = xi * bp;
    let (sh, ch) = (a.sinh(), a.cosh());
    let (sn, co) = b.sin_cos();
    let sha = (0.5 * a).sinh();
    let snb = (0.5 * b).sin();
    let diff = 2.0 * (sha * sha + snb * snb);

    let half_sum = 0.5 * (ch + co);
    let w = field.energy_scale() / kappa * 0.5 * diff;
    let c = Coefficients {
        identity_plus: half_sum + w,
        identity_minus: half_sum - w,
        along_e: (ep * sh + bp * sn) / kappa,
        along_b: (bp * sh - ep * sn) / kappa,
        dyad: diff / kappa,
    };
    apply_structure(&c, field, u)
}

/// `sinh(a)/a`
fn sinhc(a: f64) -> f64 {
    if a.abs() < 1e-4 {
        1.0 + a * a / 6.0
    } else {
        a.sinh() / a
    }
}

/// `sin(a)/a`
fn sinc(a: f64) -> f64 {
    if a.abs() < 1e-4 {
        1.0 - a * a / 6.0
    } else {
        a.sin() / a
    }
}

/// `(cosh(a) − 1)/a`
fn cosh_m1_over(a: f64) -> f64 {
    if a.abs() < 1e-4 {
        0.5 * a * (1.0 + a * a / 12.0)
    } else {
        let h = (0.5 * a).sinh();
        2.0 * h * h / a
    }
}

/// `(1 − cos(a))/a`
fn one_m_cos_over(a: f64) -> f64 {
    if a.abs() < 1e-4 {
        0.5 * a * (1.0 - a * a / 12.0)
    } else {
        let h = (0.5 * a).sin();
        2.0 * h * h / a
    }
}

/// `sinh(a)/a − 1`
fn sinhc_m1(a: f64) -> f64 {
    let a2 = a * a;
    if a.abs() < 0.25 {
        // a²/3! + a⁴/5! + ... + a¹²/13!
        let mut term = a2 / 6.0;
        let mut sum = term;
        for k in 2..=6 {
            term *= a2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
        }
        sum
    } else {
        a.sinh() / a - 1.0
    }
}

/// `1 − sin(a)/a`
fn one_m_sinc(a: f64) -> f64 {
    let a2 = a * a;
    if a.abs() < 0.25 {
        let mut term = a2 / 6.0;
        let mut sum = term;
        for k in 2..=6 {
            term *= -a2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
        }
        sum
    } else {
        1.0 - a.sin() / a
    }
}

/// Position increment `Δx_μ = ∫₀^ξ u_μ(s) ds` along the exact constant-field
/// motion.
///
/// Each time-dependent coefficient of [`push_constant`] is integrated
/// term by term; the `1/E′` and `1/B′` factors are folded into `sinh(a)/a`
/// style functions of `a = ξE′`, `b = ξB′` with short series near zero.
pub fn displacement_constant(
    u: FourVelocity,
    field: &UniformField,
    xi: impl Into<ScaledTime>,
) -> SpaceTimePoint {
    let xi = xi.into().value();
    let inv = field_invariants(field);
    let out = if inv.kappa <= NULL_FIELD_EPS * field.energy_scale() {
        let mu = generator_apply(field, u);
        let mmu = generator_apply(field, mu);
        u * xi + mu * (0.5 * xi * xi) + mmu * (xi * xi * xi / 6.0)
    } else {
        let (ep, bp) = inv.complex_norm();
        let kappa = inv.kappa;
        let a = xi * ep;
        let b = xi * bp;
        let sha = (0.5 * a).sinh();
        let snb = (0.5 * b).sin();
        // ch − co at the endpoint and its integral over [0, ξ]
        let diff = 2.0 * (sha * sha + snb * snb);
        let diff_int = xi * (sinhc_m1(a) + one_m_sinc(b));

        let half_sum_int = 0.5 * xi * (sinhc(a) + sinc(b));
        let w_int = field.energy_scale() / kappa * 0.5 * diff_int;
        let c = Coefficients {
            identity_plus: half_sum_int + w_int,
            identity_minus: half_sum_int - w_int,
            along_e: diff / kappa,
            along_b: xi * (bp * cosh_m1_over(a) - ep * one_m_cos_over(b)) / kappa,
            dyad: diff_int / kappa,
        };
        apply_structure(&c, field, u)
    };
    SpaceTimePoint::new(out.u0, out.u)
}

/// Result of the factored complex evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPathOutput {
    /// Real part of the propagated 4-velocity.
    pub u: FourVelocity,
    /// Largest absolute imaginary part left over in any component.
    pub imag_residue: f64,
}

/// One complex half-step
///
/// ```text
/// u0' = c u0 − s F̂·u
/// u'  = c u  − s (u0 F̂ + σ i F̂×u)
/// ```
///
/// with `σ = +1` for the `F/2` factor and `σ = −1` for its conjugate.
fn complex_half_step(
    u0: Complex64,
    u: &ComplexVec3,
    fhat: &ComplexVec3,
    c: Complex64,
    s: Complex64,
    sigma: f64,
    cross_term: bool,
) -> (Complex64, ComplexVec3) {
    let new_u0 = c * u0 - s * fhat.dot(u);
    let mut inner = fhat.scale(u0);
    if cross_term {
        inner = inner.add(&fhat.cross(u).scale(Complex64::new(0.0, sigma)));
    }
    let new_u = u.scale(c).sub(&inner.scale(s));
    (new_u0, new_u)
}

fn complex_path(
    u: FourVelocity,
    field: &UniformField,
    xi: f64,
    cross_term: bool,
) -> Result<ComplexPathOutput> {
    let inv = field_invariants(field);
    if inv.kappa <= NULL_FIELD_EPS * field.energy_scale() {
        return Err(Error::NullField { kappa: inv.kappa });
    }
    let (ep, bp) = inv.complex_norm();
    let f_norm = Complex64::new(ep, bp);
    let f_vec = ComplexVec3::new(field.e_field, field.b_field);
    let fhat = f_vec.scale(f_norm.inv());
    let arg = f_norm * (0.5 * xi);
    let (c, s) = (arg.cosh(), arg.sinh());

    let u0 = Complex64::new(u.u0, 0.0);
    let uvec = ComplexVec3::real(u.u);
    // exp(ξ(F/2)·K) exp(ξ(−iF/2)·J)
    let (u0, uvec) = complex_half_step(u0, &uvec, &fhat, c, s, 1.0, cross_term);
    // exp(ξ(−iF/2)*·J) exp(ξ(F/2)*·K)
    let (u0, uvec) = complex_half_step(
        u0,
        &uvec,
        &fhat.conj(),
        c.conj(),
        s.conj(),
        -1.0,
        cross_term,
    );

    let imag_residue = u0.im.abs().max(uvec.im.max_abs());
    Ok(ComplexPathOutput {
        u: FourVelocity::new(u0.re, uvec.re),
        imag_residue,
    })
}

/// Evaluates the constant-field propagator as the product of its two
/// commuting complex factors, built on `F = E + iB` and its conjugate.
///
/// The intermediate state after the first factor is complex; the final
/// state is real up to rounding, reported as
/// [`ComplexPathOutput::imag_residue`]. Null fields are rejected because
/// `F̂ = F/|F|` does not exist.
pub fn push_constant_complex_path(
    u: FourVelocity,
    field: &UniformField,
    xi: impl Into<ScaledTime>,
) -> Result<ComplexPathOutput> {
    complex_path(u, field, xi.into().value(), true)
}

/// The complex path with the `i F̂×u` term dropped from both half-steps.
/// Only useful to demonstrate that the term is required for the norm to
/// be preserved.
#[doc(hidden)]
pub fn push_constant_complex_path_without_cross_term(
    u: FourVelocity,
    field: &UniformField,
    xi: impl Into<ScaledTime>,
) -> Result<ComplexPathOutput> {
    complex_path(u, field, xi.into().value(), false)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, LN_2};

    use super::*;
    use crate::oracle::push_oracle;
    use crate::types::minkowski_norm;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    fn max_diff(a: FourVelocity, b: FourVelocity) -> f64 {
        (a - b).max_abs()
    }

    #[test]
    fn rotate_quarter_turn_about_z() {
        let u = FourVelocity::new(5.0, v(1.0, 0.0, 0.0));
        let out = rotate(u, v(0.0, 0.0, 1.0), FRAC_PI_2);
        assert!(max_diff(out, FourVelocity::new(5.0, v(0.0, 1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn rotate_zero_time_and_zero_field_are_identity() {
        let u = FourVelocity::new(2.0, v(0.3, -0.1, 0.7));
        assert_eq!(rotate(u, v(0.4, 1.0, -3.0), 0.0), u);
        assert_eq!(rotate(u, Vec3::ZERO, 1.3), u);
    }

    #[test]
    fn rotate_matches_oracle() {
        let u = FourVelocity::new(1.0, v(1.0, 2.0, 3.0));
        let b = v(0.4, -1.1, 0.2);
        let out = rotate(u, b, 0.83);
        let expect = push_oracle(u, &UniformField::magnetic(b), 0.83);
        assert!(max_diff(out, expect) < 1e-12);
    }

    #[test]
    fn boost_from_rest_by_ln2() {
        let out = boost(FourVelocity::REST, v(1.0, 0.0, 0.0), LN_2);
        assert!(max_diff(out, FourVelocity::new(1.25, v(-0.75, 0.0, 0.0))) < 1e-15);
    }

    #[test]
    fn boost_leaves_perpendicular_components_alone() {
        let u = FourVelocity::from_spatial(v(0.0, 0.4, -1.3));
        let out = boost(u, v(2.0, 0.0, 0.0), 0.77);
        assert_eq!(out.u.y, 0.4);
        assert_eq!(out.u.z, -1.3);
    }

    #[test]
    fn boost_matches_oracle() {
        let u = FourVelocity::new(1.2, v(0.1, -0.5, 0.4));
        let e = v(0.3, 0.9, -0.2);
        let out = boost(u, e, 1.7);
        let expect = push_oracle(u, &UniformField::electric(e), 1.7);
        assert!(max_diff(out, expect) < 1e-12);
    }

    #[test]
    fn parallel_from_rest() {
        let field = UniformField::new(v(0.0, 0.0, 2.0), v(0.0, 0.0, 1.0));
        let out = push_parallel(FourVelocity::REST, &field, 0.5).unwrap();
        let expect = FourVelocity::new(1f64.cosh(), v(0.0, 0.0, -(1f64.sinh())));
        assert!(max_diff(out, expect) < 1e-15);
    }

    #[test]
    fn parallel_factors_commute() {
        let field = UniformField::new(v(0.0, 0.0, 2.0), v(0.0, 0.0, 1.0));
        let u = FourVelocity::new(1.0, v(1.0, 0.0, 0.0));
        for xi in [0.3, 1.0, 2.2] {
            let br = rotate(boost(u, field.e_field, xi), field.b_field, xi);
            let rb = boost(rotate(u, field.b_field, xi), field.e_field, xi);
            assert!(max_diff(br, rb) < 1e-13);
        }
    }

    #[test]
    fn parallel_rejects_crossed_fields() {
        let field = UniformField::new(v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0));
        let err = push_parallel(FourVelocity::REST, &field, 1.0).unwrap_err();
        assert!(matches!(err, Error::NonParallelFields { .. }));
    }

    #[test]
    fn constant_pure_magnetic_is_rotation() {
        let field = UniformField::magnetic(v(0.0, 0.0, 1.0));
        let out = push_constant(FourVelocity::new(5.0, v(1.0, 0.0, 0.0)), &field, FRAC_PI_2);
        assert!(max_diff(out, FourVelocity::new(5.0, v(0.0, 1.0, 0.0))) < 1e-14);
    }

    #[test]
    fn constant_null_field_polynomial() {
        let field = UniformField::new(v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0));
        for xi in [0.5, 1.0, 2.0] {
            let out = push_constant(FourVelocity::REST, &field, xi);
            let expect = FourVelocity::new(1.0 + xi * xi / 2.0, v(-xi, 0.0, xi * xi / 2.0));
            assert!(max_diff(out, expect) <= 1e-14);
        }
        let out = push_constant(FourVelocity::REST, &field, 2.0);
        assert_eq!(out, FourVelocity::new(3.0, v(-2.0, 0.0, 2.0)));
    }

    #[test]
    fn constant_generic_matches_oracle() {
        let field = UniformField::new(v(0.7, -0.2, 0.1), v(0.3, 0.5, -0.9));
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        let out = push_constant(u, &field, 1.3);
        let expect = push_oracle(u, &field, 1.3);
        assert!(max_diff(out, expect) < 1e-12, "{out} vs {expect}");
    }

    #[test]
    fn constant_negative_kappa2_matches_oracle() {
        // E·B < 0 exercises the sign of the imaginary part of the complex norm
        let field = UniformField::new(v(0.7, -0.2, 0.1), v(-0.3, 0.5, -0.9));
        assert!(field.e_field.dot(field.b_field) < 0.0);
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        for xi in [-1.1, 0.4, 2.0] {
            let out = push_constant(u, &field, xi);
            let expect = push_oracle(u, &field, xi);
            assert!(max_diff(out, expect) < 1e-12);
        }
    }

    #[test]
    fn constant_zero_field_is_identity() {
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        assert_eq!(push_constant(u, &UniformField::ZERO, 3.0), u);
    }

    #[test]
    fn complex_path_matches_explicit_solution() {
        let field = UniformField::new(v(0.7, -0.2, 0.1), v(0.3, 0.5, -0.9));
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        let out = push_constant_complex_path(u, &field, 1.3).unwrap();
        assert!(out.imag_residue <= 1e-12);
        assert!(max_diff(out.u, push_constant(u, &field, 1.3)) < 1e-12);
        assert!(max_diff(out.u, push_oracle(u, &field, 1.3)) < 1e-12);
    }

    #[test]
    fn complex_path_parallel_unit_fields() {
        let field = UniformField::new(v(1.0, 0.0, 0.0), v(1.0, 0.0, 0.0));
        let out = push_constant_complex_path(FourVelocity::REST, &field, 1.0).unwrap();
        let expect = push_parallel(FourVelocity::REST, &field, 1.0).unwrap();
        assert!(out.imag_residue <= 1e-12);
        assert!(max_diff(out.u, expect) < 1e-12);
    }

    #[test]
    fn complex_path_zero_time_is_identity() {
        let field = UniformField::new(v(0.7, -0.2, 0.1), v(0.3, 0.5, -0.9));
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        let out = push_constant_complex_path(u, &field, 0.0).unwrap();
        assert_eq!(out.imag_residue, 0.0);
        assert!(max_diff(out.u, u) < 1e-15);
    }

    #[test]
    fn complex_path_rejects_null_field() {
        let field = UniformField::new(v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0));
        let err = push_constant_complex_path(FourVelocity::REST, &field, 1.0).unwrap_err();
        assert!(matches!(err, Error::NullField { .. }));
    }

    #[test]
    fn dropping_cross_term_breaks_norm() {
        let field = UniformField::new(v(0.7, -0.2, 0.1), v(0.3, 0.5, -0.9));
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        let broken = push_constant_complex_path_without_cross_term(u, &field, 1.3).unwrap();
        let drift = (minkowski_norm(broken.u) - minkowski_norm(u)).abs();
        assert!(drift > 1e-6, "drift {drift:e}");
    }

    #[test]
    fn displacement_free_drift() {
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        let dx = displacement_constant(u, &UniformField::ZERO, 2.5);
        assert_eq!(dx, SpaceTimePoint::new(1.5 * 2.5, u.u * 2.5));
    }

    #[test]
    fn displacement_pure_boost_from_rest() {
        let dx = displacement_constant(
            FourVelocity::REST,
            &UniformField::electric(v(1.0, 0.0, 0.0)),
            LN_2,
        );
        assert!((dx.x0 - 0.75).abs() < 1e-15);
        assert!((dx.x - v(-0.25, 0.0, 0.0)).max_abs() < 1e-15);
    }

    #[test]
    fn displacement_derivative_is_velocity() {
        let h = 1e-5;
        let cases = [
            UniformField::new(v(0.7, -0.2, 0.1), v(0.3, 0.5, -0.9)),
            UniformField::new(v(0.7, -0.2, 0.1), v(-0.3, 0.5, -0.9)),
            UniformField::new(v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)),
            UniformField::magnetic(v(0.0, 0.3, 1.0)),
            UniformField::electric(v(0.0, 0.3, 1.0)),
        ];
        let u = FourVelocity::new(1.5, v(0.5, -0.8, 0.6));
        for field in cases {
            for xi in [-0.7, 0.2, 1.4] {
                let plus = displacement_constant(u, &field, xi + h);
                let minus = displacement_constant(u, &field, xi - h);
                let fd = (plus - minus).to_array().map(|d| d / (2.0 * h));
                let vel = push_constant(u, &field, xi).to_array();
                for (a, b) in fd.iter().zip(&vel) {
                    assert!((a - b).abs() < 1e-7, "{field:?} xi={xi}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn small_argument_helpers_are_continuous() {
        for f in [
            sinhc,
            sinc,
            cosh_m1_over,
            one_m_cos_over,
            sinhc_m1,
            one_m_sinc,
        ] {
            for edge in [1e-4, 0.25] {
                let below = f(edge * (1.0 - 1e-12));
                let above = f(edge * (1.0 + 1e-12));
                // the 2e-12 shift itself moves f by at most ~4e-12 relative
                assert!((below - above).abs() <= 1e-11 * below.abs());
            }
        }
    }
}
