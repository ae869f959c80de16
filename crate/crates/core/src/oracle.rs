//! Brute-force reference for the exact propagators.
//!
//! Nothing in this module calls into [`crate::exact`]. The equations of
//! motion are realized as a 4×4 generator matrix acting on `(u0, u1, u2, u3)`,
//! its exponential is computed by scaling and squaring, and non-uniform
//! fields are handled by classical RK4.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::splitting::ParticleState;
use crate::types::{FourVelocity, ScaledTime, SpaceTimePoint, UniformField, Vec3};

/// Scaling target for `‖ξm‖₁` before the Taylor core.
const EXP_SCALE_TARGET: f64 = 0.5;
/// Number of Taylor terms beyond the identity.
const EXP_TAYLOR_TERMS: usize = 18;

/// Dense row-major 4×4 matrix acting on `(u0, u1, u2, u3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[f64; 4]; 4]);

impl Matrix4 {
    pub const ZERO: Matrix4 = Matrix4([[0.0; 4]; 4]);

    pub fn identity() -> Self {
        let mut m = Self::ZERO;
        for i in 0..4 {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..4)
            .map(|j| (0..4).map(|i| self.0[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Cofactor expansion along the first row.
    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        let minor = |skip: usize| -> f64 {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            let a = |r: usize, c: usize| m[r][cols[c]];
            a(1, 0) * (a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1))
                - a(1, 1) * (a(2, 0) * a(3, 2) - a(2, 2) * a(3, 0))
                + a(1, 2) * (a(2, 0) * a(3, 1) - a(2, 1) * a(3, 0))
        };
        (0..4)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * minor(j)
            })
            .sum()
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, o: Matrix4) -> Matrix4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += o.0[i][j];
            }
        }
        out
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, o: Matrix4) -> Matrix4 {
        self + o.scale(-1.0)
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, o: Matrix4) -> Matrix4 {
        let mut out = Matrix4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        out
    }
}

/// Matrix `M` with `d(u0, u)/dξ = M·(u0, u)`, read off the component
/// equations `du0/dξ = −E·u`, `du/dξ = B×u − E u0`.
pub fn generator_matrix(field: &UniformField) -> Matrix4 {
    let [ex, ey, ez] = field.e_field.to_array();
    let [bx, by, bz] = field.b_field.to_array();
    Matrix4([
        [0.0, -ex, -ey, -ez],
        [-ex, 0.0, -bz, by],
        [-ey, bz, 0.0, -bx],
        [-ez, -by, bx, 0.0],
    ])
}

/// `exp(ξ·m)` by scaling and squaring around a truncated Taylor series.
pub fn matrix_exp(m: &Matrix4, xi: f64) -> Matrix4 {
    let a = m.scale(xi);
    let norm = a.norm1();
    let mut squarings = 0u32;
    if norm > EXP_SCALE_TARGET {
        squarings = (norm / EXP_SCALE_TARGET).log2().ceil() as u32;
    }
    let a = a.scale(0.5f64.powi(squarings as i32));

    // Horner form of sum_{k=0}^{N} a^k / k!
    let id = Matrix4::identity();
    let mut acc = id;
    for k in (1..=EXP_TAYLOR_TERMS).rev() {
        acc = id + (a * acc).scale(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = acc * acc;
    }
    acc
}

/// Reference constant-field propagator `u(ξ) = exp(ξM)·u`.
pub fn push_oracle(
    u: FourVelocity,
    field: &UniformField,
    xi: impl Into<ScaledTime>,
) -> FourVelocity {
    let lambda = matrix_exp(&generator_matrix(field), xi.into().value());
    FourVelocity::from_array(lambda.apply(u.to_array()))
}

type CMatrix4 = [[Complex64; 4]; 4];

#[allow(clippy::needless_range_loop)]
fn to_complex(m: &Matrix4, factor: Complex64) -> CMatrix4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = factor * m.0[i][j];
        }
    }
    out
}

fn cadd(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

fn cscale(a: &CMatrix4, s: Complex64) -> CMatrix4 {
    let mut out = *a;
    out.iter_mut().flatten().for_each(|v| *v *= s);
    out
}

fn cmul(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Commutator of the differential operators whose action on the linear
/// coordinate functions is given by the matrices `a` and `b`.
///
/// Applying operator `A` then `B` to `u_μ` multiplies by the matrices in the
/// opposite order, so `[A, B] ↦ b·a − a·b`.
fn op_commutator(a: &CMatrix4, b: &CMatrix4) -> CMatrix4 {
    let ab = cmul(a, b);
    let ba = cmul(b, a);
    let mut out = ba;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] -= ab[i][j];
        }
    }
    out
}

fn cmax_abs_diff(a: &CMatrix4, b: &CMatrix4) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Maximum entry deviation for each commutator relation family.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    pub families: Vec<(&'static str, f64)>,
}

impl CommutatorReport {
    pub fn max_deviation(&self) -> f64 {
        self.families.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }
}

/// Checks the Lorentz-algebra relations on the matrix realization of the
/// rotation generators `J_i` (unit `B` along axis `i`) and boost generators
/// `K_i` (unit `E` along axis `i`), and the commuting complex combinations
/// `M = (J + iK)/2`, `M* = (J − iK)/2`.
#[allow(clippy::needless_range_loop)]
pub fn commutator_table() -> CommutatorReport {
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    let axis = |k: usize| {
        let mut a = [0.0; 3];
        a[k] = 1.0;
        Vec3::from_array(a)
    };
    let j: Vec<CMatrix4> = (0..3)
        .map(|k| to_complex(&generator_matrix(&UniformField::magnetic(axis(k))), one))
        .collect();
    let kb: Vec<CMatrix4> = (0..3)
        .map(|k| to_complex(&generator_matrix(&UniformField::electric(axis(k))), one))
        .collect();
    let m: Vec<CMatrix4> = (0..3)
        .map(|k| cscale(&cadd(&j[k], &cscale(&kb[k], i_unit)), one * 0.5))
        .collect();
    let ms: Vec<CMatrix4> = (0..3)
        .map(|k| cscale(&cadd(&j[k], &cscale(&kb[k], -i_unit)), one * 0.5))
        .collect();

    let zero = [[Complex64::new(0.0, 0.0); 4]; 4];
    // Sum_k coeff * eps_ijk * basis_k
    let rhs = |basis: &[CMatrix4], i: usize, jj: usize, sign: f64| {
        (0..3).fold(zero, |acc, k| {
            cadd(
                &acc,
                &cscale(&basis[k], one * (sign * levi_civita(i, jj, k))),
            )
        })
    };
    let family =
        |lhs_a: &[CMatrix4], lhs_b: &[CMatrix4], expect: &dyn Fn(usize, usize) -> CMatrix4| {
            let mut dev = 0.0f64;
            for a in 0..3 {
                for b in 0..3 {
                    dev = dev.max(cmax_abs_diff(
                        &op_commutator(&lhs_a[a], &lhs_b[b]),
                        &expect(a, b),
                    ));
                }
            }
            dev
        };

    let mut families = vec![
        (
            "[J_i,J_j] = -e_ijk J_k",
            family(&j, &j, &|a, b| rhs(&j, a, b, -1.0)),
        ),
        (
            "[J_i,K_j] = -e_ijk K_k",
            family(&j, &kb, &|a, b| rhs(&kb, a, b, -1.0)),
        ),
        (
            "[K_i,J_j] = -e_ijk K_k",
            family(&kb, &j, &|a, b| rhs(&kb, a, b, -1.0)),
        ),
        (
            "[K_i,K_j] = +e_ijk J_k",
            family(&kb, &kb, &|a, b| rhs(&j, a, b, 1.0)),
        ),
        (
            "[M_i,M_j] = -e_ijk M_k",
            family(&m, &m, &|a, b| rhs(&m, a, b, -1.0)),
        ),
        (
            "[M*_i,M*_j] = -e_ijk M*_k",
            family(&ms, &ms, &|a, b| rhs(&ms, a, b, -1.0)),
        ),
        ("[M_i,M*_j] = 0", family(&m, &ms, &|_, _| zero)),
        ("[M*_i,M_j] = 0", family(&ms, &m, &|_, _| zero)),
    ];

    // [B·J, E·K] = −(B×E)·K for a few integer field pairs
    let pairs = [
        ([1.0, 2.0, -1.0], [0.0, 3.0, 1.0]),
        ([2.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        ([-1.0, 1.0, 3.0], [2.0, -2.0, 1.0]),
        ([1.0, 1.0, 1.0], [1.0, 1.0, 1.0]),
    ];
    let mut mixed = 0.0f64;
    for (b, e) in pairs {
        let b = Vec3::from_array(b);
        let e = Vec3::from_array(e);
        let bj = to_complex(&generator_matrix(&UniformField::magnetic(b)), one);
        let ek = to_complex(&generator_matrix(&UniformField::electric(e)), one);
        let bxe = Vec3::new(
            b.y * e.z - b.z * e.y,
            b.z * e.x - b.x * e.z,
            b.x * e.y - b.y * e.x,
        );
        let expect = to_complex(&generator_matrix(&UniformField::electric(-bxe)), one);
        mixed = mixed.max(cmax_abs_diff(&op_commutator(&bj, &ek), &expect));
    }
    families.push(("[B.J, E.K] = -(BxE).K", mixed));

    CommutatorReport { families }
}

fn rk_rhs(model: &dyn FieldModel, x: SpaceTimePoint, u: [f64; 4]) -> Result<([f64; 4], [f64; 4])> {
    let field = model.eval(&x)?;
    let du = generator_matrix(&field).apply(u);
    Ok((u, du))
}

fn rk_step(model: &dyn FieldModel, state: ParticleState, h: f64) -> Result<ParticleState> {
    let x = state.x.to_array();
    let u = state.u.to_array();
    let point = |v: [f64; 4]| SpaceTimePoint::new(v[0], Vec3::new(v[1], v[2], v[3]));
    let axpy = |a: [f64; 4], s: f64, b: [f64; 4]| {
        let mut out = a;
        for i in 0..4 {
            out[i] += s * b[i];
        }
        out
    };

    let (k1x, k1u) = rk_rhs(model, point(x), u)?;
    let (k2x, k2u) = rk_rhs(model, point(axpy(x, h / 2.0, k1x)), axpy(u, h / 2.0, k1u))?;
    let (k3x, k3u) = rk_rhs(model, point(axpy(x, h / 2.0, k2x)), axpy(u, h / 2.0, k2u))?;
    let (k4x, k4u) = rk_rhs(model, point(axpy(x, h, k3x)), axpy(u, h, k3u))?;

    let mut xn = x;
    let mut un = u;
    for i in 0..4 {
        xn[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        un[i] += h / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
    }
    Ok(ParticleState::new(point(xn), FourVelocity::from_array(un)))
}

/// Classical RK4 on `dx/dξ = u`, `du/dξ = M(x)·u` with uniform steps.
/// Returns `steps + 1` samples, both endpoints included.
pub fn rk_integrate(
    x: SpaceTimePoint,
    u: FourVelocity,
    model: &dyn FieldModel,
    xi_end: f64,
    steps: usize,
) -> Result<Vec<ParticleState>> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let h = xi_end / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut state = ParticleState::new(x, u);
    out.push(state);
    for _ in 0..steps {
        state = rk_step(model, state, h)?;
        out.push(state);
    }
    Ok(out)
}

/// Endpoint of [`rk_integrate`] without storing the trajectory.
pub fn rk_final_state(
    x: SpaceTimePoint,
    u: FourVelocity,
    model: &dyn FieldModel,
    xi_end: f64,
    steps: usize,
) -> Result<ParticleState> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let h = xi_end / steps as f64;
    let mut state = ParticleState::new(x, u);
    for _ in 0..steps {
        state = rk_step(model, state, h)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::uniform_model;

    fn field(e: [f64; 3], b: [f64; 3]) -> UniformField {
        UniformField::new(Vec3::from_array(e), Vec3::from_array(b))
    }

    fn max_diff(a: &Matrix4, b: &Matrix4) -> f64 {
        (*a - *b).max_abs()
    }

    #[test]
    fn generator_pure_electric() {
        let m = generator_matrix(&field([1.0, 0.0, 0.0], [0.0; 3]));
        assert_eq!(m.0[0], [0.0, -1.0, 0.0, 0.0]);
        assert_eq!(m.0[1], [-1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.0[2], [0.0; 4]);
        assert_eq!(m.0[3], [0.0; 4]);
    }

    #[test]
    fn generator_pure_magnetic_is_cross_product() {
        let m = generator_matrix(&field([0.0; 3], [0.0, 0.0, 1.0]));
        assert_eq!(m.0[1], [0.0, 0.0, -1.0, 0.0]);
        assert_eq!(m.0[2], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.0[0], [0.0; 4]);
        assert_eq!(m.0[3], [0.0; 4]);
    }

    #[test]
    fn null_generator_is_nilpotent() {
        let m = generator_matrix(&field([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]));
        let m3 = m * m * m;
        assert_eq!(m3, Matrix4::ZERO);
        assert_ne!(m * m, Matrix4::ZERO);
    }

    #[test]
    fn exp_at_zero_is_identity() {
        let m = generator_matrix(&field([0.3, -2.0, 1.0], [4.0, 0.1, -0.5]));
        assert_eq!(matrix_exp(&m, 0.0), Matrix4::identity());
    }

    #[test]
    fn exp_of_nilpotent_is_truncated_series() {
        let m = generator_matrix(&field([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]));
        for xi in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let expect = Matrix4::identity() + m.scale(xi) + (m * m).scale(xi * xi / 2.0);
            let got = matrix_exp(&m, xi);
            // entries grow like ξ²/2, compare relative to that scale
            let scale = 1.0f64.max(xi * xi);
            assert!(max_diff(&got, &expect) <= 1e-14 * scale, "xi={xi}");
        }
    }

    #[test]
    fn exp_quarter_turn_about_z() {
        let m = generator_matrix(&field([0.0; 3], [0.0, 0.0, 1.0]));
        let r = matrix_exp(&m, std::f64::consts::FRAC_PI_2);
        let expect = Matrix4([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert!(max_diff(&r, &expect) < 1e-15);
    }

    #[test]
    fn exp_pure_boost_matches_hyperbolic_functions() {
        let m = generator_matrix(&field([1.0, 0.0, 0.0], [0.0; 3]));
        for xi in [0.2, 1.0, 3.0, 7.0] {
            let r = matrix_exp(&m, xi);
            let (c, s) = (xi.cosh(), xi.sinh());
            let expect = Matrix4([
                [c, -s, 0.0, 0.0],
                [-s, c, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]);
            assert!(max_diff(&r, &expect) <= 1e-13 * c, "xi={xi}");
        }
    }

    #[test]
    fn exp_is_a_one_parameter_group() {
        let m = generator_matrix(&field([0.4, -0.7, 0.2], [1.1, 0.3, -0.8]));
        let (a, b) = (0.9, -1.6);
        let lhs = matrix_exp(&m, a + b);
        let rhs = matrix_exp(&m, a) * matrix_exp(&m, b);
        assert!(max_diff(&lhs, &rhs) < 1e-12 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn exp_preserves_metric_and_volume() {
        let m = generator_matrix(&field([0.4, -0.7, 0.2], [1.1, 0.3, -0.8]));
        let eta = Matrix4([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]);
        for xi in [0.3, 1.0, 2.5] {
            let l = matrix_exp(&m, xi);
            let g = l.transpose() * eta * l;
            assert!(max_diff(&g, &eta) < 1e-12 * l.max_abs().powi(2));
            assert!((l.determinant() - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn commutators_hold_exactly() {
        let report = commutator_table();
        assert_eq!(report.families.len(), 9);
        for (name, dev) in &report.families {
            assert_eq!(*dev, 0.0, "{name}");
        }
    }

    #[test]
    fn rk_rejects_zero_steps() {
        let model = uniform_model(UniformField::ZERO);
        let err = rk_integrate(SpaceTimePoint::ORIGIN, FourVelocity::REST, &model, 1.0, 0);
        assert_eq!(err.unwrap_err(), Error::ZeroSteps);
    }

    #[test]
    fn rk_free_drift_is_a_straight_line() {
        let model = uniform_model(UniformField::ZERO);
        let u = FourVelocity::from_spatial(Vec3::new(0.5, -0.25, 2.0));
        let traj = rk_integrate(SpaceTimePoint::ORIGIN, u, &model, 2.0, 16).unwrap();
        assert_eq!(traj.len(), 17);
        let end = traj.last().unwrap();
        assert!((end.x.x.x - 1.0).abs() < 1e-15);
        assert!((end.x.x.y + 0.5).abs() < 1e-15);
        assert!((end.x.x.z - 4.0).abs() < 1e-15);
        assert!((end.x.x0 - 2.0 * u.u0).abs() < 1e-14);
        assert_eq!(end.u, u);
    }

    #[test]
    fn rk_gyration_keeps_speed() {
        let model = uniform_model(field([0.0; 3], [0.0, 0.0, 1.0]));
        let u = FourVelocity::from_spatial(Vec3::new(0.8, 0.0, 0.0));
        let period = 2.0 * std::f64::consts::PI;
        let traj = rk_integrate(SpaceTimePoint::ORIGIN, u, &model, period, 1000).unwrap();
        let speed0 = u.u.norm();
        let drift = traj
            .iter()
            .map(|s| (s.u.u.norm() - speed0).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-10, "drift {drift:e}");
        let end = traj.last().unwrap().u;
        assert!((end.u - u.u).max_abs() < 1e-10);
    }
}
