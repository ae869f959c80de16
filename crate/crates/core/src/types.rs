//! Value types shared by every propagator: 3-vectors, 4-velocities,
//! space-time points, constant field patches and the field invariants.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Relative threshold on `κ / (|E|² + |B|²)` below which a field is treated
/// as null (`|E| = |B|`, `E ⊥ B`).
pub const NULL_FIELD_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Component along axis `i` (0, 1 or 2).
    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("Vec3 axis index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Particle 4-velocity `(u0, u)`; for a massive particle `u0 = γ` and
/// `u = γβ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVelocity {
    pub u0: f64,
    pub u: Vec3,
}

impl FourVelocity {
    pub const REST: FourVelocity = FourVelocity {
        u0: 1.0,
        u: Vec3::ZERO,
    };

    pub const fn new(u0: f64, u: Vec3) -> Self {
        Self { u0, u }
    }

    /// Unit-norm forward-timelike state with the given spatial part.
    pub fn from_spatial(u: Vec3) -> Self {
        Self::new((1.0 + u.norm_squared()).sqrt(), u)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.u0, self.u.x, self.u.y, self.u.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], Vec3::new(a[1], a[2], a[3]))
    }

    pub fn minkowski_norm(self) -> f64 {
        minkowski_norm(self)
    }

    /// `u0² + |u|²`, the scale against which rounding in the Minkowski norm
    /// is measured.
    pub fn euclidean_norm_squared(self) -> f64 {
        self.u0 * self.u0 + self.u.norm_squared()
    }

    pub fn max_abs(self) -> f64 {
        self.u0.abs().max(self.u.max_abs())
    }

    pub fn is_finite(self) -> bool {
        self.u0.is_finite() && self.u.is_finite()
    }
}

impl Add for FourVelocity {
    type Output = FourVelocity;
    fn add(self, o: FourVelocity) -> FourVelocity {
        FourVelocity::new(self.u0 + o.u0, self.u + o.u)
    }
}

impl Sub for FourVelocity {
    type Output = FourVelocity;
    fn sub(self, o: FourVelocity) -> FourVelocity {
        FourVelocity::new(self.u0 - o.u0, self.u - o.u)
    }
}

impl Mul<f64> for FourVelocity {
    type Output = FourVelocity;
    fn mul(self, s: f64) -> FourVelocity {
        FourVelocity::new(self.u0 * s, self.u * s)
    }
}

impl fmt::Display for FourVelocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u0, self.u)
    }
}

/// `u0² − |u|²`.
pub fn minkowski_norm(u: FourVelocity) -> f64 {
    u.u0 * u.u0 - u.u.norm_squared()
}

/// Position 4-vector `(x0, x)` in ξ-scaled length units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpaceTimePoint {
    pub x0: f64,
    pub x: Vec3,
}

impl SpaceTimePoint {
    pub const ORIGIN: SpaceTimePoint = SpaceTimePoint {
        x0: 0.0,
        x: Vec3::ZERO,
    };

    pub const fn new(x0: f64, x: Vec3) -> Self {
        Self { x0, x }
    }

    /// Advance by `scale · u`.
    pub fn drift(self, u: FourVelocity, scale: f64) -> Self {
        Self::new(self.x0 + scale * u.u0, self.x + u.u * scale)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x.x, self.x.y, self.x.z]
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x.is_finite()
    }
}

impl Add for SpaceTimePoint {
    type Output = SpaceTimePoint;
    fn add(self, o: SpaceTimePoint) -> SpaceTimePoint {
        SpaceTimePoint::new(self.x0 + o.x0, self.x + o.x)
    }
}

impl Sub for SpaceTimePoint {
    type Output = SpaceTimePoint;
    fn sub(self, o: SpaceTimePoint) -> SpaceTimePoint {
        SpaceTimePoint::new(self.x0 - o.x0, self.x - o.x)
    }
}

/// A constant electromagnetic field patch, in units where `ξ|E|` is a
/// rapidity and `ξ|B|` an angle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UniformField {
    pub e_field: Vec3,
    pub b_field: Vec3,
}

impl UniformField {
    pub const ZERO: UniformField = UniformField {
        e_field: Vec3::ZERO,
        b_field: Vec3::ZERO,
    };

    pub const fn new(e_field: Vec3, b_field: Vec3) -> Self {
        Self { e_field, b_field }
    }

    pub fn electric(e_field: Vec3) -> Self {
        Self::new(e_field, Vec3::ZERO)
    }

    pub fn magnetic(b_field: Vec3) -> Self {
        Self::new(Vec3::ZERO, b_field)
    }

    /// `|E|² + |B|²`.
    pub fn energy_scale(&self) -> f64 {
        self.e_field.norm_squared() + self.b_field.norm_squared()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.e_field * s, self.b_field * s)
    }

    pub fn invariants(&self) -> FieldInvariants {
        field_invariants(self)
    }

    pub fn is_finite(&self) -> bool {
        self.e_field.is_finite() && self.b_field.is_finite()
    }
}

impl Add for UniformField {
    type Output = UniformField;
    fn add(self, o: UniformField) -> UniformField {
        UniformField::new(self.e_field + o.e_field, self.b_field + o.b_field)
    }
}

/// Scaled proper time `ξ = eτ/mc` (signed).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct ScaledTime(pub f64);

impl ScaledTime {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for ScaledTime {
    fn from(xi: f64) -> Self {
        ScaledTime(xi)
    }
}

/// The Lorentz invariants of a field and the real and imaginary parts of
/// the complex norm `F = sqrt((E + iB)·(E + iB)) = E′ + iB′`.
///
/// `e_prime` and `b_prime` are both stored non-negative; the sign of
/// `kappa2` selects the principal branch (see [`FieldInvariants::complex_norm`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldInvariants {
    /// `|E|² − |B|²`
    pub kappa1: f64,
    /// `2 E·B`
    pub kappa2: f64,
    /// `sqrt(κ1² + κ2²)`
    pub kappa: f64,
    pub e_prime: f64,
    pub b_prime: f64,
}

impl FieldInvariants {
    /// Real and imaginary parts of the principal square root of `κ1 + iκ2`.
    ///
    /// The imaginary part carries the sign of `κ2`; the stored `b_prime` is
    /// its magnitude.
    pub fn complex_norm(&self) -> (f64, f64) {
        let b = if self.kappa2 < 0.0 {
            -self.b_prime
        } else {
            self.b_prime
        };
        (self.e_prime, b)
    }
}

/// Coarse classification of a field by its invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRegime {
    /// `E·B = 0`, `|E| > |B|`: a frame exists with pure electric field.
    ElectricDominated,
    /// `E·B = 0`, `|B| > |E|`: a frame exists with pure magnetic field.
    MagneticDominated,
    /// `κ = 0`, including the zero field.
    Null,
    Generic,
}

impl FieldRegime {
    pub fn classify(field: &UniformField) -> Self {
        let inv = field_invariants(field);
        let scale = field.energy_scale();
        if inv.kappa <= NULL_FIELD_EPS * scale {
            FieldRegime::Null
        } else if inv.kappa2.abs() <= NULL_FIELD_EPS * scale {
            if inv.kappa1 > 0.0 {
                FieldRegime::ElectricDominated
            } else {
                FieldRegime::MagneticDominated
            }
        } else {
            FieldRegime::Generic
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FieldRegime::ElectricDominated => "electric-dominated",
            FieldRegime::MagneticDominated => "magnetic-dominated",
            FieldRegime::Null => "null",
            FieldRegime::Generic => "generic",
        }
    }
}

impl fmt::Display for FieldRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Field invariants and the complex norm of `E + iB`.
///
/// The square root of `z = κ1 + iκ2` is taken with the real half-angle
/// formulas `u = sqrt((|z| + x)/2)`, `v = sqrt((|z| − x)/2)`. Only the larger
/// of the two is evaluated that way; the other follows from `2uv = |κ2|`,
/// which avoids cancellation in `|z| − |x|`.
pub fn field_invariants(field: &UniformField) -> FieldInvariants {
    let e = field.e_field;
    let b = field.b_field;
    let kappa1 = e.norm_squared() - b.norm_squared();
    let kappa2 = 2.0 * e.dot(b);
    let kappa = kappa1.hypot(kappa2);

    let (e_prime, b_prime) = if kappa == 0.0 {
        (0.0, 0.0)
    } else if kappa1 >= 0.0 {
        let ep = ((kappa + kappa1) / 2.0).sqrt();
        (ep, kappa2.abs() / (2.0 * ep))
    } else {
        let bp = ((kappa - kappa1) / 2.0).sqrt();
        (kappa2.abs() / (2.0 * bp), bp)
    };

    FieldInvariants {
        kappa1,
        kappa2,
        kappa,
        e_prime,
        b_prime,
    }
}
