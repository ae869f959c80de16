//! Static field sources for the non-uniform integrators.
//!
//! Models depend on the spatial position only; `x0` is carried along by the
//! integrators but never read here.
//!
//! # Grid file format
//!
//! Plain text, whitespace separated, `#` starts a comment. A header of three
//! keyword lines (any order) is followed by one record per node, x index
//! fastest, then y, then z:
//!
//! ```text
//! # relpush grid
//! dims    nx ny nz        (each >= 2)
//! origin  ox oy oz
//! spacing dx dy dz        (each > 0)
//! Ex Ey Ez Bx By Bz       (nx*ny*nz lines)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{SpaceTimePoint, UniformField, Vec3};

/// A static electromagnetic field, evaluated pointwise.
pub trait FieldModel {
    fn eval(&self, x: &SpaceTimePoint) -> Result<UniformField>;
}

impl<T: FieldModel + ?Sized> FieldModel for &T {
    fn eval(&self, x: &SpaceTimePoint) -> Result<UniformField> {
        (**self).eval(x)
    }
}

impl<T: FieldModel + ?Sized> FieldModel for Box<T> {
    fn eval(&self, x: &SpaceTimePoint) -> Result<UniformField> {
        (**self).eval(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformModel {
    pub field: UniformField,
}

pub fn uniform_model(field: UniformField) -> UniformModel {
    UniformModel { field }
}

impl FieldModel for UniformModel {
    fn eval(&self, _x: &SpaceTimePoint) -> Result<UniformField> {
        Ok(self.field)
    }
}

/// Affine field `base + J·(x − origin)` for E and B separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearGradientModel {
    pub base: UniformField,
    pub jacobian_e: [[f64; 3]; 3],
    pub jacobian_b: [[f64; 3]; 3],
    pub origin: Vec3,
}

pub fn linear_gradient_model(
    base: UniformField,
    jacobian_e: [[f64; 3]; 3],
    jacobian_b: [[f64; 3]; 3],
) -> LinearGradientModel {
    LinearGradientModel {
        base,
        jacobian_e,
        jacobian_b,
        origin: Vec3::ZERO,
    }
}

impl LinearGradientModel {
    pub fn with_origin(mut self, origin: Vec3) -> Self {
        self.origin = origin;
        self
    }
}

fn mat_vec(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    let r = |row: &[f64; 3]| row[0] * v.x + row[1] * v.y + row[2] * v.z;
    Vec3::new(r(&m[0]), r(&m[1]), r(&m[2]))
}

impl FieldModel for LinearGradientModel {
    fn eval(&self, x: &SpaceTimePoint) -> Result<UniformField> {
        let d = x.x - self.origin;
        Ok(UniformField::new(
            self.base.e_field + mat_vec(&self.jacobian_e, d),
            self.base.b_field + mat_vec(&self.jacobian_b, d),
        ))
    }
}

/// Softened magnetic dipole on top of a uniform background:
/// `B = 3 (m·r) r / R⁵ − m / R³` with `R² = |r − center|² + softening²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleModel {
    pub moment: Vec3,
    pub center: Vec3,
    pub softening: f64,
    pub background: UniformField,
}

impl FieldModel for DipoleModel {
    fn eval(&self, x: &SpaceTimePoint) -> Result<UniformField> {
        let r = x.x - self.center;
        let r2 = r.norm_squared() + self.softening * self.softening;
        let inv_r = r2.sqrt().recip();
        let inv_r3 = inv_r * inv_r * inv_r;
        let inv_r5 = inv_r3 * inv_r * inv_r;
        let b = r * (3.0 * self.moment.dot(r) * inv_r5) - self.moment * inv_r3;
        Ok(UniformField::new(
            self.background.e_field,
            self.background.b_field + b,
        ))
    }
}

/// Field samples on a regular Cartesian grid, trilinearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    origin: Vec3,
    spacing: Vec3,
    dims: [usize; 3],
    e_samples: Vec<Vec3>,
    b_samples: Vec<Vec3>,
}

impl GridField {
    pub fn new(
        origin: Vec3,
        spacing: Vec3,
        dims: [usize; 3],
        e_samples: Vec<Vec3>,
        b_samples: Vec<Vec3>,
    ) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) {
            return Err(Error::InvalidGrid(format!(
                "every dimension needs at least 2 nodes, got {dims:?}"
            )));
        }
        if !(spacing.x > 0.0 && spacing.y > 0.0 && spacing.z > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "spacing must be finite and positive, got {spacing}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        let n = dims[0] * dims[1] * dims[2];
        if e_samples.len() != n || b_samples.len() != n {
            return Err(Error::InvalidGrid(format!(
                "expected {n} samples, got {} E and {} B",
                e_samples.len(),
                b_samples.len()
            )));
        }
        Ok(Self {
            origin,
            spacing,
            dims,
            e_samples,
            b_samples,
        })
    }

    /// Samples `f` at every node.
    pub fn from_fn(
        origin: Vec3,
        spacing: Vec3,
        dims: [usize; 3],
        f: impl Fn(Vec3) -> UniformField,
    ) -> Result<Self> {
        let n = dims[0] * dims[1] * dims[2];
        let mut e = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    let p = origin
                        + Vec3::new(
                            i as f64 * spacing.x,
                            j as f64 * spacing.y,
                            k as f64 * spacing.z,
                        );
                    let field = f(p);
                    e.push(field.e_field);
                    b.push(field.b_field);
                }
            }
        }
        Self::new(origin, spacing, dims, e, b)
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn spacing(&self) -> Vec3 {
        self.spacing
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Upper corner of the grid.
    pub fn extent(&self) -> Vec3 {
        self.origin
            + Vec3::new(
                (self.dims[0] - 1) as f64 * self.spacing.x,
                (self.dims[1] - 1) as f64 * self.spacing.y,
                (self.dims[2] - 1) as f64 * self.spacing.z,
            )
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> UniformField {
        let n = self.index(i, j, k);
        UniformField::new(self.e_samples[n], self.b_samples[n])
    }

    /// Cell index and fractional offset along one axis.
    fn locate(&self, axis: usize, p: f64) -> Result<(usize, f64)> {
        const NAMES: [char; 3] = ['x', 'y', 'z'];
        let lo = self.origin.component(axis);
        let h = self.spacing.component(axis);
        let cells = self.dims[axis] - 1;
        let hi = lo + cells as f64 * h;
        let slack = 1e-12 * (hi - lo);
        if !(p >= lo - slack && p <= hi + slack) {
            return Err(Error::OutOfBounds {
                axis: NAMES[axis],
                value: p,
                min: lo,
                max: hi,
            });
        }
        let t = ((p - lo) / h).clamp(0.0, cells as f64);
        let cell = (t.floor() as usize).min(cells - 1);
        Ok((cell, t - cell as f64))
    }

    pub fn eval_at(&self, p: Vec3) -> Result<UniformField> {
        let (i, fx) = self.locate(0, p.x)?;
        let (j, fy) = self.locate(1, p.y)?;
        let (k, fz) = self.locate(2, p.z)?;
        let mut e = Vec3::ZERO;
        let mut b = Vec3::ZERO;
        for (dk, wz) in [(0, 1.0 - fz), (1, fz)] {
            for (dj, wy) in [(0, 1.0 - fy), (1, fy)] {
                for (di, wx) in [(0, 1.0 - fx), (1, fx)] {
                    let w = wx * wy * wz;
                    if w == 0.0 {
                        continue;
                    }
                    let n = self.index(i + di, j + dj, k + dk);
                    e += self.e_samples[n] * w;
                    b += self.b_samples[n] * w;
                }
            }
        }
        Ok(UniformField::new(e, b))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut dims: Option<[usize; 3]> = None;
        let mut origin: Option<Vec3> = None;
        let mut spacing: Option<Vec3> = None;
        let mut e = Vec::new();
        let mut b = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::GridParse {
                line: line_no,
                message,
            };
            let mut tokens = line.split_whitespace();
            let first = tokens.next().unwrap_or_default();
            let floats = |toks: &mut dyn Iterator<Item = &str>, n: usize| -> Result<Vec<f64>> {
                let vals = toks
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| err(format!("not a number: `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if vals.len() != n {
                    return Err(err(format!("expected {n} values, found {}", vals.len())));
                }
                if vals.iter().any(|v| !v.is_finite()) {
                    return Err(err("non-finite value".into()));
                }
                Ok(vals)
            };
            let header_done = dims.is_some() && origin.is_some() && spacing.is_some();
            match first {
                "dims" | "origin" | "spacing" if !e.is_empty() => {
                    return Err(err(format!("`{first}` after node records")));
                }
                "dims" => {
                    let vals = tokens
                        .map(|t| {
                            t.parse::<usize>()
                                .map_err(|_| err(format!("not a node count: `{t}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if vals.len() != 3 {
                        return Err(err(format!("expected 3 values, found {}", vals.len())));
                    }
                    dims = Some([vals[0], vals[1], vals[2]]);
                }
                "origin" => {
                    let v = floats(&mut tokens, 3)?;
                    origin = Some(Vec3::new(v[0], v[1], v[2]));
                }
                "spacing" => {
                    let v = floats(&mut tokens, 3)?;
                    spacing = Some(Vec3::new(v[0], v[1], v[2]));
                }
                _ if !header_done => {
                    return Err(err(
                        "node record before the dims/origin/spacing header is complete".into(),
                    ));
                }
                _ => {
                    let v = floats(&mut std::iter::once(first).chain(tokens), 6)?;
                    e.push(Vec3::new(v[0], v[1], v[2]));
                    b.push(Vec3::new(v[3], v[4], v[5]));
                }
            }
        }

        let (Some(dims), Some(origin), Some(spacing)) = (dims, origin, spacing) else {
            return Err(Error::InvalidGrid(
                "missing dims, origin or spacing header".into(),
            ));
        };
        Self::new(origin, spacing, dims, e, b)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidGrid(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Serializes in the grid file format, 17 significant digits per value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let [nx, ny, nz] = self.dims;
        let o = self.origin;
        let h = self.spacing;
        let _ = writeln!(out, "# relpush grid");
        let _ = writeln!(out, "dims {nx} {ny} {nz}");
        let _ = writeln!(out, "origin {:.16e} {:.16e} {:.16e}", o.x, o.y, o.z);
        let _ = writeln!(out, "spacing {:.16e} {:.16e} {:.16e}", h.x, h.y, h.z);
        for (e, b) in self.e_samples.iter().zip(&self.b_samples) {
            let _ = writeln!(
                out,
                "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
                e.x, e.y, e.z, b.x, b.y, b.z
            );
        }
        out
    }
}

/// Trilinear interpolation of the grid at the spatial part of `x`.
pub fn grid_eval(g: &GridField, x: &SpaceTimePoint) -> Result<UniformField> {
    g.eval_at(x.x)
}

impl FieldModel for GridField {
    fn eval(&self, x: &SpaceTimePoint) -> Result<UniformField> {
        grid_eval(self, x)
    }
}
