//! Run configuration: defaults, then a `key = value` file, then flags.
//!
//! Physical inputs are mapped onto the dimensionless core as follows. For a
//! particle of charge `q` (in units of `e`), mass `m` and speed of light `c`,
//! the core's scaled proper time is `ξ = −q τ / (m c)`. The core assumes the
//! electron-like sign `q = −e`; a positive charge therefore runs the core
//! backwards in `ξ`. With the defaults (`q = −1`, `m = c = 1`) `ξ = τ`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use relpush::{
    linear_gradient_model, scheme, uniform_model, FieldModel, FourVelocity, GridField,
    SchemeCoefficients, SpaceTimePoint, UniformField, Vec3,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Uniform,
    Gradient,
    Grid(PathBuf),
}

impl ModelSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(ModelSpec::Uniform),
            "gradient" => Ok(ModelSpec::Gradient),
            _ => match s.strip_prefix("grid:") {
                Some(path) if !path.is_empty() => Ok(ModelSpec::Grid(PathBuf::from(path))),
                _ => bail!("unknown model `{s}` (expected uniform, gradient or grid:PATH)"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Signed charge in units of `e`.
    pub charge: f64,
    pub mass: f64,
    pub c: f64,
    pub e_field: Vec3,
    pub b_field: Vec3,
    pub grad_e: [[f64; 3]; 3],
    pub grad_b: [[f64; 3]; 3],
    pub tau_end: f64,
    pub steps: usize,
    pub scheme: String,
    pub model: ModelSpec,
    /// Explicit `u0`; derived from the mass shell when absent.
    pub u0: Option<f64>,
    pub u: Vec3,
    pub x: Vec3,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            charge: -1.0,
            mass: 1.0,
            c: 1.0,
            e_field: Vec3::ZERO,
            b_field: Vec3::ZERO,
            grad_e: [[0.0; 3]; 3],
            grad_b: [[0.0; 3]; 3],
            tau_end: 1.0,
            steps: 100,
            scheme: "strang_kdk".into(),
            model: ModelSpec::Uniform,
            u0: None,
            u: Vec3::ZERO,
            x: Vec3::ZERO,
            out: None,
            format: None,
            seed: 1,
        }
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| anyhow!("not a number: `{s}`"))?;
    if !v.is_finite() {
        bail!("value must be finite: `{s}`");
    }
    Ok(v)
}

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>> {
    let vals = s.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
    if vals.len() != n {
        bail!(
            "expected {n} comma-separated values, got {} in `{s}`",
            vals.len()
        );
    }
    Ok(vals)
}

pub fn parse_vec3(s: &str) -> Result<Vec3> {
    let v = parse_list(s, 3)?;
    Ok(Vec3::new(v[0], v[1], v[2]))
}

/// Nine comma-separated values, row-major.
pub fn parse_mat3(s: &str) -> Result<[[f64; 3]; 3]> {
    let v = parse_list(s, 9)?;
    Ok([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
}

pub fn parse_format(s: &str) -> Result<Format> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => bail!("unknown format `{s}` (expected csv or json)"),
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key = value", n + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Applies one `key = value` setting. Keys match the long flag names
    /// with `-` replaced by `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let ctx = || format!("invalid value for `{key}`");
        match key {
            "charge" => self.charge = parse_f64(value).with_context(ctx)?,
            "mass" => self.mass = parse_f64(value).with_context(ctx)?,
            "c" => self.c = parse_f64(value).with_context(ctx)?,
            "efield" => self.e_field = parse_vec3(value).with_context(ctx)?,
            "bfield" => self.b_field = parse_vec3(value).with_context(ctx)?,
            "grad_e" => self.grad_e = parse_mat3(value).with_context(ctx)?,
            "grad_b" => self.grad_b = parse_mat3(value).with_context(ctx)?,
            "tau" => self.tau_end = parse_f64(value).with_context(ctx)?,
            "steps" => {
                self.steps = value
                    .trim()
                    .parse()
                    .map_err(|_| anyhow!("not a step count: `{value}`"))?
            }
            "scheme" => self.scheme = value.to_string(),
            "model" => self.model = ModelSpec::parse(value)?,
            "u0" => self.u0 = Some(parse_f64(value).with_context(ctx)?),
            "u" => self.u = parse_vec3(value).with_context(ctx)?,
            "x" => self.x = parse_vec3(value).with_context(ctx)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(parse_format(value)?),
            "seed" => {
                self.seed = value
                    .trim()
                    .parse()
                    .map_err(|_| anyhow!("not a seed: `{value}`"))?
            }
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (k, v) in parse_config_text(&text)? {
            self.set(&k, &v)
                .with_context(|| format!("in config {}", path.display()))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.mass <= 0.0 {
            bail!("mass must be positive");
        }
        if self.c <= 0.0 {
            bail!("c must be positive");
        }
        if self.steps == 0 {
            bail!("steps must be at least 1");
        }
        scheme(&self.scheme)?;
        Ok(())
    }

    /// `−q / (m c)`: multiplies τ to give ξ.
    pub fn xi_per_tau(&self) -> f64 {
        -self.charge / (self.mass * self.c)
    }

    pub fn xi_end(&self) -> f64 {
        self.xi_per_tau() * self.tau_end
    }

    pub fn field(&self) -> UniformField {
        UniformField::new(self.e_field, self.b_field)
    }

    pub fn initial_velocity(&self) -> FourVelocity {
        match self.u0 {
            Some(u0) => FourVelocity::new(u0, self.u),
            None => FourVelocity::from_spatial(self.u),
        }
    }

    pub fn scheme(&self) -> Result<SchemeCoefficients> {
        Ok(scheme(&self.scheme)?)
    }

    pub fn output_format(&self) -> Format {
        self.format.unwrap_or_else(|| match &self.out {
            Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
            _ => Format::Csv,
        })
    }

    /// The field model in physical units and positions.
    pub fn physical_model(&self) -> Result<Box<dyn FieldModel>> {
        Ok(match &self.model {
            ModelSpec::Uniform => Box::new(uniform_model(self.field())),
            ModelSpec::Gradient => Box::new(linear_gradient_model(
                self.field(),
                self.grad_e,
                self.grad_b,
            )),
            ModelSpec::Grid(path) => Box::new(
                GridField::from_path(path)
                    .with_context(|| format!("loading grid {}", path.display()))?,
            ),
        })
    }

    /// The model as seen by the core when integrating in τ: fields scaled by
    /// `−q/(mc)` and evaluated at the physical position `c·x`.
    pub fn core_model(&self) -> Result<ScaledModel> {
        Ok(ScaledModel {
            inner: self.physical_model()?,
            field_scale: self.xi_per_tau(),
            length_scale: self.c,
        })
    }

    /// Initial position in core units (`x / c`).
    pub fn initial_position(&self) -> SpaceTimePoint {
        SpaceTimePoint::new(0.0, self.x / self.c)
    }
}

/// Physical field model wrapped into the core's dimensionless units.
pub struct ScaledModel {
    inner: Box<dyn FieldModel>,
    field_scale: f64,
    length_scale: f64,
}

impl FieldModel for ScaledModel {
    fn eval(&self, x: &SpaceTimePoint) -> relpush::Result<UniformField> {
        let physical = SpaceTimePoint::new(x.x0 * self.length_scale, x.x * self.length_scale);
        Ok(self.inner.eval(&physical)?.scaled(self.field_scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_keys() {
        let text =
            "# run\ncharge = 1\nefield = 0, -1.5, 2\nsteps=32 # inline\nmodel = grid:/tmp/g.txt\n";
        let mut cfg = RunConfig::default();
        for (k, v) in parse_config_text(text).unwrap() {
            cfg.set(&k, &v).unwrap();
        }
        assert_eq!(cfg.charge, 1.0);
        assert_eq!(cfg.e_field, Vec3::new(0.0, -1.5, 2.0));
        assert_eq!(cfg.steps, 32);
        assert_eq!(cfg.model, ModelSpec::Grid(PathBuf::from("/tmp/g.txt")));
    }

    #[test]
    fn bad_values_are_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("efield", "1,2").is_err());
        assert!(cfg.set("mass", "heavy").is_err());
        assert!(cfg.set("colour", "red").is_err());
        assert!(cfg.set("model", "grid:").is_err());
        assert!(parse_config_text("no equals sign").is_err());
        cfg.mass = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn natural_units_give_xi_equal_tau() {
        let mut cfg = RunConfig {
            tau_end: 2.5,
            ..RunConfig::default()
        };
        assert_eq!(cfg.xi_end(), 2.5);
        cfg.charge = 1.0;
        assert_eq!(cfg.xi_end(), -2.5);
        cfg.charge = -2.0;
        cfg.mass = 4.0;
        cfg.c = 0.5;
        assert_eq!(cfg.xi_end(), 2.5);
    }

    #[test]
    fn format_from_extension() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.output_format(), Format::Csv);
        cfg.out = Some(PathBuf::from("run.json"));
        assert_eq!(cfg.output_format(), Format::Json);
        cfg.format = Some(Format::Csv);
        assert_eq!(cfg.output_format(), Format::Csv);
    }
}
