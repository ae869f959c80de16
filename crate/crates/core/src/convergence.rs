//! Step-doubling convergence studies for the splitting schemes.

use crate::error::{Error, Result};
use crate::exact::push_constant;
use crate::fields::FieldModel;
use crate::splitting::{integrate_final, split_step_constant, ParticleState, SchemeCoefficients};
use crate::types::{FourVelocity, UniformField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub steps: usize,
    pub error: f64,
    /// `log2(e_prev / e)` against the previous (half as many steps) row.
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub scheme: String,
    pub design_order: u32,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    fn from_errors(s: &SchemeCoefficients, data: Vec<(usize, f64)>) -> Self {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(data.len());
        for (steps, error) in data {
            let slope = rows.last().map(|prev| (prev.error / error).log2());
            rows.push(ConvergenceRow {
                steps,
                error,
                slope,
            });
        }
        Self {
            scheme: s.name().to_string(),
            design_order: s.order(),
            rows,
        }
    }

    /// Least-squares slope of `−log(error)` against `log(steps)`.
    pub fn fitted_order(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .map(|r| ((r.steps as f64).ln(), -r.error.ln()))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    }

    pub fn local_slopes(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.slope).collect()
    }
}

/// `min_steps · 2^k` for `k = 0..=doublings`.
pub fn step_counts(min_steps: usize, doublings: u32) -> Result<Vec<usize>> {
    if min_steps == 0 {
        return Err(Error::ZeroSteps);
    }
    if doublings < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 doublings to measure an order, got {doublings}"
        )));
    }
    Ok((0..=doublings).map(|k| min_steps << k).collect())
}

/// Error of `n` repeated [`split_step_constant`] steps against
/// [`push_constant`] over the total `xi`, for each step count.
pub fn converge_constant(
    u: FourVelocity,
    field: &UniformField,
    xi: f64,
    s: &SchemeCoefficients,
    min_steps: usize,
    doublings: u32,
) -> Result<ConvergenceTable> {
    let exact = push_constant(u, field, xi);
    let data = step_counts(min_steps, doublings)?
        .into_iter()
        .map(|n| {
            let h = xi / n as f64;
            let approx = (0..n).fold(u, |u, _| split_step_constant(u, field, h, s));
            (n, (approx - exact).max_abs())
        })
        .collect();
    Ok(ConvergenceTable::from_errors(s, data))
}

/// Endpoint error of the non-uniform stepper against a supplied reference
/// endpoint (typically a fine RK4 run), measured over all eight
/// components of `(x, u)`.
pub fn converge_nonuniform(
    state: ParticleState,
    model: &dyn FieldModel,
    xi_end: f64,
    s: &SchemeCoefficients,
    min_steps: usize,
    doublings: u32,
    reference: &ParticleState,
) -> Result<ConvergenceTable> {
    let mut data = Vec::new();
    for n in step_counts(min_steps, doublings)? {
        let end = integrate_final(state, model, xi_end, n, s)?;
        data.push((n, state_distance(&end, reference)));
    }
    Ok(ConvergenceTable::from_errors(s, data))
}

pub fn state_distance(a: &ParticleState, b: &ParticleState) -> f64 {
    (a.x - b.x)
        .to_array()
        .iter()
        .chain((a.u - b.u).to_array().iter())
        .fold(0.0, |m, d| m.max(d.abs()))
}
