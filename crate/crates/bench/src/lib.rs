//! Shared inputs for the propagator benchmarks.

use relpush::validate::Sampler;
use relpush::{linear_gradient_model, FourVelocity, LinearGradientModel, UniformField, Vec3};

/// Seeded `(u, field, ξ)` triples spanning the usual validation ranges.
pub fn constant_field_cases(n: usize) -> Vec<(FourVelocity, UniformField, f64)> {
    let mut rng = Sampler::new(7);
    (0..n)
        .map(|_| (rng.state(3.0), rng.field(3.0), rng.scalar(3.0)))
        .collect()
}

pub fn gradient_model() -> LinearGradientModel {
    linear_gradient_model(
        UniformField::new(Vec3::new(0.1, 0.0, 0.05), Vec3::new(0.0, 0.0, 1.0)),
        [[0.0, 0.05, 0.0], [0.05, 0.0, 0.0], [0.0, 0.0, -0.02]],
        [[0.0, 0.0, 0.1], [0.0, 0.0, 0.0], [0.1, 0.0, 0.2]],
    )
}
