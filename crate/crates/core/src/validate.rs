//! Seeded randomized property suite.
//!
//! Every deviation is reported relative to the forward error scale of the
//! operation: for `u ↦ Λu` the rounding error of component `i` is bounded by
//! a small multiple of `ε Σ_j |Λ_ij| |u_j|`, which grows like `e^{ξE′}`. The
//! suite divides each deviation by `max(1, that scale)` before comparing with
//! the tolerance. Minkowski-norm drifts are divided by the square of the
//! same scale.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{
    boost, push_constant, push_constant_complex_path,
    push_constant_complex_path_without_cross_term, push_parallel, rotate,
};
use crate::oracle::{commutator_table, generator_matrix, matrix_exp, push_oracle, Matrix4};
use crate::types::{field_invariants, minkowski_norm, FourVelocity, UniformField, Vec3};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Norm violation the cross-term mutation must exceed.
pub const MUTATION_THRESHOLD: f64 = 1e-6;

/// `Λ = exp(ξM)` for the field, from the oracle.
pub fn propagator_matrix(field: &UniformField, xi: f64) -> Matrix4 {
    matrix_exp(&generator_matrix(field), xi)
}

fn abs4(v: FourVelocity) -> [f64; 4] {
    v.to_array().map(f64::abs)
}

/// `max(1, max_i Σ_j |Λ_ij| v_j)` for a non-negative vector `v`.
pub fn forward_scale(lambda: &Matrix4, v_abs: [f64; 4]) -> f64 {
    lambda
        .0
        .iter()
        .map(|row| {
            row.iter()
                .zip(&v_abs)
                .map(|(a, b)| a.abs() * b)
                .sum::<f64>()
        })
        .fold(1.0, f64::max)
}

/// Forward scale of propagating `u` through `field` over `xi`.
pub fn propagation_scale(field: &UniformField, xi: f64, u: FourVelocity) -> f64 {
    forward_scale(&propagator_matrix(field, xi), abs4(u))
}

/// Largest componentwise difference divided by `scale`.
pub fn scaled_deviation(a: FourVelocity, b: FourVelocity, scale: f64) -> f64 {
    (a - b).max_abs() / scale.max(1.0)
}

/// Change of the Minkowski norm divided by `max(1, |n_in|, scale²)`.
pub fn norm_drift(before: FourVelocity, after: FourVelocity, scale: f64) -> f64 {
    let n_in = minkowski_norm(before);
    let denom = 1f64.max(n_in.abs()).max(scale * scale);
    (minkowski_norm(after) - n_in).abs() / denom
}

/// Seeded generator of random fields, states and times.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn scalar(&mut self, range: f64) -> f64 {
        self.rng.gen_range(-range..=range)
    }

    pub fn vec3(&mut self, range: f64) -> Vec3 {
        Vec3::new(self.scalar(range), self.scalar(range), self.scalar(range))
    }

    /// Unit-norm, forward-timelike 4-velocity with spatial components in
    /// `[-range, range]`.
    pub fn state(&mut self, range: f64) -> FourVelocity {
        FourVelocity::from_spatial(self.vec3(range))
    }

    pub fn field(&mut self, range: f64) -> UniformField {
        UniformField::new(self.vec3(range), self.vec3(range))
    }

    /// `E = λB` with `λ ∈ [-2, 2]`.
    pub fn parallel_field(&mut self, range: f64) -> UniformField {
        let b = self.vec3(range);
        let lambda = self.scalar(2.0);
        UniformField::new(b * lambda, b)
    }

    /// Field with `κ ≥ min_ratio · (|E|² + |B|²)`.
    pub fn non_null_field(&mut self, range: f64, min_ratio: f64) -> UniformField {
        loop {
            let f = self.field(range);
            if field_invariants(&f).kappa >= min_ratio * f.energy_scale() {
                return f;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` when the check requires `value > threshold` (mutation check).
    pub must_exceed: bool,
}

impl CheckResult {
    fn within(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold,
            must_exceed: false,
        }
    }

    pub fn passed(&self) -> bool {
        if self.must_exceed {
            self.value > self.threshold
        } else {
            self.value <= self.threshold
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub count: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    pub tolerance: f64,
    /// Component range for fields and spatial velocities.
    pub range: f64,
    /// Range of `ξ`.
    pub xi_range: f64,
}

impl SuiteConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        Self {
            seed,
            count,
            tolerance: DEFAULT_TOLERANCE,
            range: 3.0,
            xi_range: 3.0,
        }
    }
}

#[derive(Default)]
struct Max(f64);

impl Max {
    fn push(&mut self, v: f64) {
        // NaN must fail the check
        if v.is_nan() {
            self.0 = f64::INFINITY;
        } else {
            self.0 = self.0.max(v);
        }
    }
}

/// Oracle equivalence of `push_constant`.
pub fn check_oracle_equivalence(cfg: &SuiteConfig) -> f64 {
    let mut rng = Sampler::new(cfg.seed);
    let mut worst = Max::default();
    for _ in 0..cfg.count {
        let field = rng.field(cfg.range);
        let u = rng.state(cfg.range);
        let xi = rng.scalar(cfg.xi_range);
        let lambda = propagator_matrix(&field, xi);
        let oracle = FourVelocity::from_array(lambda.apply(u.to_array()));
        let scale = forward_scale(&lambda, abs4(u));
        worst.push(scaled_deviation(
            push_constant(u, &field, xi),
            oracle,
            scale,
        ));
    }
    worst.0
}

/// The four special-case reductions: `E = 0`, `B = 0`, `E × B = 0` and the
/// rest start against the complex factorization.
pub fn check_four_reductions(cfg: &SuiteConfig) -> [f64; 4] {
    let mut rng = Sampler::new(cfg.seed ^ 0x4652);
    let mut out = [
        Max::default(),
        Max::default(),
        Max::default(),
        Max::default(),
    ];
    for _ in 0..cfg.count {
        let u = rng.state(cfg.range);
        let xi = rng.scalar(cfg.xi_range);

        let b = UniformField::magnetic(rng.vec3(cfg.range));
        let scale = propagation_scale(&b, xi, u);
        out[0].push(scaled_deviation(
            push_constant(u, &b, xi),
            rotate(u, b.b_field, xi),
            scale,
        ));

        let e = UniformField::electric(rng.vec3(cfg.range));
        let scale = propagation_scale(&e, xi, u);
        out[1].push(scaled_deviation(
            push_constant(u, &e, xi),
            boost(u, e.e_field, xi),
            scale,
        ));

        let par = rng.parallel_field(cfg.range);
        let scale = propagation_scale(&par, xi, u);
        let expect = push_parallel(u, &par, xi).expect("sampled fields are parallel");
        out[2].push(scaled_deviation(push_constant(u, &par, xi), expect, scale));

        let gen = rng.non_null_field(cfg.range, 1e-3);
        let rest = FourVelocity::REST;
        let scale = propagation_scale(&gen, xi, rest);
        let complex = push_constant_complex_path(rest, &gen, xi).expect("non-null field");
        out[3].push(scaled_deviation(
            push_constant(rest, &gen, xi),
            complex.u,
            scale,
        ));
    }
    out.map(|m| m.0)
}

/// Worst scaled norm drift of each propagator, in the order rotate, boost,
/// push_parallel, push_constant, complex path.
pub fn check_norm_preservation(cfg: &SuiteConfig) -> [f64; 5] {
    let mut rng = Sampler::new(cfg.seed ^ 0x4e4f);
    let mut out: [Max; 5] = Default::default();
    for _ in 0..cfg.count {
        let u = rng.state(cfg.range);
        let xi = rng.scalar(cfg.xi_range);
        let field = rng.non_null_field(cfg.range, 1e-3);
        let par = rng.parallel_field(cfg.range);

        let b = UniformField::magnetic(field.b_field);
        let e = UniformField::electric(field.e_field);
        out[0].push(norm_drift(
            u,
            rotate(u, b.b_field, xi),
            propagation_scale(&b, xi, u),
        ));
        out[1].push(norm_drift(
            u,
            boost(u, e.e_field, xi),
            propagation_scale(&e, xi, u),
        ));
        let p = push_parallel(u, &par, xi).expect("parallel");
        out[2].push(norm_drift(u, p, propagation_scale(&par, xi, u)));
        let scale = propagation_scale(&field, xi, u);
        out[3].push(norm_drift(u, push_constant(u, &field, xi), scale));
        let c = push_constant_complex_path(u, &field, xi).expect("non-null");
        out[4].push(norm_drift(u, c.u, scale));
    }
    out.map(|m| m.0)
}

/// Worst scaled imaginary residue of the complex factorization.
pub fn check_complex_residue(cfg: &SuiteConfig) -> f64 {
    let mut rng = Sampler::new(cfg.seed ^ 0x494d);
    let mut worst = Max::default();
    for _ in 0..cfg.count {
        let field = rng.non_null_field(cfg.range, 1e-3);
        let u = rng.state(cfg.range);
        let xi = rng.scalar(cfg.xi_range);
        let out = push_constant_complex_path(u, &field, xi).expect("non-null");
        worst.push(out.imag_residue / propagation_scale(&field, xi, u));
    }
    worst.0
}

/// Group, inverse and linearity properties of `push_constant`, in that order.
pub fn check_group_properties(cfg: &SuiteConfig) -> [f64; 3] {
    let mut rng = Sampler::new(cfg.seed ^ 0x4752);
    let mut out: [Max; 3] = Default::default();
    let half = cfg.xi_range / 2.0;
    for _ in 0..cfg.count {
        let field = rng.field(cfg.range);
        let u = rng.state(cfg.range);
        let (x1, x2) = (rng.scalar(half), rng.scalar(half));

        let mid = push_constant(u, &field, x1);
        let composed = push_constant(mid, &field, x2);
        let direct = push_constant(u, &field, x1 + x2);
        let l1 = propagator_matrix(&field, x1);
        let l2 = propagator_matrix(&field, x2);
        let scale =
            forward_scale(&(l2 * l1), abs4(u)).max(l2.norm_inf() * forward_scale(&l1, abs4(u)));
        out[0].push(scaled_deviation(composed, direct, scale));

        let back = push_constant(push_constant(u, &field, x1), &field, -x1);
        let lm = propagator_matrix(&field, -x1);
        let scale = lm.norm_inf() * forward_scale(&l1, abs4(u));
        out[1].push(scaled_deviation(back, u, scale));

        let v = rng.state(cfg.range);
        let (alpha, beta) = (rng.scalar(2.0), rng.scalar(2.0));
        let lhs = push_constant(u * alpha + v * beta, &field, x1);
        let rhs = push_constant(u, &field, x1) * alpha + push_constant(v, &field, x1) * beta;
        let mut comb = [0.0; 4];
        for (i, c) in comb.iter_mut().enumerate() {
            *c = (alpha * u.to_array()[i]).abs() + (beta * v.to_array()[i]).abs();
        }
        out[2].push(scaled_deviation(lhs, rhs, forward_scale(&l1, comb)));
    }
    out.map(|m| m.0)
}

/// Worst norm violation of the complex path with the `i F̂×u` term removed,
/// over the sampled instances (expected to be large).
pub fn check_cross_term_mutation(cfg: &SuiteConfig) -> f64 {
    let mut rng = Sampler::new(cfg.seed ^ 0x4d55);
    let mut worst = Max::default();
    for _ in 0..cfg.count.clamp(1, 16) {
        let field = rng.non_null_field(1.0, 1e-1);
        let u = rng.state(1.0);
        let xi = 0.5 + rng.scalar(0.5).abs();
        let out = push_constant_complex_path_without_cross_term(u, &field, xi).expect("non-null");
        worst.push(norm_drift(u, out.u, propagation_scale(&field, xi, u)));
    }
    worst.0
}

/// Runs the full suite.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let tol = cfg.tolerance;
    let mut checks = vec![CheckResult::within(
        "oracle equivalence",
        check_oracle_equivalence(cfg),
        tol,
    )];
    let [e0, b0, par, rest] = check_four_reductions(cfg);
    checks.push(CheckResult::within("E=0 reduces to rotation", e0, tol));
    checks.push(CheckResult::within("B=0 reduces to boost", b0, tol));
    checks.push(CheckResult::within(
        "ExB=0 equals parallel solution",
        par,
        tol,
    ));
    checks.push(CheckResult::within(
        "rest start equals complex path",
        rest,
        tol,
    ));

    let names = [
        "norm: rotate",
        "norm: boost",
        "norm: push_parallel",
        "norm: push_constant",
        "norm: complex path",
    ];
    for (name, v) in names.iter().zip(check_norm_preservation(cfg)) {
        checks.push(CheckResult::within(name, v, tol));
    }
    checks.push(CheckResult::within(
        "complex path imaginary residue",
        check_complex_residue(cfg),
        tol,
    ));
    let [group, inverse, linear] = check_group_properties(cfg);
    checks.push(CheckResult::within("group property", group, tol));
    checks.push(CheckResult::within("inverse", inverse, tol));
    checks.push(CheckResult::within("linearity", linear, tol));
    checks.push(CheckResult::within(
        "commutator table",
        commutator_table().max_deviation(),
        tol,
    ));
    checks.push(CheckResult {
        name: "cross-term mutation breaks norm".into(),
        value: check_cross_term_mutation(cfg),
        threshold: MUTATION_THRESHOLD,
        must_exceed: true,
    });
    SuiteReport {
        seed: cfg.seed,
        count: cfg.count,
        checks,
    }
}

/// Convenience wrapper used by the oracle comparisons in tests.
pub fn oracle_deviation(u: FourVelocity, field: &UniformField, xi: f64) -> f64 {
    let scale = propagation_scale(field, xi, u);
    scaled_deviation(
        push_constant(u, field, xi),
        push_oracle(u, field, xi),
        scale,
    )
}
