use proptest::prelude::*;

use relpush::validate::{propagation_scale, scaled_deviation};
use relpush::{
    field_invariants, generator_matrix, integrate, linear_gradient_model, matrix_exp,
    minkowski_norm, push_constant, push_constant_complex_path, push_oracle, rk_final_state, scheme,
    split_step_constant, DipoleModel, FieldModel, FourVelocity, GridField, Matrix4, ParticleState,
    SpaceTimePoint, UniformField, Vec3,
};

fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    [-range..range, -range..range, -range..range].prop_map(Vec3::from_array)
}

fn field(range: f64) -> impl Strategy<Value = UniformField> {
    (vec3(range), vec3(range)).prop_map(|(e, b)| UniformField::new(e, b))
}

fn state(range: f64) -> impl Strategy<Value = FourVelocity> {
    vec3(range).prop_map(FourVelocity::from_spatial)
}

/// Rotation about a unit axis by `angle` (Rodrigues).
fn rotate_vec(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let k = axis * axis.norm().recip();
    let (s, c) = angle.sin_cos();
    v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
}

fn close(a: FourVelocity, b: FourVelocity, field: &UniformField, xi: f64, u: FourVelocity) -> f64 {
    scaled_deviation(a, b, propagation_scale(field, xi, u))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn invariant_identities(f in field(10.0)) {
        let inv = field_invariants(&f);
        let scale = f.energy_scale().max(1.0);
        let (e, b) = (inv.e_prime, inv.b_prime);
        prop_assert!(e >= 0.0 && b >= 0.0);
        prop_assert!((e * e - b * b - inv.kappa1).abs() <= 1e-12 * scale);
        prop_assert!((2.0 * e * b - inv.kappa2.abs()).abs() <= 1e-12 * scale);
        prop_assert!((e * e + b * b - inv.kappa).abs() <= 1e-12 * scale);
    }

    #[test]
    fn invariants_are_rotation_invariant(
        f in field(10.0),
        axis in vec3(1.0).prop_filter("nonzero axis", |a| a.norm() > 1e-3),
        angle in -3.2..3.2f64,
    ) {
        let g = UniformField::new(
            rotate_vec(f.e_field, axis, angle),
            rotate_vec(f.b_field, axis, angle),
        );
        let (a, b) = (field_invariants(&f), field_invariants(&g));
        let scale = f.energy_scale().max(1.0);
        prop_assert!((a.kappa1 - b.kappa1).abs() <= 1e-12 * scale);
        prop_assert!((a.kappa2 - b.kappa2).abs() <= 1e-12 * scale);
    }

    #[test]
    fn duality_swaps_primed_magnitudes(f in field(10.0)) {
        // (E, B) -> (B, -E) exchanges the roles of E' and B'
        let dual = UniformField::new(f.b_field, -f.e_field);
        let (a, b) = (field_invariants(&f), field_invariants(&dual));
        let scale = f.energy_scale().sqrt().max(1.0);
        prop_assert!((a.e_prime - b.b_prime).abs() <= 1e-12 * scale);
        prop_assert!((a.b_prime - b.e_prime).abs() <= 1e-12 * scale);
    }

    #[test]
    fn push_agrees_with_oracle(f in field(3.0), u in state(3.0), xi in -3.0..3.0f64) {
        let got = push_constant(u, &f, xi);
        prop_assert!(close(got, push_oracle(u, &f, xi), &f, xi, u) <= 1e-12);
    }

    #[test]
    fn push_is_rotation_covariant(
        f in field(2.0),
        u in state(2.0),
        xi in -2.0..2.0f64,
        axis in vec3(1.0).prop_filter("nonzero axis", |a| a.norm() > 1e-3),
        angle in -3.2..3.2f64,
    ) {
        let r = |v: Vec3| rotate_vec(v, axis, angle);
        let rf = UniformField::new(r(f.e_field), r(f.b_field));
        let ru = FourVelocity::new(u.u0, r(u.u));
        let direct = push_constant(ru, &rf, xi);
        let pushed = push_constant(u, &f, xi);
        let rotated = FourVelocity::new(pushed.u0, r(pushed.u));
        prop_assert!(close(direct, rotated, &f, xi, u) <= 1e-12);
    }

    #[test]
    fn push_preserves_norm(f in field(3.0), u in state(3.0), xi in -3.0..3.0f64) {
        let out = push_constant(u, &f, xi);
        let scale = propagation_scale(&f, xi, u);
        prop_assert!((minkowski_norm(out) - minkowski_norm(u)).abs() <= 1e-12 * scale * scale);
    }

    #[test]
    fn push_composes_and_inverts(
        f in field(2.0),
        u in state(2.0),
        a in -1.5..1.5f64,
        b in -1.5..1.5f64,
    ) {
        let two = push_constant(push_constant(u, &f, a), &f, b);
        let one = push_constant(u, &f, a + b);
        prop_assert!(close(two, one, &f, a.abs() + b.abs(), u) <= 1e-12);
        let back = push_constant(push_constant(u, &f, a), &f, -a);
        prop_assert!(close(back, u, &f, 2.0 * a.abs(), u) <= 1e-12);
    }

    #[test]
    fn complex_path_matches_from_rest(f in field(3.0), xi in -3.0..3.0f64) {
        prop_assume!(field_invariants(&f).kappa > 1e-3 * f.energy_scale());
        let u = FourVelocity::REST;
        let out = push_constant_complex_path(u, &f, xi).unwrap();
        prop_assert!(close(out.u, push_constant(u, &f, xi), &f, xi, u) <= 1e-12);
    }

    #[test]
    fn exponential_is_a_lorentz_transform(f in field(2.0), xi in -2.0..2.0f64) {
        let lambda = matrix_exp(&generator_matrix(&f), xi);
        let g = Matrix4([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]);
        let defect = lambda.transpose() * g * lambda - g;
        let size = lambda.norm_inf() * lambda.norm_inf();
        prop_assert!(defect.max_abs() <= 1e-12 * size);
        prop_assert!((lambda.determinant() - 1.0).abs() <= 1e-10 * size * size);
    }

    #[test]
    fn splitting_keeps_exact_norm(f in field(2.0), u in state(2.0), h in -0.5..0.5f64) {
        for name in ["strang_kdk", "strang_dkd", "euler_split", "forest_ruth"] {
            let s = scheme(name).unwrap();
            let out = split_step_constant(u, &f, h, &s);
            let size = out.u0.abs().max(u.u0.abs());
            prop_assert!((minkowski_norm(out) - minkowski_norm(u)).abs() <= 1e-12 * size * size);
        }
    }

    #[test]
    fn gradient_model_is_affine(
        base in field(2.0),
        je in [vec3(1.0), vec3(1.0), vec3(1.0)],
        jb in [vec3(1.0), vec3(1.0), vec3(1.0)],
        p in vec3(3.0),
        q in vec3(3.0),
        t in 0.0..1.0f64,
    ) {
        let model = linear_gradient_model(base, je.map(Vec3::to_array), jb.map(Vec3::to_array));
        let at = |x: Vec3| model.eval(&SpaceTimePoint::new(0.0, x)).unwrap();
        let mid = at(p * (1.0 - t) + q * t);
        let blend = at(p).scaled(1.0 - t) + at(q).scaled(t);
        prop_assert!((mid.e_field - blend.e_field).max_abs() <= 1e-12 * 30.0);
        prop_assert!((mid.b_field - blend.b_field).max_abs() <= 1e-12 * 30.0);
    }

    #[test]
    fn grid_interpolation_is_continuous(p in vec3(0.99), d in vec3(1.0)) {
        let grid = GridField::from_fn(Vec3::new(-1.0, -1.0, -1.0), Vec3::new(0.25, 0.5, 0.4), [9, 5, 6], |x| {
            UniformField::new(
                Vec3::new(x.x * x.y, x.z.sin(), 1.0),
                Vec3::new(x.y * x.y, x.x - x.z, x.x * x.y * x.z),
            )
        }).unwrap();
        let eps = 1e-9;
        let q = p + d * eps;
        prop_assume!(q.max_abs() < 1.0);
        let (a, b) = (grid.eval_at(p).unwrap(), grid.eval_at(q).unwrap());
        // the trilinear interpolant of this field is Lipschitz with a small constant
        prop_assert!((a.e_field - b.e_field).max_abs() <= 20.0 * eps);
        prop_assert!((a.b_field - b.b_field).max_abs() <= 20.0 * eps);
    }
}

#[test]
fn long_nonuniform_run_keeps_norm_step_by_step() {
    let model = linear_gradient_model(
        UniformField::new(Vec3::new(0.02, 0.0, 0.01), Vec3::new(0.0, 0.1, 1.0)),
        [[0.0, 0.01, 0.0], [0.01, 0.0, 0.0], [0.0, 0.0, 0.0]],
        [[0.0, 0.0, 0.05], [0.0, 0.0, 0.0], [0.05, 0.0, 0.0]],
    );
    let start = ParticleState::new(
        SpaceTimePoint::ORIGIN,
        FourVelocity::from_spatial(Vec3::new(0.5, 0.0, 0.2)),
    );
    for name in ["strang_kdk", "forest_ruth"] {
        let states = integrate(start, &model, 50.0, 10_000, &scheme(name).unwrap()).unwrap();
        for w in states.windows(2) {
            let size = w[1].u.u0 * w[1].u.u0;
            assert!((minkowski_norm(w[1].u) - minkowski_norm(w[0].u)).abs() <= 1e-12 * size);
        }
        let drift = (minkowski_norm(states.last().unwrap().u) - 1.0).abs();
        assert!(drift <= 1e-11, "{name}: accumulated drift {drift:e}");
    }
}

#[test]
fn dipole_orbit_keeps_norm() {
    let dipole = DipoleModel {
        moment: Vec3::new(0.0, 0.0, 5.0),
        center: Vec3::ZERO,
        softening: 0.1,
        background: UniformField::ZERO,
    };
    let start = ParticleState::new(
        SpaceTimePoint::new(0.0, Vec3::new(2.0, 0.0, 0.3)),
        FourVelocity::from_spatial(Vec3::new(0.0, 0.4, 0.1)),
    );
    let states = integrate(start, &dipole, 20.0, 1000, &scheme("strang_kdk").unwrap()).unwrap();
    let drift = states
        .iter()
        .map(|s| (minkowski_norm(s.u) - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(drift <= 1e-11, "drift {drift:e}");
}

#[test]
fn rk4_reference_is_fourth_order() {
    let model = linear_gradient_model(
        UniformField::new(Vec3::new(0.1, 0.0, 0.05), Vec3::new(0.0, 0.0, 1.0)),
        [[0.0, 0.05, 0.0], [0.05, 0.0, 0.0], [0.0, 0.0, 0.0]],
        [[0.0, 0.0, 0.1], [0.0, 0.0, 0.0], [0.1, 0.0, 0.0]],
    );
    let x = SpaceTimePoint::ORIGIN;
    let u = FourVelocity::from_spatial(Vec3::new(0.3, 0.2, 0.1));
    let reference = rk_final_state(x, u, &model, 2.0, 4096).unwrap();
    let err = |n| {
        let s = rk_final_state(x, u, &model, 2.0, n).unwrap();
        (s.u - reference.u).max_abs().max(
            (s.x - reference.x)
                .to_array()
                .iter()
                .fold(0.0, |m: f64, d| m.max(d.abs())),
        )
    };
    let slope = (err(16) / err(32)).log2();
    assert!((slope - 4.0).abs() < 0.2, "slope {slope}");
}

#[test]
fn matrix_exponential_of_commuting_sum_factorizes() {
    // parallel E and B generate commuting boost and rotation
    let e = UniformField::electric(Vec3::new(0.0, 0.0, 0.7));
    let b = UniformField::magnetic(Vec3::new(0.0, 0.0, 1.3));
    let both = matrix_exp(&generator_matrix(&(e + b)), 1.4);
    let split = matrix_exp(&generator_matrix(&e), 1.4) * matrix_exp(&generator_matrix(&b), 1.4);
    assert!((both - split).max_abs() < 1e-13);
}
