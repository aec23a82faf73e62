use hyperlc::harness::checks::random_real_field;
use hyperlc::multipliers::symbols::{leray, mat_mul, norm_sq, transpose};
use hyperlc::multipliers::{
    apply_diagonalizer, halfwave_apply, leray_project, operator_l, semigroup_apply, u_diagonalizer, Coefficients,
};
use hyperlc::spectral::{Grid3, VectorField3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn identity_defect(m: &[[f64; 3]; 3]) -> f64 {
    let mut e: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            e = e.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    e
}

fn wave_vector() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-20.0f64..20.0).prop_filter("nonzero", |x| norm_sq(*x) > 1e-6)
}

fn coefficients() -> impl Strategy<Value = Coefficients> {
    (0.05f64..3.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(nu4, a, b)| {
        let nu5 = -0.95 * nu4 + a * 3.0;
        let nu1 = -2.0 * (nu4 + nu5) * (1.0 - b) + b * 3.0 + 1e-9;
        Coefficients::new(nu1, nu4, nu5).unwrap()
    })
}

proptest! {
    #[test]
    fn diagonalizer_is_an_orthogonal_involution(xi in wave_vector()) {
        let u = u_diagonalizer(xi);
        prop_assert!(identity_defect(&mat_mul(&u, &u)) < 1e-12);
        prop_assert!(identity_defect(&mat_mul(&transpose(&u), &u)) < 1e-12);
    }

    #[test]
    fn leray_is_a_projection_onto_divergence_free_vectors(xi in wave_vector()) {
        let p = leray(xi);
        let pp = mat_mul(&p, &p);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((pp[i][j] - p[i][j]).abs() < 1e-12);
            }
            let px: f64 = (0..3).map(|j| p[i][j] * xi[j]).sum();
            prop_assert!(px.abs() < 1e-12 * norm_sq(xi).sqrt());
        }
    }

    #[test]
    fn viscous_symbol_is_uniformly_parabolic(c in coefficients(), xi in wave_vector()) {
        let k2 = norm_sq(xi);
        for l in operator_l(&c, xi) {
            prop_assert!(l - c.parabolicity() * k2 >= -1e-12 * k2);
        }
    }
}

#[test]
fn inadmissible_coefficients_are_rejected() {
    assert!(Coefficients::new(1.0, 0.0, 1.0).is_err());
    assert!(Coefficients::new(1.0, 1.0, -1.0).is_err());
    assert!(Coefficients::new(-4.0, 1.0, 1.0).is_err());
    assert!(Coefficients::new(f64::NAN, 1.0, 1.0).is_err());
}

fn random_vector(grid: Grid3, seed: u64) -> VectorField3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VectorField3::new([0; 3].map(|_| random_real_field(grid, &mut rng, 3.0)))
}

#[test]
fn projected_fields_are_divergence_free() {
    let grid = Grid3::new(16, 1.0).unwrap();
    let u = random_vector(grid, 3);
    let p = leray_project(&u);
    assert!(p.divergence().l2_norm() < 1e-12 * u.l2_norm());
    let pp = leray_project(&p);
    let mut d = pp.clone();
    d.axpy(-1.0, &p);
    assert!(d.l2_norm() < 1e-13 * p.l2_norm());
}

#[test]
fn diagonalizer_preserves_the_l2_norm() {
    let grid = Grid3::new(16, 1.0).unwrap();
    let u = random_vector(grid, 4);
    let w = apply_diagonalizer(&u);
    assert!((w.l2_norm() - u.l2_norm()).abs() < 1e-12 * u.l2_norm());
    let mut back = apply_diagonalizer(&w);
    back.axpy(-1.0, &u);
    assert!(back.l2_norm() < 1e-12 * u.l2_norm());
}

#[test]
fn semigroup_composes_and_contracts() {
    let grid = Grid3::new(16, 1.0).unwrap();
    let c = Coefficients::new(0.5, 1.0, 0.3).unwrap();
    let v = random_vector(grid, 5);
    let at0 = semigroup_apply(&c, 0.0, &v, 0).unwrap();
    let mut d = at0.clone();
    d.axpy(-1.0, &v);
    assert!(d.l2_norm() < 1e-14 * v.l2_norm());

    let two_steps = semigroup_apply(&c, 0.02, &semigroup_apply(&c, 0.03, &v, 0).unwrap(), 0).unwrap();
    let one_step = semigroup_apply(&c, 0.05, &v, 0).unwrap();
    let mut d = two_steps.clone();
    d.axpy(-1.0, &one_step);
    assert!(d.l2_norm() < 1e-13 * v.l2_norm());
    assert!(one_step.l2_norm() <= v.l2_norm());
    assert!(semigroup_apply(&c, -1.0, &v, 0).is_err());
}

#[test]
fn halfwave_group_is_unitary_and_additive() {
    let grid = Grid3::new(16, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = random_real_field(grid, &mut rng, 4.0);
    let g = halfwave_apply(0.7, &f);
    assert!((g.l2_norm() - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
    let mut d = halfwave_apply(0.3, &halfwave_apply(0.4, &f));
    d.axpy(-1.0, &g);
    assert!(d.l2_norm() < 1e-12 * f.l2_norm());
}
