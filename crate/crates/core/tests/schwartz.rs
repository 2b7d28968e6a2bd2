mod common;

use std::f64::consts::PI;

use common::oracle::{PSI_FAMILY, PSI_GAUSSIAN_EXAMPLE};
use common::{assert_close, assert_close_c};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeta_cycles::schwartz::*;
use zeta_cycles::specfun::gamma_complex;
use zeta_cycles::{Complex64, Error};

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn family_members_are_admissible() {
    for k in 0..=MAX_SEED {
        let f = make_test_function(k).unwrap();
        f.check_membership().unwrap();
        let (at_zero, integral) = f.vanishing_residuals();
        assert_eq!(at_zero, 0.0, "f_{k}(0)");
        assert!(integral.abs() <= 1e-10, "∫f_{k} = {integral:e}");
        assert!(f.poly().unwrap().integral().abs() < 1e-12);
    }
}

#[test]
fn f0_has_expected_shape() {
    // H(1+H) e^{-πx²} = 2πx²(2πx² - 3) e^{-πx²}
    let f = make_test_function(0).unwrap();
    for x in [0.0, 0.3, 1.0, 2.2] {
        let want = 2.0 * PI * x * x * (2.0 * PI * x * x - 3.0) * (-PI * x * x).exp();
        assert_close(f.eval(x), want, 1e-14, "f_0");
    }
}

#[test]
fn evenness_is_exact() {
    let f = make_test_function(3).unwrap();
    for x in [0.1, 0.77, 1.9, 4.0] {
        assert_eq!(f.eval(-x), f.eval(x));
    }
}

#[test]
fn gaussian_example_is_not_in_the_vanishing_class() {
    let f = TestFunction::gaussian_example();
    let (at_zero, integral) = f.vanishing_residuals();
    assert_eq!(at_zero, -1.0);
    assert!(integral.abs() < 1e-12);
    assert!(matches!(f.check_membership(), Err(Error::InvalidArgument(_))));
    f.check_decay().unwrap();
}

#[test]
fn gaussian_example_closed_form_matches_oracle() {
    let f = TestFunction::gaussian_example();
    for &(zr, re, im) in &PSI_GAUSSIAN_EXAMPLE {
        let got = mellin_psi(&f, z(zr, 0.0)).unwrap().psi;
        assert_close_c(got, z(re, im), 1e-13, "psi of the example");
    }
    // ψ(0) = ¼ π^{-¼} (-1) Γ(¼)
    let want = -0.25 * PI.powf(-0.25) * gamma_complex(z(0.25, 0.0)).unwrap().re;
    assert_close(mellin_psi(&f, z(0.0, 0.0)).unwrap().psi.re, want, 1e-14, "psi(0)");
}

#[test]
fn gaussian_example_quadrature_matches_oracle() {
    let f = TestFunction::gaussian_example().without_closed_form();
    for &(zr, re, im) in &PSI_GAUSSIAN_EXAMPLE {
        let v = mellin_psi(&f, z(zr, 0.0)).unwrap();
        assert_close_c(v.psi, z(re, im), 1e-10, "quadrature psi");
        assert!(v.abs_error < 1e-9);
    }
}

#[test]
fn family_closed_form_matches_oracle() {
    for &(k, zr, re, im) in &PSI_FAMILY {
        let f = make_test_function(k).unwrap();
        let got = mellin_psi(&f, z(zr, 0.0)).unwrap().psi;
        assert_close_c(got, z(re, im), 1e-12, &format!("psi_f{k}({zr})"));
    }
}

#[test]
fn seeded_and_polynomial_closed_forms_agree() {
    for k in 0..=MAX_SEED {
        let f = make_test_function(k).unwrap();
        let poly = f.poly().unwrap();
        for s in [-7.0, -0.5, 0.0, 1.3, 12.0, 40.0] {
            let a = mellin_psi(&f, z(s, 0.0)).unwrap().psi;
            let b = poly.mellin_closed(z(s, 0.0)).unwrap();
            assert!((a - b).norm() <= 1e-11 * a.norm().max(1e-300), "k={k}, s={s}");
        }
    }
}

#[test]
fn psi_vanishes_at_i_over_two() {
    let i2 = z(0.0, 0.5);
    for k in 0..=MAX_SEED {
        let f = make_test_function(k).unwrap();
        assert!(mellin_psi(&f, i2).unwrap().psi.norm() <= 1e-9);
        let q = mellin_psi_quadrature(&f, i2).unwrap();
        assert!(q.psi.norm() <= 1e-9, "quadrature k={k}: {:e}", q.psi.norm());
    }
    let ex = TestFunction::gaussian_example();
    assert!(mellin_psi(&ex, i2).unwrap().psi.norm() <= 1e-15);
}

#[test]
fn closed_form_and_quadrature_agree_at_random_real_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in default_family() {
        for _ in 0..50 {
            let s = rng.gen_range(-40.0..40.0);
            let closed = mellin_psi(&f, z(s, 0.0)).unwrap();
            let quad = mellin_psi_quadrature(&f, z(s, 0.0)).unwrap();
            assert!(
                (closed.psi - quad.psi).norm() <= 1e-9,
                "{} at s={s}: {:e}",
                f.label(),
                (closed.psi - quad.psi).norm()
            );
            assert!(quad.abs_error >= 0.0 && quad.abs_error <= 1e-9);
        }
    }
}

#[test]
fn mellin_conjugation_of_lifted_generator() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..=4 {
        let f = make_test_function(k).unwrap();
        let lifted = f.poly().unwrap().apply_h_lifted();
        for _ in 0..20 {
            let w = z(rng.gen_range(-15.0..15.0), rng.gen_range(-0.3..1.0));
            let lhs = lifted.mellin_closed(w).unwrap();
            let rhs = Complex64::i() * w * mellin_psi(&f, w).unwrap().psi;
            assert!((lhs - rhs).norm() <= 1e-9, "k={k} z={w}");
        }
    }
}

#[test]
fn generator_multipliers_under_mellin() {
    let g = gaussian_seed(2).unwrap();
    for s in [-3.0, 0.0, 2.0, 9.0] {
        let w = z(s, 0.0);
        let base = g.mellin_closed(w).unwrap();
        let h = g.apply_h().mellin_closed(w).unwrap();
        let one_h = g.apply_one_plus_h().mellin_closed(w).unwrap();
        let i = Complex64::i();
        assert!((h - (i * w - 0.5) * base).norm() < 1e-12);
        assert!((one_h - (i * w + 0.5) * base).norm() < 1e-12);
    }
}

#[test]
fn rapid_decay_on_the_real_line() {
    for f in default_family() {
        for m in 1..=4 {
            let weighted = |s: f64| s.powi(m) * mellin_psi(&f, z(s, 0.0)).unwrap().psi.norm();
            let values: Vec<f64> = (0..=59).map(|i| weighted(1.0 + i as f64)).collect();
            assert!(values.iter().all(|v| v.is_finite()));
            // monotone tail beyond s ≈ 20
            let tail = &values[19..];
            assert!(tail.windows(2).all(|w| w[1] < w[0]), "{} m={m}", f.label());
            let sup = values.iter().copied().fold(0.0, f64::max);
            assert!(tail[0] <= sup);
        }
    }
}

#[test]
fn fourier_transform_of_family_is_admissible_dual() {
    // f(0) = 0 and ∫f = 0 swap roles under the transform
    for k in 0..=3 {
        let f = make_test_function(k).unwrap();
        let fhat = f.poly().unwrap().fourier_transform();
        assert!(fhat.eval(0.0).abs() < 1e-12);
        assert!(fhat.integral().abs() < 1e-12);
    }
}

#[test]
fn manifest_lists_family() {
    let ks = [0, 1, 2];
    let json = family_manifest(&ks, &family(&ks).unwrap());
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[2]["label"], "f_2");
    assert_eq!(v[2]["k"], 2);
    assert_eq!(v[2]["psi_closed_form"], true);
}

proptest! {
    #[test]
    fn psi_conjugate_symmetry(k in 0usize..=MAX_SEED, s in 0.0f64..60.0) {
        let f = make_test_function(k).unwrap();
        let a = mellin_psi(&f, z(s, 0.0)).unwrap().psi;
        let b = mellin_psi(&f, z(-s, 0.0)).unwrap().psi;
        prop_assert!((a - b.conj()).norm() <= 1e-10 * a.norm().max(1e-300));
    }

    #[test]
    fn decay_certificate_holds(k in 0usize..=MAX_SEED, x in 0.0f64..15.0) {
        let f = make_test_function(k).unwrap();
        prop_assert!(f.eval(x).abs() <= f.decay().at(x) * (1.0 + 1e-12));
    }

    #[test]
    fn h_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, x in 0.0f64..4.0) {
        let p = GaussianPoly::new(vec![a, 0.0, b], PI);
        let q = GaussianPoly::new(vec![0.0, 1.0], PI);
        let sum = GaussianPoly::new(vec![a, 1.0, b], PI);
        let lhs = sum.apply_h().eval(x);
        let rhs = p.apply_h().eval(x) + q.apply_h().eval(x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }
}
