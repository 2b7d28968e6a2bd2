mod common;

use common::oracle::ZERO_ORDINATES;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeta_cycles::laplacian::*;
use zeta_cycles::schwartz::{gaussian_seed, make_test_function, TestFunction};
use zeta_cycles::specfun::find_zeros;
use zeta_cycles::{Complex64, Error, EvalConfig, ZetaZero};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn eigenvalue_examples() {
    assert_eq!(delta_eigenvalue(c(0.5, 0.0)), c(-0.25, 0.0));
    assert_eq!(delta_eigenvalue(c(0.0, 0.0)), c(0.0, 0.0));
    assert_eq!(delta_eigenvalue(c(1.0, 0.0)), c(0.0, 0.0));
    let t = ZERO_ORDINATES[0];
    let v = delta_eigenvalue(c(0.5, t));
    assert_eq!(v.im, 0.0);
    assert!((v.re + t * t + 0.25).abs() <= 1e-12 * t * t);
    assert!(!rh_predicate(c(0.6, 14.0)));
    assert!(rh_predicate(c(0.3, 0.0)));
    assert!(!rh_predicate(c(1.5, 0.0)));
}

#[test]
fn computed_zeros_give_negative_eigenvalues() {
    let zeros = find_zeros(0.0, 60.0, &EvalConfig::default()).unwrap();
    assert_eq!(zeros.len(), 13);
    let report = negativity_report(&zeros);
    for (q, z) in report.iter().zip(&zeros) {
        assert!(q.negativity_ok());
        let want = -(z.ordinate * z.ordinate + 0.25);
        assert!((q.value.re - want).abs() <= 1e-12 * want.abs());
        assert!(q.value.im.abs() <= 1e-12);
        assert_eq!(q.multiplicity, 1);
    }
}

#[test]
fn csv_report() {
    let zeros: Vec<ZetaZero> = ZERO_ORDINATES[..2]
        .iter()
        .map(|&t| ZetaZero {
            ordinate: t,
            multiplicity: 1,
            abs_error: 1e-12,
        })
        .collect();
    let csv = report_csv(&negativity_report(&zeros));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "ordinate,eigenvalue,negativity_ok");
    assert_eq!(lines[1], "14.1347251417347,-200.040454832387,true");
    assert_eq!(lines.len(), 3);
    assert_eq!(report_csv(&[]), "ordinate,eigenvalue,negativity_ok\n");
}

#[test]
fn predicate_matches_set_membership_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut counts = [0usize; 2];
    for i in 0..10_000 {
        let rho = match i % 4 {
            0 => c(0.5, rng.gen_range(-100.0..100.0)),
            1 => c(rng.gen_range(-2.0..3.0), 0.0),
            2 => c(rng.gen_range(0.0..1.0), rng.gen_range(-100.0..100.0)),
            _ => c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
        };
        let want = in_critical_set(rho);
        assert_eq!(rh_predicate(rho), want, "rho = {rho}");
        counts[want as usize] += 1;
    }
    assert!(counts[0] > 4000 && counts[1] > 2500, "{counts:?}");
}

#[test]
fn delta_of_seed_matches_mellin_multiplier() {
    for k in 0..=4 {
        let g = TestFunction::from_poly(format!("g{k}"), gaussian_seed(k).unwrap());
        let image = delta_on_test_function(&g).unwrap();
        assert!(image.max_mellin_residual <= 1e-12, "k={k}");
    }
    let f = make_test_function(1).unwrap();
    let r = delta_on_test_function(&f).unwrap().max_mellin_residual;
    assert!(r <= 1e-10, "{r:e}");
}

#[test]
fn delta_needs_symbolic_input() {
    let opaque = make_test_function(0).unwrap().without_closed_form();
    let generic = TestFunction::from_fn(
        "opaque",
        zeta_cycles::schwartz::DecayBound {
            constant: 1.0,
            scale: 1.0,
        },
        |x| (-x * x).exp(),
    );
    assert!(delta_on_test_function(&opaque).is_ok());
    assert!(matches!(
        delta_on_test_function(&generic),
        Err(Error::UnsupportedRepresentation(_))
    ));
}

proptest! {
    #[test]
    fn multiplier_identity(re in -10.0f64..10.0, im in -10.0f64..10.0) {
        let z = c(re, im);
        let lhs = conjugated_delta_multiplier(z);
        let rhs = delta_eigenvalue(z);
        prop_assert!((lhs - rhs).norm() <= 1e-14 * (1.0 + z.norm_sqr()));
    }

    #[test]
    fn eigenvalue_symmetric_under_functional_equation(re in -3.0f64..3.0, im in -50.0f64..50.0) {
        let rho = c(re, im);
        let a = delta_eigenvalue(rho);
        let b = delta_eigenvalue(c(1.0, 0.0) - rho);
        prop_assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
    }
}
