mod common;

use std::f64::consts::PI;

use common::oracle::{T1, ZERO_ORDINATES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zeta_cycles::operators::covering_sigma_to;
use zeta_cycles::sheaf::*;
use zeta_cycles::{Complex64, Error, EvalConfig, ZetaZero};

type Smooth = Box<dyn Fn(f64) -> Complex64 + Send + Sync>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn zero(t: f64, m: u32) -> ZetaZero {
    ZetaZero {
        ordinate: t,
        multiplicity: m,
        abs_error: 0.0,
    }
}

fn zero_lengths(count: usize) -> Vec<f64> {
    ZERO_ORDINATES[..count].iter().map(|t| 2.0 * PI / t).collect()
}

/// Smooth function with a bump profile, vanishing to sixth order at 0.
fn random_smooth(rng: &mut ChaCha8Rng) -> Smooth {
    let terms: Vec<(Complex64, f64, f64)> = (0..3)
        .map(|_| {
            (
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.2..3.0),
            )
        })
        .collect();
    Box::new(move |l: f64| {
        terms
            .iter()
            .map(|&(a, b, m)| a * (-b * (l - m).powi(2)).exp())
            .sum::<Complex64>()
            * l.powi(6)
    })
}

/// `a0 + a1 sin(b L + φ)` with `|a0| >= 0.5 > |a1|`.
fn random_unit(rng: &mut ChaCha8Rng) -> Smooth {
    let a0 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let a1 = rng.gen_range(-0.4..0.4);
    let b = rng.gen_range(0.5..4.0);
    let phi = rng.gen_range(0.0..2.0 * PI);
    let im = rng.gen_range(-0.3..0.3);
    Box::new(move |l: f64| c(a0 + a1 * (b * l + phi).sin(), im))
}

fn random_section(rng: &mut ChaCha8Rng, grid: Vec<f64>) -> GlobalSection {
    let p = random_smooth(rng);
    let m = random_smooth(rng);
    GlobalSection::from_fns(grid, p, m).unwrap()
}

fn default_grid() -> Vec<f64> {
    section_grid(60.0, 4.0, &zero_lengths(5), 4).unwrap()
}

#[test]
fn zero_section_round_trip() {
    let s = GlobalSection::zero(default_grid()).unwrap();
    let circles = gamma_inverse(&s, 8).unwrap();
    assert!(circles.iter().all(|c| c.max_abs() == 0.0));
    assert_eq!(gamma(&circles).unwrap(), s);
}

#[test]
fn gamma_round_trip_on_random_sections() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let grid = default_grid();
    for _ in 0..50 {
        let s = random_section(&mut rng, grid.clone());
        let back = gamma(&gamma_inverse(&s, 6).unwrap()).unwrap();
        for slot in [Slot::Plus, Slot::Minus] {
            for (a, b) in s.samples(slot).iter().zip(back.samples(slot)) {
                assert!((a - b).norm() <= 1e-10);
            }
        }
    }
}

#[test]
fn covering_invariance_at_every_grid_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let grid = default_grid();
    for _ in 0..3 {
        let s = random_section(&mut rng, grid.clone());
        for &l in s.grid() {
            for n in 1..=4 {
                let r = covering_residual(&s, l, n, 6).unwrap();
                assert!(r <= 1e-8, "L={l} n={n}: {r:e}");
            }
        }
    }
}

#[test]
fn covering_of_reconstructed_circles() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let s = random_section(&mut rng, default_grid());
    let lk = 2.0 * PI / T1;
    for n in 2..=4 {
        let big = s.circle_at(n as f64 * lk, 8 * n).unwrap();
        let small = s.circle_at(lk, 8).unwrap();
        let pushed = covering_sigma_to(&big, n, 8).unwrap();
        assert!(pushed.max_abs_diff(&small) <= 1e-8, "n={n}");
    }
}

#[test]
fn sections_vanish_at_zero_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = random_section(&mut rng, default_grid());
    assert_eq!(s.vanishing_order_at_zero(), DEFAULT_VANISHING_ORDER);
    assert!(s.vanishing_constant().is_finite());
    assert!(s.vanishing_constant() < 100.0);
    assert_eq!(s.coefficient(1e-3, 1).unwrap(), c(0.0, 0.0));
}

#[test]
fn unit_section_has_unit_jets() {
    let zs: Vec<ZetaZero> = ZERO_ORDINATES[..5].iter().map(|&t| zero(t, 1)).collect();
    let s = GlobalSection::from_fns(default_grid(), |_| c(1.0, 0.0), |_| c(0.0, 0.0)).unwrap();
    let jv = quotient_jets(&s, &zs).unwrap();
    assert_eq!(jv.entries.len(), 10);
    for z in &zs {
        assert!((jv.entry(z.ordinate, Slot::Plus).unwrap().jets[0] - 1.0).norm() < 1e-15);
        assert_eq!(jv.entry(z.ordinate, Slot::Minus).unwrap().jets[0], c(0.0, 0.0));
    }
    assert!(!jv.is_annihilated(1e-6));
}

#[test]
fn zeta_multiples_are_annihilated() {
    let cfg = EvalConfig::default();
    let zs: Vec<ZetaZero> = ZERO_ORDINATES[..3].iter().map(|&t| zero(t, 1)).collect();
    let gp = IdealGenerator::zeta_plus(&zs, &cfg);
    let gm = IdealGenerator::zeta_minus(&zs, &cfg);
    let grid = section_grid(30.0, 2.0, &zero_lengths(3), 1).unwrap();
    let h = |l: f64| c(1.0 + 0.3 * l, -0.2 * l * l);
    let s = GlobalSection::from_fns(grid, |l| h(l) * gm.eval(l), |l| h(l) * gp.eval(l)).unwrap();
    let jv = quotient_jets(&s, &zs).unwrap();
    assert!(jv.is_annihilated(1e-9), "max jet {:e}", jv.max_abs());
}

#[test]
fn jets_not_on_grid_are_rejected() {
    let s = GlobalSection::zero(section_grid(60.0, 4.0, &[], 1).unwrap()).unwrap();
    assert!(matches!(
        quotient_jets(&s, &[zero(T1, 1)]),
        Err(Error::UnderResolvedGrid(_))
    ));
}

#[test]
fn section_jets_match_evaluator_jets() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let t = ZERO_ORDINATES[1];
    let lk = 2.0 * PI / t;
    let grid = section_grid(60.0, 4.0, &[lk], 1).unwrap();
    for _ in 0..10 {
        let p = random_smooth(&mut rng);
        let s = GlobalSection::from_fns(grid.clone(), &p, |_| c(0.0, 0.0)).unwrap();
        let jv = quotient_jets(&s, &[zero(t, 3)]).unwrap();
        let from_section = &jv.entry(t, Slot::Plus).unwrap().jets;
        let independent = evaluator_jets(&p, lk, 2, 0.02 * lk).unwrap();
        for (k, (a, b)) in from_section.iter().zip(&independent).enumerate() {
            let scale = 1.0 + b.norm();
            assert!((a - b).norm() <= 1e-7 * scale, "order {k}: {a} vs {b}");
        }
    }
}

#[test]
fn labelled_corpus_is_classified_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let l0 = 0.8;
    let g = IdealGenerator::synthetic(l0, 2, 1.0);
    g.check_orders(1e-6).unwrap();
    let grid = section_grid(60.0, 4.0, &[l0], 1).unwrap();
    let marker = zero(2.0 * PI / l0, 2);
    let mut correct = 0;
    for i in 0..100 {
        let member = i % 2 == 0;
        let h = random_unit(&mut rng);
        let order = if member { 2 } else { rng.gen_range(0..2) };
        let f = move |l: f64| h(l) * (l - l0).powi(order) * g_factor(l, l0);
        let s = GlobalSection::from_fns(grid.clone(), &f, &f).unwrap();
        let by_jets = quotient_jets(&s, &[marker]).unwrap().is_annihilated(1e-6);
        let by_whitney = ideal_membership(&f, &g, 1e-6).unwrap().member;
        if by_jets == member && by_whitney == member {
            correct += 1;
        }
    }
    assert_eq!(correct, 100);
}

fn g_factor(l: f64, l0: f64) -> f64 {
    1.0 + (l - l0).powi(2)
}

#[test]
fn membership_examples() {
    let cfg = EvalConfig::default();
    let zs = vec![zero(T1, 1)];
    let gp = IdealGenerator::zeta_plus(&zs, &cfg);
    let product = |l: f64| c(2.0 + l, 0.5) * gp.eval(l);
    assert!(ideal_membership(product, &gp, 1e-6).unwrap().member);

    let one = ideal_membership(|_| c(1.0, 0.0), &gp, 1e-6).unwrap();
    assert!(!one.member);
    let w = one.witness.unwrap();
    assert!((w.l_k - 2.0 * PI / T1).abs() < 1e-12);
    assert_eq!(w.order, 0);

    let l0 = 1.3;
    let g = IdealGenerator::synthetic(l0, 2, 1.0);
    let simple = ideal_membership(|l| c((l - l0) * (1.0 + l), 0.0), &g, 1e-6).unwrap();
    assert!(!simple.member);
    assert_eq!(simple.witness.unwrap().order, 1);
}

#[test]
fn theta_identity_and_group_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let s = random_section(&mut rng, default_grid());
    assert_eq!(theta_on_sections(1.0, &s).unwrap(), s);
    for (u, v) in [(2.0, 3.0), (0.5, 7.0), (1.7, 1.7)] {
        let lhs = theta_on_sections(u, &theta_on_sections(v, &s).unwrap()).unwrap();
        let rhs = theta_on_sections(u * v, &s).unwrap();
        for slot in [Slot::Plus, Slot::Minus] {
            for (a, b) in lhs.samples(slot).iter().zip(rhs.samples(slot)) {
                assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
            }
        }
    }
    assert!(theta_on_sections(0.0, &s).is_err());
}

#[test]
fn theta_jet_multiplier_at_simple_zeros() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let zs: Vec<ZetaZero> = ZERO_ORDINATES[..5].iter().map(|&t| zero(t, 1)).collect();
    let grid = default_grid();
    for _ in 0..5 {
        let s = random_section(&mut rng, grid.clone());
        let before = quotient_jets(&s, &zs).unwrap();
        for lambda in [0.3, 2.0, 5.5] {
            let after = quotient_jets(&theta_on_sections(lambda, &s).unwrap(), &zs).unwrap();
            for z in &zs {
                let t = z.ordinate;
                for (slot, sign) in [(Slot::Plus, -1.0), (Slot::Minus, 1.0)] {
                    let want = Complex64::from_polar(1.0, sign * t * f64::ln(lambda));
                    let a = after.entry(t, slot).unwrap().jets[0];
                    let b = before.entry(t, slot).unwrap().jets[0];
                    assert!((a - want * b).norm() <= 1e-10 * (1.0 + b.norm()));
                }
            }
        }
    }
}

#[test]
fn jordan_block_at_double_zero() {
    let l0 = 0.9;
    let g = IdealGenerator::synthetic(l0, 2, 1.0);
    for lambda in [0.5, 2.0, 3.0, 6.0] {
        let b = jordan_structure(lambda, &g).unwrap();
        assert!(b.residual <= 1e-10, "λ={lambda}: {:e}", b.residual);
        let n2 = b.nilpotent * b.nilpotent;
        assert!(n2.iter().all(|z| *z == c(0.0, 0.0)));
        // coupling against a finite-difference derivative of the multiplier
        let mult = |l: f64| Complex64::from_polar(1.0, -2.0 * PI * f64::ln(lambda) / l);
        let d = evaluator_jets(mult, l0, 1, 0.01 * l0).unwrap()[1];
        let coupling = b.nilpotent[(1, 0)] * b.eigenvalue;
        assert!((d - coupling).norm() <= 1e-8 * (1.0 + d.norm()));
    }
    let m = |lambda: f64| jordan_structure(lambda, &g).unwrap().matrix;
    let cocycle = (m(2.0) * m(3.0) - m(6.0)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(cocycle <= 1e-10, "{cocycle:e}");
    assert!(jordan_structure(2.0, &IdealGenerator::synthetic(l0, 1, 1.0)).is_err());
}

#[test]
fn section_file_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let s = random_section(&mut rng, default_grid()).with_vanishing_order(4);
    let text = serde_json::to_string(&s).unwrap();
    let back: GlobalSection = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
    assert_eq!(back.vanishing_order_at_zero(), 4);
}
