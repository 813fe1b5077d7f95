mod support;

use approx::assert_relative_eq;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sc_sep_core::specfun::{hyp2f1, SpecFunError};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn hyp2f1_matches_frozen_values() {
    // References frozen from a 50-digit evaluation.
    let cases = [
        // (a, b, c, x, expected)
        (1.0, 1.0, 2.0, c64(0.5, 0.0), c64(1.386_294_361_119_890_6, 0.0)), // 2 ln 2
        (0.5, 0.3, 1.5, c64(-3.0, 0.0), c64(0.843_653_073_578_748_76, 0.0)),
        (0.275, 0.325, 0.825, c64(-3.0, 0.0), c64(0.844_384_444_783_218_03, 0.0)),
        (0.275, 0.5, 0.825, c64(-3.0, 0.0), c64(0.779_067_791_838_503_92, 0.0)),
        (
            0.5,
            0.3,
            1.5,
            c64(0.3, 0.4),
            c64(1.024_154_258_707_327_9, 0.049_495_067_805_463_407),
        ),
        (
            1.2,
            0.4,
            2.5,
            c64(-1.5, 2.0),
            c64(0.766_051_642_719_078_5, 0.136_082_059_432_034_56),
        ),
    ];
    for (a, b, c, x, want) in cases {
        let got = hyp2f1(a, b, c, x).unwrap();
        assert_relative_eq!(got.re, want.re, max_relative = 1e-10, epsilon = 1e-12);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-10, epsilon = 1e-12);
    }
}

#[test]
fn hyp2f1_at_zero_is_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let a = rng.gen_range(-3.0..3.0);
        let b = rng.gen_range(-3.0..3.0);
        let c = rng.gen_range(0.2..4.0);
        let got = hyp2f1(a, b, c, c64(0.0, 0.0)).unwrap();
        assert_eq!(got, c64(1.0, 0.0));
    }
}

#[test]
fn hyp2f1_log_identity() {
    // ₂F₁(1, 1, 2, x) = −ln(1−x)/x across series, Pfaff, and Euler regimes.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(-5.0..0.88);
        if x.abs() < 1e-3 {
            continue;
        }
        let got = hyp2f1(1.0, 1.0, 2.0, c64(x, 0.0)).unwrap();
        let want = -(1.0 - x).ln() / x;
        assert_relative_eq!(got.re, want, max_relative = 1e-9);
        assert!(got.im.abs() < 1e-12);
    }
    // Complex arguments past both series radii take the Euler path.
    for x in [c64(1.5, 0.2), c64(1.2, -0.4), c64(2.5, 0.05)] {
        let got = hyp2f1(1.0, 1.0, 2.0, x).unwrap();
        let want = -(c64(1.0, 0.0) - x).ln() / x;
        assert_relative_eq!(got.re, want.re, max_relative = 1e-9);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-9);
    }
}

#[test]
fn hyp2f1_binomial_identity() {
    // c = b collapses the series to (1−x)^{−a}.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let a = rng.gen_range(0.1..1.5);
        let b = rng.gen_range(a + 0.1..3.0);
        let x = rng.gen_range(-3.0..0.85);
        let got = hyp2f1(a, b, b, c64(x, 0.0)).unwrap();
        let want = (1.0 - x).powf(-a);
        assert_relative_eq!(got.re, want, max_relative = 1e-9);
    }
}

#[test]
fn hyp2f1_matches_series_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..500 {
        let a = rng.gen_range(0.05..2.0);
        let b = rng.gen_range(0.05..2.0);
        let c = rng.gen_range(0.3..4.0);
        let x = c64(rng.gen_range(-0.8..0.8), rng.gen_range(-0.5..0.5));
        if x.norm() > 0.85 {
            continue;
        }
        let got = hyp2f1(a, b, c, x).unwrap();
        let want = support::hyp2f1_oracle(a, b, c, x);
        assert_relative_eq!(got.re, want.re, max_relative = 1e-9, epsilon = 1e-13);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-9, epsilon = 1e-13);
    }
}

#[test]
fn hyp2f1_matches_oracle_on_negative_axis() {
    // Arguments past the series radius exercise the Pfaff/Euler routes.
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..500 {
        let a = rng.gen_range(0.05..1.8);
        let b = rng.gen_range(0.05..1.8);
        let c = rng.gen_range((a + b) * 0.5 + 0.2..4.5);
        let x = c64(rng.gen_range(-6.0..-1.0), 0.0);
        let got = hyp2f1(a, b, c, x).unwrap();
        let want = support::hyp2f1_oracle(a, b, c, x);
        assert_relative_eq!(got.re, want.re, max_relative = 1e-9, epsilon = 1e-13);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-9, epsilon = 1e-13);
    }
}

#[test]
fn hyp2f1_rejects_branch_cut_arguments() {
    for x in [1.0, 1.5, 300.0] {
        match hyp2f1(0.5, 0.3, 1.5, c64(x, 0.0)) {
            Err(SpecFunError::OnCut(v)) => assert_eq!(v, x),
            other => panic!("expected OnCut at {x}, got {other:?}"),
        }
    }
    // Just below the cut edge is fine.
    assert!(hyp2f1(0.5, 0.3, 1.5, c64(0.999, 0.0)).is_ok());
    // Off-axis at the same real part is fine too.
    assert!(hyp2f1(0.5, 0.3, 1.5, c64(1.5, 1e-6)).is_ok());
}

#[test]
fn hyp2f1_rejects_parameter_poles() {
    for c in [0.0, -1.0, -5.0] {
        assert!(matches!(
            hyp2f1(0.5, 0.3, c, c64(0.2, 0.0)),
            Err(SpecFunError::ParameterPole(_))
        ));
    }
}

#[test]
fn hyp2f1_unreachable_parameter_combination_is_an_error() {
    // Far outside the series/Pfaff radii the Euler integral needs c > b > 0
    // (or the a↔b swap); when neither slot qualifies we must refuse rather
    // than silently extrapolate.
    let got = hyp2f1(2.5, 3.0, 1.2, c64(-40.0, 0.0));
    assert!(matches!(got, Err(SpecFunError::InvalidParameter(_))));
}
