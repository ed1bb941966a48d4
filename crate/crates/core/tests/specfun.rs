use num_complex::Complex64;
use proptest::prelude::*;
use zeta4_core::specfun::{gram_point, theta, z, zeta_oracle, Precision, ZEvaluator};
use zeta4_core::Error;

/// Lanczos (g = 7, n = 9) log-gamma, written as a continuous logarithm so
/// its imaginary part needs no branch tracking. Valid for Re z > 0.
fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    // Γ(z) = Γ(z+1)/z keeps the series argument away from the imaginary axis.
    let w = z;
    let mut a = Complex64::new(C[0], 0.0);
    for (k, &c) in C.iter().enumerate().skip(1) {
        a += c / (w + k as f64);
    }
    let t = w + G + 0.5;
    let lg1 = 0.5 * (2.0 * std::f64::consts::PI).ln() + (w + 0.5) * t.ln() - t + a.ln();
    lg1 - z.ln()
}

fn theta_oracle(t: f64) -> f64 {
    lanczos_ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * std::f64::consts::PI.ln()
}

#[test]
fn theta_at_origin() {
    assert_eq!(theta(0.0).unwrap(), 0.0);
}

#[test]
fn theta_matches_lanczos_oracle() {
    for t in [0.5, 3.0, 10.0, 17.0, 29.9, 30.1, 55.0, 100.0, 250.0] {
        let (got, want) = (theta(t).unwrap(), theta_oracle(t));
        assert!((got - want).abs() < 1e-10, "t = {t}: {got} vs {want}");
    }
}

#[test]
fn theta_frozen_high_precision_values() {
    // mpmath.siegeltheta at 30 digits.
    let cases = [
        (10.0, -3.067_074_396_289_895_3),
        (30.0, 8.057_800_136_563_990_2),
        (100.0, 87.972_165_231_787_219_6),
        (1e5, 433_752.027_229_170_78),
    ];
    for (t, want) in cases {
        let got = theta(t).unwrap();
        assert!((got - want).abs() < 1e-10, "t = {t}: {got} vs {want}");
    }
}

#[test]
fn theta_root_near_17_8456() {
    // Bisection on the Lanczos oracle, independent of the crate's theta.
    let (mut lo, mut hi) = (17.0, 19.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if theta_oracle(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo - 17.845_599_540_410_86).abs() < 1e-9);
    assert!(theta(lo).unwrap().abs() < 1e-10);
    assert!((gram_point(0).unwrap() - lo).abs() < 1e-9);
}

#[test]
fn theta_rejects_non_finite() {
    assert!(matches!(theta(f64::NAN), Err(Error::Domain(_))));
    assert!(matches!(theta(f64::INFINITY), Err(Error::Domain(_))));
}

#[test]
fn theta_increases_on_grid() {
    let mut prev = theta(10.0).unwrap();
    let mut t = 10.1;
    while t <= 1e5 {
        let v = theta(t).unwrap();
        assert!(v > prev, "theta not increasing at {t}");
        prev = v;
        t += 0.1;
    }
}

#[test]
fn z_frozen_values() {
    // mpmath.siegelz.
    let cases = [
        (50.0, -0.340_735_005_955_024_98),
        (500.0, 1.472_447_851_055_082_7),
        (5000.0, -0.804_257_236_352_939_85),
    ];
    let prec = Precision::default();
    for (t, want) in cases {
        let p = z(t, &prec).unwrap();
        assert!((p.z - want).abs() <= prec.target_abs_err, "t = {t}: {} vs {want}", p.z);
        assert!(p.abs_err >= 0.0 && p.abs_err <= prec.target_abs_err);
    }
}

#[test]
fn z_at_first_zero() {
    let p = z(14.134_725_141_7, &Precision::default()).unwrap();
    assert!(p.z.abs() < 1e-6);
}

#[test]
fn z_squared_matches_oracle_modulus() {
    let prec = Precision::default();
    for t in [50.0, 500.0, 5000.0] {
        let p = z(t, &prec).unwrap();
        let zeta = zeta_oracle(t, &prec).unwrap();
        assert!((p.z * p.z - zeta.norm_sqr()).abs() <= 2.0 * (2.0 * p.z.abs() + 1.0) * 2.0 * prec.target_abs_err);
    }
}

#[test]
fn rotated_oracle_is_real() {
    let prec = Precision::default();
    for t in [12.5, 77.0, 333.3, 1234.5, 8000.0] {
        let zeta = zeta_oracle(t, &prec).unwrap();
        let rotated = Complex64::from_polar(1.0, theta(t).unwrap()) * zeta;
        assert!(rotated.im.abs() <= 2.0 * prec.target_abs_err, "t = {t}: {}", rotated.im);
    }
}

#[test]
fn more_correction_terms_never_hurt() {
    let heights = [300.0, 700.0, 1500.0, 3000.0];
    let oracle = Precision::default();
    let mut previous: Option<Vec<f64>> = None;
    for k in 0..=4 {
        let prec = Precision {
            correction_terms: k,
            switchover: 200.0,
            target_abs_err: 0.5,
            ..Precision::default()
        };
        let ev = ZEvaluator::new(prec, 3000.0).unwrap();
        let errs: Vec<f64> = heights
            .iter()
            .map(|&t| {
                let want = (Complex64::from_polar(1.0, theta(t).unwrap()) * zeta_oracle(t, &oracle).unwrap()).re;
                (ev.value(t) - want).abs()
            })
            .collect();
        if let Some(prev) = &previous {
            for (e, p) in errs.iter().zip(prev) {
                // Below 1e-11 both paths are at rounding level.
                assert!(*e <= p.max(1e-11), "k = {k}: {e} > {p}");
            }
        }
        previous = Some(errs);
    }
}

#[test]
fn unreachable_precision_is_reported() {
    let prec = Precision {
        correction_terms: 0,
        target_abs_err: 1e-9,
        ..Precision::default()
    };
    match z(2e4, &prec) {
        Err(Error::Precision { requested, achievable }) => {
            assert_eq!(requested, 1e-9);
            assert!(achievable > requested);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn oracle_at_half() {
    let v = zeta_oracle(0.0, &Precision::default()).unwrap();
    assert!((v.re + 1.460_354_508_809_586_8).abs() < 1e-9);
    assert!(v.im.abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_and_riemann_siegel_agree(t in 10.0f64..1e4) {
        let prec = Precision::default();
        let p = z(t, &prec).unwrap();
        let zeta = zeta_oracle(t, &prec).unwrap();
        prop_assert!((p.z.abs() - zeta.norm()).abs() <= 2.0 * prec.target_abs_err);
    }
}
