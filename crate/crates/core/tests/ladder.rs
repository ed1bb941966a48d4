use std::f64::consts::PI;

use proptest::prelude::*;
use zeta4_core::ladder::{
    build_ladder, build_ladder_with, chord, find_almost_parallel_chords, find_unit_slope_chord, measure_log_drift,
    verify_theorem, Convention, LadderOptions, SLOPE_TOL,
};
use zeta4_core::quad::{integrate_z4, MomentOptions};
use zeta4_core::zeros::find_zeros;
use zeta4_core::{validity_length, Error};

#[test]
fn endpoint_matches_direct_integral() {
    let curve = build_ladder(1000.0, 50.0, 0.01, Convention::AnchorLog).unwrap();
    assert!(curve.phi.windows(2).all(|w| w[1] >= w[0]));
    let direct = integrate_z4(1000.0, 50.0, 1e-10).unwrap().value;
    let want = 2.0 * PI * PI * direct / 1000f64.ln().powi(4);
    let got = *curve.phi.last().unwrap() - curve.phi[0];
    assert!((got - want).abs() <= 1e-6 * want, "{got} vs {want}");
}

#[test]
fn weighted_average_at_1000_1007_1020() {
    let curve = build_ladder(1000.0, 20.0, 0.01, Convention::AnchorLog).unwrap();
    let whole = chord(&curve, 1000.0, 1020.0).unwrap().slope * 20.0;
    let parts = chord(&curve, 1000.0, 1007.0).unwrap().slope * 7.0 + chord(&curve, 1007.0, 1020.0).unwrap().slope * 13.0;
    assert!((whole - parts).abs() <= 1e-12 * whole.max(1.0));
}

#[test]
fn theorem_identity_on_100_units() {
    let curve = build_ladder(1e4, 100.0, 0.05, Convention::AnchorLog).unwrap();
    let r = verify_theorem(&curve, 1e4, 1e4 + 100.0).unwrap();
    assert!(r.rel_discrepancy <= 1e-6, "{r:?}");
    assert!(r.lhs > 0.0 && r.slope > 0.0);
}

#[test]
fn theorem_sides_vanish_on_short_intervals() {
    let curve = build_ladder(1e4, 1.0, 0.01, Convention::AnchorLog).unwrap();
    let mut prev = f64::INFINITY;
    for k in 1..=6 {
        let r = verify_theorem(&curve, 1e4, 1e4 + 10f64.powi(-k)).unwrap();
        assert!(r.lhs < prev && r.rhs.abs() <= 2.0 * r.lhs.max(1e-300));
        prev = r.lhs;
    }
    assert!(prev < 1e-5);
}

#[test]
fn log_drift_under_local_log() {
    let t: f64 = 1e4;
    let u = t.powf(13.0 / 14.0);
    let curve = build_ladder(t, u, 0.05, Convention::LocalLog).unwrap();
    let r = measure_log_drift(&curve, t, t + u, &MomentOptions::default()).unwrap();
    let bound = 2.0 * 4.0 * t.ln().ln() / t.ln();
    assert!(r.rel_discrepancy > 0.0 && r.rel_discrepancy <= bound, "{} vs {bound}", r.rel_discrepancy);
    assert!(matches!(verify_theorem(&curve, t, t + 1.0), Err(Error::Convention)));
}

#[test]
fn mean_value_and_slope_agree() {
    // The mean of Z⁴ is near ln⁴T/2π² exactly when the slope is near 1.
    let curve = build_ladder(5000.0, 200.0, 0.02, Convention::AnchorLog).unwrap();
    let scale = curve.mean_scale();
    for (n, len) in [(5000.0, 200.0), (5010.0, 3.0), (5050.0, 40.0), (5123.4, 0.7), (5150.0, 50.0)] {
        let mean = integrate_z4(n, len, 1e-10).unwrap().value / len;
        let slope = chord(&curve, n, n + len).unwrap().slope;
        let mean_dev = (mean / scale - 1.0).abs();
        let slope_dev = (slope - 1.0).abs();
        assert!((mean_dev - slope_dev).abs() <= 1e-7 * (1.0 + slope), "{n}: {mean_dev} vs {slope_dev}");
        for tol in [0.05, 0.2, 0.5, 1.0] {
            assert_eq!(mean_dev <= tol, slope_dev <= tol, "{n} {len} {tol}");
        }
    }
}

#[test]
fn unit_chord_right_after_a_zero_near_1e4() {
    let curve = build_ladder(1e4, 10.0, 0.01, Convention::AnchorLog).unwrap();
    let zeros = find_zeros(1e4, 1e4 + 8.0).unwrap();
    let mut found = false;
    for &g in &zeros {
        let n = curve.t0 + ((g - curve.t0) / curve.step).ceil() * curve.step;
        if let Ok(c) = find_unit_slope_chord(&curve, n) {
            assert!((c.slope - 1.0).abs() <= SLOPE_TOL);
            if c.length() < 1.0 {
                found = true;
            }
        }
    }
    assert!(found, "no sub-unit chord after zeros {zeros:?}");
}

#[test]
fn parallel_chords_of_length_500_exist() {
    let curve = build_ladder(1e4, 600.0, 0.05, Convention::AnchorLog).unwrap();
    let scan = find_almost_parallel_chords(&curve, &[500.0], 0.2).unwrap();
    let slopes: Vec<f64> = (0..curve.phi.len())
        .map(|i| curve.abscissa(i))
        .take_while(|n| n + 500.0 <= curve.t1)
        .map(|n| curve.slope(n, n + 500.0))
        .collect();
    let (lo, hi) = slopes.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &s| (a.min(s), b.max(s)));
    assert!(scan[0].fraction > 0.0, "slopes of length 500 span [{lo}, {hi}]");
    assert!(scan[0].chords.iter().all(|c| (c.slope - 1.0).abs() <= 0.2));
}

#[test]
fn fundamental_chord_settles_with_height() {
    let eps = 0.01;
    let mut devs = Vec::new();
    for t in [1e3, 1e4, 1e5] {
        let opts = LadderOptions {
            moment: MomentOptions {
                budget: 50_000_000,
                panel_scale: 0.5,
                ..MomentOptions::default()
            },
            tol: 1e-8,
            eps,
        };
        let curve = build_ladder_with(t, validity_length(t, eps), 0.05, Convention::AnchorLog, &opts).unwrap();
        assert!(curve.warning.is_none());
        devs.push((curve.fundamental_chord().slope - 1.0).abs());
    }
    assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slope_additivity(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0) {
        static CURVE: std::sync::OnceLock<zeta4_core::ladder::LadderCurve> = std::sync::OnceLock::new();
        let curve = CURVE.get_or_init(|| build_ladder(300.0, 30.0, 0.02, Convention::AnchorLog).unwrap());
        let mut p = [300.0 + 30.0 * a, 300.0 + 30.0 * b, 300.0 + 30.0 * c];
        p.sort_by(f64::total_cmp);
        prop_assume!(p[1] - p[0] > 1e-6 && p[2] - p[1] > 1e-6);
        let s = |x: f64, y: f64| chord(curve, x, y).unwrap().slope * (y - x);
        let whole = s(p[0], p[2]);
        prop_assert!((whole - s(p[0], p[1]) - s(p[1], p[2])).abs() <= 1e-12 * whole.max(1.0));
    }

    #[test]
    fn shift_keeps_slopes(c in -1e3f64..1e3, x in 0.0f64..0.9, len in 0.05f64..3.0) {
        static CURVE: std::sync::OnceLock<zeta4_core::ladder::LadderCurve> = std::sync::OnceLock::new();
        let curve = CURVE.get_or_init(|| build_ladder(700.0, 4.0, 0.01, Convention::AnchorLog).unwrap());
        let n = 700.0 + x;
        let m = (n + len).min(704.0);
        let shifted = curve.shifted(c);
        let (s0, s1) = (chord(curve, n, m).unwrap().slope, chord(&shifted, n, m).unwrap().slope);
        prop_assert!((s0 - s1).abs() <= 1e-9 * s0.abs().max(1.0) + 1e-12 * c.abs());
    }
}
