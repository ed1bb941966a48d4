use std::f64::consts::PI;

use num_complex::Complex64;
use zeta4_core::ladder::{build_ladder, Convention, LadderCurve};
use zeta4_core::specfun::{theta, z, zeta_oracle, Precision};
use zeta4_core::validity_length;
use zeta4_core::zeros::{
    crossing_point, find_inflection, find_zeros, find_zeros_with, rotating_chord_solve, select_gamma_bar,
    verify_corollaries, CheckKind, Curvature, ZeroGeometry, ZeroOptions,
};

/// Z through the Euler–Maclaurin oracle.
fn z_oracle(t: f64) -> f64 {
    (Complex64::from_polar(1.0, theta(t).unwrap()) * zeta_oracle(t, &Precision::default()).unwrap()).re
}

/// Dense sign scan of `f` followed by plain bisection.
fn dense_roots<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, step: f64, width: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let n = ((b - a) / step).ceil() as usize;
    let mut prev = f(a);
    for i in 1..=n {
        let t = (a + i as f64 * step).min(b);
        let v = f(t);
        if prev.signum() != v.signum() {
            let (mut lo, mut hi, mut flo) = (t - step, t, prev);
            while hi - lo > width {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = v;
    }
    out
}

fn curve_10_40() -> LadderCurve {
    build_ladder(10.0, 30.0, 0.01, Convention::AnchorLog).unwrap()
}

#[test]
fn twenty_nine_zeros_up_to_100() {
    let zs = find_zeros(10.0, 100.0).unwrap();
    assert_eq!(zs.len(), 29);
    assert!((zs[0] - 14.134_725).abs() < 1e-6);
    let prec = Precision::default();
    for &g in &zs {
        assert!(z(g, &prec).unwrap().z.abs() <= 1e-8, "{g}");
    }
    let oracle = dense_roots(z_oracle, 10.0, 100.0, 0.01, 1e-11);
    assert_eq!(oracle.len(), 29);
    for (a, b) in zs.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn counts_follow_the_main_term() {
    for t in [500.0, 1000.0] {
        let n = find_zeros(10.0, t).unwrap().len() as f64;
        assert!((n - (theta(t).unwrap() / PI + 1.0)).abs() <= 2.0, "{t}: {n}");
    }
}

#[test]
fn halving_the_scan_grid_keeps_zeros() {
    let coarse = find_zeros(100.0, 300.0).unwrap();
    let fine = find_zeros_with(
        100.0,
        300.0,
        &ZeroOptions {
            scan_step: 0.025,
            ..ZeroOptions::default()
        },
    )
    .unwrap();
    assert_eq!(coarse.len(), fine.len());
    assert!(coarse.iter().zip(&fine).all(|(a, b)| (a - b).abs() <= 0.05));
}

#[test]
fn first_inflection_matches_dense_curvature_scan() {
    let curve = curve_10_40();
    let zs = find_zeros(10.0, 25.0).unwrap();
    let geom = find_inflection(&ZeroGeometry::new(zs[0], zs[1]).unwrap(), &curve).unwrap();
    let rho = geom.rho.unwrap();
    assert!(zs[0] < rho && rho < zs[1]);

    // Sign of φ₂″ is the sign of Z³Z′; Z′ by central differences of the oracle.
    let dz = |t: f64| (z_oracle(t + 1e-6) - z_oracle(t - 1e-6)) / 2e-6;
    let second = |t: f64| z_oracle(t).powi(3) * dz(t);
    let oracle = dense_roots(second, zs[0] + 1e-3, zs[1] - 1e-3, 1e-4, 1e-10);
    assert!((rho - oracle[0]).abs() <= 1e-4, "{rho} vs {}", oracle[0]);

    let curv = Curvature::for_curve(&curve, Precision::default()).unwrap();
    assert!(curv.second(rho - 1e-4) > 0.0 && curv.second(rho + 1e-4) < 0.0);
    assert!(curv.slope(rho) > 0.0);
    assert!(geom.tan_beta.unwrap() > 0.0);
}

#[test]
fn convexity_pattern_on_twenty_pairs() {
    let zs = find_zeros(10.0, 80.0).unwrap();
    assert!(zs.len() >= 21);
    let curve = build_ladder(10.0, 70.0, 0.02, Convention::AnchorLog).unwrap();
    let curv = Curvature::for_curve(&curve, Precision::default()).unwrap();
    for w in zs.windows(2).take(20) {
        let geom = find_inflection(&ZeroGeometry::new(w[0], w[1]).unwrap(), &curve).unwrap();
        let rho = geom.rho.unwrap();
        assert!(w[0] < rho && rho < w[1]);
        assert!(curv.slope(rho) > 0.0);
        assert!(curv.second(w[0] + 1e-3) > 0.0, "{}", w[0]);
        assert!(curv.second(w[1] - 1e-3) < 0.0, "{}", w[1]);
    }
}

#[test]
fn rotating_chord_properties() {
    let curve = curve_10_40();
    let zs = find_zeros(10.0, 25.0).unwrap();
    let g = zs[0];
    let geom = find_inflection(&ZeroGeometry::new(g, zs[1]).unwrap(), &curve).unwrap();
    let window = geom.rho.unwrap() - g;
    let end_slope = curve.slope(g, g + window);

    let mut prev = 0.0;
    for frac in [1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9] {
        let u = rotating_chord_solve(&curve, g, frac * end_slope, window).unwrap();
        assert!(u > prev && u < window, "{frac}: {u}");
        assert!((curve.slope(g, g + u) - frac * end_slope).abs() <= 1e-9);
        assert!(u < g.powf(7.0 / 8.0 + 0.02));
        prev = u;
    }
    let tiny = rotating_chord_solve(&curve, g, 1e-10 * end_slope, window).unwrap();
    assert!(tiny < 0.1);
}

#[test]
fn rotating_chord_at_thirty_degrees() {
    let zs = find_zeros(10.0, 25.0).unwrap();
    let g = zs[0];
    let curve = build_ladder(g, 20.0, 0.01, Convention::AnchorLog).unwrap();
    let tan = (PI / 6.0).tan();
    let u = rotating_chord_solve(&curve, g, tan, 20.0).unwrap();
    let lhs = 2.0 * PI * PI * zeta4_core::quad::integrate_z4(g, u, 1e-10).unwrap().value;
    let rhs = tan * u * g.ln().powi(4);
    // Linear interpolation on the 0.01 grid leaves about 5e-5 here.
    assert!((lhs - rhs).abs() <= 1e-3 * rhs, "{lhs} vs {rhs}");
}

#[test]
fn gamma_bar_at_100() {
    let eps = 0.01;
    let zs = find_zeros(10.0, 400.0).unwrap();
    let g = *zs.iter().min_by(|a, b| (*a - 100.0).abs().total_cmp(&(*b - 100.0).abs())).unwrap();
    let sel = select_gamma_bar(g, eps, &zs).unwrap();
    assert!(zs.contains(&sel.gamma_bar));
    assert!(sel.delta_gap >= 0.0);
    let reach = validity_length(g, eps);
    assert!(sel.gamma_bar - g >= reach);
    let ratio = (sel.gamma_bar - g) / reach;
    assert!((1.0..=1.5).contains(&ratio), "{ratio}");
}

#[test]
fn crossing_point_matches_dense_scan() {
    let zs = find_zeros(10.0, 40.0).unwrap();
    let g = zs[0];
    let sel = select_gamma_bar(g, 0.0, &zs).unwrap();
    let curve = curve_10_40();
    let rho_bar = crossing_point(&curve, g, sel.gamma_bar).unwrap();
    assert!(g < rho_bar && rho_bar < sel.gamma_bar);

    // Independent φ₂ by cumulative Simpson on oracle Z⁴ at step 1e-3.
    let h = 1e-3;
    let n = ((sel.gamma_bar - g) / h).round() as usize;
    let h = (sel.gamma_bar - g) / n as f64;
    let f: Vec<f64> = (0..=n).map(|i| z_oracle(g + i as f64 * h).powi(4)).collect();
    let mut phi = vec![0.0; n + 1];
    for i in 1..=n {
        phi[i] = phi[i - 1] + h / 6.0 * (f[i - 1] + 4.0 * z_oracle(g + (i as f64 - 0.5) * h).powi(4) + f[i]);
    }
    let slope = phi[n] / (n as f64 * h);
    let first = (2..n).find(|&i| phi[i] - slope * i as f64 * h >= 0.0).unwrap();
    let oracle = g + first as f64 * h;
    assert!((rho_bar - oracle).abs() <= 1e-2, "{rho_bar} vs {oracle}");
}

#[test]
fn corollary_checks_near_first_zero() {
    let zs = find_zeros(10.0, 25.0).unwrap();
    let curve = build_ladder(zs[0], 10.0, 0.01, Convention::AnchorLog).unwrap();
    let geom = find_inflection(&ZeroGeometry::new(zs[0], zs[1]).unwrap(), &curve).unwrap();
    let report = verify_corollaries(&geom, &curve).unwrap();
    let parallel: Vec<_> = report.checks.iter().filter(|c| c.kind == CheckKind::ParallelToBeta).collect();
    assert_eq!(report.anchor_drift, 0.0);
    assert!(!parallel.is_empty());
    for c in parallel {
        assert!((c.slope - geom.tan_beta.unwrap()).abs() <= 1e-9);
        assert!(c.rel_discrepancy <= 1e-4, "{c:?}");
    }
    let degenerate = report.checks.iter().find(|c| c.kind == CheckKind::Degenerate).unwrap();
    assert!(degenerate.passed && degenerate.lhs.abs() <= 1e-6 && degenerate.rhs.abs() <= 1e-6);
    assert!(degenerate.m - degenerate.n < 1e-6);
}
