//! The monotone curve `φ₂` with `φ₂′(t) = 2π² Z⁴(t) / ln⁴(·)`, sampled on a
//! uniform grid, and the chord geometry built on it.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::{integrate_cells, integrate_z4_with, MomentOptions};
use crate::roots::{bisect, first_sign_change};
use crate::{validity_length, Error, Result};

/// Largest grid spacing accepted by [`build_ladder`].
pub const MAX_STEP: f64 = 0.05;

/// Slope accuracy of the chord solvers.
pub const SLOPE_TOL: f64 = 1e-9;

/// Which logarithm divides `Z⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Convention {
    /// `ln⁴` of a fixed anchor height (the curve's start by default).
    #[default]
    AnchorLog,
    /// `ln⁴ t` at the running height.
    LocalLog,
}

impl Convention {
    fn log4(self, anchor: f64, t: f64) -> f64 {
        match self {
            Convention::AnchorLog => anchor.ln().powi(4),
            Convention::LocalLog => t.ln().powi(4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LadderOptions {
    pub moment: MomentOptions,
    /// Relative accuracy of the cumulative integral.
    pub tol: f64,
    /// `ε` in the validity length `T^{13/14 + 2ε}`.
    pub eps: f64,
}

impl Default for LadderOptions {
    fn default() -> Self {
        LadderOptions {
            moment: MomentOptions::default(),
            tol: 1e-10,
            eps: 0.01,
        }
    }
}

/// Grid samples of `φ₂`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LadderCurve {
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
    /// `phi[i]` sits at `t0 + i·step`, except the last sample which sits at
    /// `t1`.
    pub phi: Vec<f64>,
    pub convention: Convention,
    pub anchor: f64,
    /// Accuracy the samples were built to (relative to the total rise).
    pub tol: f64,
    /// Set when `t1 - t0` exceeds the validity length.
    pub warning: Option<String>,
}

/// Two abscissae and the slope of the chord joining them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Chord {
    pub n: f64,
    pub m: f64,
    pub slope: f64,
}

impl Chord {
    pub fn length(&self) -> f64 {
        self.m - self.n
    }
}

fn grid_len(t0: f64, t1: f64, step: f64) -> usize {
    // Number of cells; a trailing sliver shorter than 1e-9 step is dropped.
    let cells = ((t1 - t0) / step - 1e-9).ceil();
    (cells as usize).max(1)
}

fn grid_edges(t0: f64, t1: f64, step: f64) -> Vec<f64> {
    let cells = grid_len(t0, t1, step);
    let mut e: Vec<f64> = (0..cells).map(|i| t0 + i as f64 * step).collect();
    e.push(t1);
    e
}

/// Builds `φ₂` on `[T, T+U]` from `Z⁴`.
pub fn build_ladder(start: f64, length: f64, step: f64, convention: Convention) -> Result<LadderCurve> {
    build_ladder_with(start, length, step, convention, &LadderOptions::default())
}

pub fn build_ladder_with(
    start: f64,
    length: f64,
    step: f64,
    convention: Convention,
    opts: &LadderOptions,
) -> Result<LadderCurve> {
    check_ladder_args(start, length, step, opts)?;
    let ev = opts.moment.evaluator(start + length)?;
    ev.check_range(start, start + length)?;
    build_ladder_from_density(start, length, step, convention, start, opts, &|t: f64| ev.value(t).powi(4))
}

fn check_ladder_args(start: f64, length: f64, step: f64, opts: &LadderOptions) -> Result<()> {
    if !(start >= 10.0) || !start.is_finite() {
        return Err(Error::domain("T must be finite and at least 10"));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::domain("U must be positive"));
    }
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(Error::domain("step must lie in (0, 0.05]"));
    }
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::domain("tol must lie in (0, 1)"));
    }
    if !(opts.eps >= 0.0) {
        return Err(Error::domain("eps must be non-negative"));
    }
    opts.moment.validate()
}

/// Builds `φ₂` from an arbitrary non-negative `density` in place of `Z⁴`.
///
/// `anchor` is the height whose `ln⁴` is used under [`Convention::AnchorLog`].
pub fn build_ladder_from_density<F>(
    start: f64,
    length: f64,
    step: f64,
    convention: Convention,
    anchor: f64,
    opts: &LadderOptions,
    density: &F,
) -> Result<LadderCurve>
where
    F: Fn(f64) -> f64 + Sync + Send + ?Sized,
{
    check_ladder_args(start, length, step, opts)?;
    if !(anchor > 1.0) {
        return Err(Error::domain("anchor must exceed 1"));
    }
    let end = start + length;
    let edges = grid_edges(start, end, step);
    let scale = 2.0 * PI * PI;
    let f = |t: f64| scale * density(t) / convention.log4(anchor, t);
    let cells = integrate_cells(&f, &edges, opts.tol, opts.moment.budget)?;

    let mut phi = Vec::with_capacity(edges.len());
    let mut acc = 0.0;
    phi.push(acc);
    for v in &cells.values {
        acc += v;
        phi.push(acc);
    }
    let u0 = validity_length(start, opts.eps);
    let warning = (length > u0).then(|| {
        alloc::format!("U = {length} exceeds the validity length T^(13/14+2eps) = {u0:.6}")
    });
    Ok(LadderCurve {
        t0: start,
        t1: end,
        step,
        phi,
        convention,
        anchor,
        tol: opts.tol,
        warning,
    })
}

impl LadderCurve {
    /// Wraps existing samples, checking shape and monotonicity.
    pub fn from_samples(
        t0: f64,
        t1: f64,
        step: f64,
        phi: Vec<f64>,
        convention: Convention,
        anchor: f64,
        tol: f64,
    ) -> Result<Self> {
        if !(t1 > t0) || !(step > 0.0) {
            return Err(Error::domain("need t0 < t1 and step > 0"));
        }
        if phi.len() != grid_len(t0, t1, step) + 1 {
            return Err(Error::domain("sample count does not match the grid"));
        }
        if phi.iter().any(|p| !p.is_finite()) || phi.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("samples must be finite and nondecreasing"));
        }
        Ok(LadderCurve {
            t0,
            t1,
            step,
            phi,
            convention,
            anchor,
            tol,
            warning: None,
        })
    }

    /// Abscissa of sample `i`.
    pub fn abscissa(&self, i: usize) -> f64 {
        if i + 1 >= self.phi.len() {
            self.t1
        } else {
            self.t0 + i as f64 * self.step
        }
    }

    /// Abscissae of all samples.
    pub fn grid(&self) -> Vec<f64> {
        (0..self.phi.len()).map(|i| self.abscissa(i)).collect()
    }

    /// The same curve with `c` added to every sample.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.phi.iter_mut().for_each(|p| *p += c);
        out
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 && t <= self.t1
    }

    /// `φ₂(t)`, interpolated linearly; clamps outside the grid.
    pub fn value_at(&self, t: f64) -> f64 {
        let last = self.phi.len() - 1;
        if t <= self.t0 {
            return self.phi[0];
        }
        if t >= self.t1 {
            return self.phi[last];
        }
        let i = (((t - self.t0) / self.step).floor() as usize).min(last - 1);
        let (a, b) = (self.abscissa(i), self.abscissa(i + 1));
        let w = ((t - a) / (b - a)).clamp(0.0, 1.0);
        self.phi[i] + w * (self.phi[i + 1] - self.phi[i])
    }

    /// Chord slope between `n` and `m` with no range checks.
    pub fn slope(&self, n: f64, m: f64) -> f64 {
        (self.value_at(m) - self.value_at(n)) / (m - n)
    }

    /// `1 / (2π²)` times `ln⁴` of the anchor, mapping slopes back to mean
    /// values of `Z⁴`. Only meaningful under [`Convention::AnchorLog`].
    pub fn mean_scale(&self) -> f64 {
        self.anchor.ln().powi(4) / (2.0 * PI * PI)
    }

    /// The chord over the whole curve.
    pub fn fundamental_chord(&self) -> Chord {
        Chord {
            n: self.t0,
            m: self.t1,
            slope: self.slope(self.t0, self.t1),
        }
    }
}

/// The chord of `curve` over `[n, m]`.
pub fn chord(curve: &LadderCurve, n: f64, m: f64) -> Result<Chord> {
    if !(m > n) {
        return Err(Error::domain("chord needs m > n"));
    }
    if !curve.contains(n) || !curve.contains(m) {
        return Err(Error::domain(alloc::format!(
            "chord [{n}, {m}] leaves the curve [{}, {}]",
            curve.t0, curve.t1
        )));
    }
    Ok(Chord {
        n,
        m,
        slope: curve.slope(n, m),
    })
}

/// Chords of one length whose slope is within `tol` of 1.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParallelScan {
    pub length: f64,
    pub chords: Vec<Chord>,
    /// Left endpoints tried.
    pub scanned: usize,
    /// `chords.len() / scanned`.
    pub fraction: f64,
}

/// For each length, tries every grid point as a left endpoint and keeps the
/// chords with `|slope - 1| <= tol`.
pub fn find_almost_parallel_chords(curve: &LadderCurve, lengths: &[f64], tol: f64) -> Result<Vec<ParallelScan>> {
    if !(tol >= 0.0) {
        return Err(Error::domain("tol must be non-negative"));
    }
    let span = curve.t1 - curve.t0;
    let mut out = Vec::with_capacity(lengths.len());
    for &length in lengths {
        if !(length > 0.0 && length <= span * (1.0 + 1e-12)) {
            return Err(Error::domain("chord length must lie in (0, t1 - t0]"));
        }
        let mut chords = Vec::new();
        let mut scanned = 0;
        for i in 0..curve.phi.len() {
            let n = curve.abscissa(i);
            let m = if i == 0 && length >= span { curve.t1 } else { n + length };
            if m > curve.t1 * (1.0 + 1e-15) {
                break;
            }
            let m = m.min(curve.t1);
            scanned += 1;
            let slope = curve.slope(n, m);
            if (slope - 1.0).abs() <= tol {
                chords.push(Chord { n, m, slope });
            }
        }
        let fraction = if scanned == 0 { 0.0 } else { chords.len() as f64 / scanned as f64 };
        out.push(ParallelScan {
            length,
            chords,
            scanned,
            fraction,
        });
    }
    Ok(out)
}

/// Solves `slope(n, m) = target` for the smallest `m` in `(n, m_max]`.
///
/// The scan starts a sixteenth of a step right of `n` and moves in grid
/// steps; the first bracket is bisected until the slope is within
/// [`SLOPE_TOL`]. Fails with [`Error::NoBracket`] carrying the range of
/// slopes seen.
pub fn solve_chord_slope(curve: &LadderCurve, n: f64, target: f64, m_max: f64) -> Result<Chord> {
    if !curve.contains(n) || !(n < curve.t1) {
        return Err(Error::domain("chord start lies outside the curve"));
    }
    let m_max = m_max.min(curve.t1);
    if !(m_max > n) {
        return Err(Error::domain("search window is empty"));
    }
    let g = |m: f64| curve.slope(n, m) - target;
    let first = n + (curve.step / 16.0).min(0.5 * (m_max - n));

    // Track the attained slope range for the error report.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let scan = |m: f64| {
        let v = g(m);
        lo = lo.min(v + target);
        hi = hi.max(v + target);
        v
    };
    let Some(bracket) = first_sign_change(scan, first, m_max, curve.step) else {
        return Err(Error::NoBracket { min: lo, max: hi });
    };
    let refined = bisect(&g, bracket, 0.0);
    let m = refined.best();
    let slope = curve.slope(n, m);
    if (slope - target).abs() > SLOPE_TOL {
        return Err(Error::Precision {
            requested: SLOPE_TOL,
            achievable: (slope - target).abs(),
        });
    }
    Ok(Chord { n, m, slope })
}

/// The shortest chord starting at `n` with slope 1.
pub fn find_unit_slope_chord(curve: &LadderCurve, n: f64) -> Result<Chord> {
    solve_chord_slope(curve, n, 1.0, curve.t1)
}

/// Both sides of `∫_N^M Z⁴ = (1/2π²)(M−N) ln⁴(anchor) · slope(N, M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TheoremReport {
    pub n: f64,
    pub m: f64,
    pub lhs: f64,
    pub lhs_err: f64,
    pub rhs: f64,
    pub rel_discrepancy: f64,
    pub slope: f64,
    pub anchor: f64,
    pub convention: Convention,
}

fn theorem_sides(curve: &LadderCurve, n: f64, m: f64, opts: &MomentOptions) -> Result<TheoremReport> {
    let ch = chord(curve, n, m)?;
    let tol = curve.tol.max(1e-14);
    let lhs = integrate_z4_with(n, m - n, tol, opts)?;
    let rhs = (m - n) * curve.mean_scale() * ch.slope;
    let rel = if lhs.value == 0.0 && rhs == 0.0 {
        0.0
    } else {
        (lhs.value - rhs).abs() / lhs.value.abs().max(rhs.abs())
    };
    Ok(TheoremReport {
        n,
        m,
        lhs: lhs.value,
        lhs_err: lhs.err_bound,
        rhs,
        rel_discrepancy: rel,
        slope: ch.slope,
        anchor: curve.anchor,
        convention: curve.convention,
    })
}

/// Compares a direct integral of `Z⁴` on `[n, m]` with the value implied
/// by the chord slope. Requires [`Convention::AnchorLog`].
pub fn verify_theorem(curve: &LadderCurve, n: f64, m: f64) -> Result<TheoremReport> {
    verify_theorem_with(curve, n, m, &MomentOptions::default())
}

pub fn verify_theorem_with(curve: &LadderCurve, n: f64, m: f64, opts: &MomentOptions) -> Result<TheoremReport> {
    if curve.convention != Convention::AnchorLog {
        return Err(Error::Convention);
    }
    theorem_sides(curve, n, m, opts)
}

/// The same comparison on a [`Convention::LocalLog`] curve, where the two
/// sides differ by the drift of `ln⁴ t` against `ln⁴` of the anchor.
pub fn measure_log_drift(curve: &LadderCurve, n: f64, m: f64, opts: &MomentOptions) -> Result<TheoremReport> {
    if curve.convention != Convention::LocalLog {
        return Err(Error::Convention);
    }
    theorem_sides(curve, n, m, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> LadderOptions {
        LadderOptions::default()
    }

    fn constant(c: f64) -> LadderCurve {
        build_ladder_from_density(1000.0, 20.0, 0.05, Convention::AnchorLog, 1000.0, &opts(), &|_| c).unwrap()
    }

    #[test]
    fn constant_density_is_linear() {
        let curve = constant(3.0);
        let want = 2.0 * PI * PI * 3.0 / 1000f64.ln().powi(4);
        for (i, &p) in curve.phi.iter().enumerate() {
            let t = curve.abscissa(i);
            assert!((p - want * (t - 1000.0)).abs() < 1e-12 * (1.0 + p));
        }
        let c = chord(&curve, 1003.3, 1017.77).unwrap();
        assert!((c.slope - want).abs() < 1e-12);
    }

    #[test]
    fn grid_ends_at_t1() {
        let curve = build_ladder_from_density(1000.0, 1.03, 0.05, Convention::AnchorLog, 1000.0, &opts(), &|_| 1.0).unwrap();
        assert_eq!(curve.phi.len(), 22);
        assert_eq!(curve.abscissa(21), 1001.03);
        assert!((curve.abscissa(20) - 1001.0).abs() < 1e-9);
    }

    #[test]
    fn shift_keeps_slopes() {
        let curve = build_ladder_from_density(100.0, 5.0, 0.01, Convention::LocalLog, 100.0, &opts(), &|t| (t * 3.0).sin().powi(2)).unwrap();
        let moved = curve.shifted(17.5);
        for (n, m) in [(100.0, 105.0), (101.234, 101.5), (103.0, 103.011)] {
            let a = chord(&curve, n, m).unwrap().slope;
            let b = chord(&moved, n, m).unwrap().slope;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn chord_rejects_bad_ranges() {
        let curve = constant(1.0);
        assert!(matches!(chord(&curve, 1005.0, 1005.0), Err(Error::Domain(_))));
        assert!(matches!(chord(&curve, 999.0, 1005.0), Err(Error::Domain(_))));
        assert!(matches!(chord(&curve, 1005.0, 1021.0), Err(Error::Domain(_))));
    }

    #[test]
    fn convex_curve_has_unit_chord() {
        // φ′ grows linearly from 0 to 2 over the curve.
        let ln4 = 1000f64.ln().powi(4);
        let k = ln4 / (2.0 * PI * PI);
        let curve = build_ladder_from_density(1000.0, 10.0, 0.01, Convention::AnchorLog, 1000.0, &opts(), &|t| {
            k * 0.2 * (t - 1000.0)
        })
        .unwrap();
        let c = find_unit_slope_chord(&curve, 1000.0).unwrap();
        assert!((c.slope - 1.0).abs() <= SLOPE_TOL);
        // φ = 0.1 u², so the chord from 0 has slope 0.1 u.
        assert!((c.m - 1010.0).abs() < 1e-3, "{}", c.m);
    }

    #[test]
    fn no_bracket_reports_range() {
        let curve = constant(1e-3);
        match find_unit_slope_chord(&curve, 1000.0) {
            Err(Error::NoBracket { min, max }) => assert!(min > 0.0 && max < 1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parallel_scan_contract() {
        let ln4 = 1000f64.ln().powi(4);
        let k = ln4 / (2.0 * PI * PI);
        let curve = build_ladder_from_density(1000.0, 20.0, 0.05, Convention::AnchorLog, 1000.0, &opts(), &|t| {
            k * (1.0 + 0.5 * (t * 2.0).sin())
        })
        .unwrap();
        let scans = find_almost_parallel_chords(&curve, &[0.5, 20.0], 0.1).unwrap();
        assert!(scans[0].chords.iter().all(|c| (c.slope - 1.0).abs() <= 0.1));
        assert!(scans[0].fraction > 0.0 && scans[0].fraction < 1.0);
        let full = &scans[1];
        assert_eq!(full.scanned, 1);
        assert_eq!(full.chords.len(), 1);
        assert_eq!((full.chords[0].n, full.chords[0].m), (1000.0, 1020.0));
    }

    #[test]
    fn convention_guard() {
        let curve = build_ladder_from_density(1000.0, 1.0, 0.05, Convention::LocalLog, 1000.0, &opts(), &|_| 1.0).unwrap();
        assert!(matches!(verify_theorem(&curve, 1000.0, 1001.0), Err(Error::Convention)));
    }

    #[test]
    fn validity_warning() {
        let o = LadderOptions { eps: 0.0, ..opts() };
        let curve = build_ladder_from_density(10.0, 9.0, 0.05, Convention::AnchorLog, 10.0, &o, &|_| 1.0).unwrap();
        assert!(curve.warning.is_some());
        let curve = build_ladder_from_density(10.0, 8.0, 0.05, Convention::AnchorLog, 10.0, &o, &|_| 1.0).unwrap();
        assert!(curve.warning.is_none());
    }

    #[test]
    fn from_samples_validates() {
        let ok = LadderCurve::from_samples(0.0, 1.0, 0.5, alloc::vec![0.0, 1.0, 2.0], Convention::AnchorLog, 10.0, 1e-10);
        assert!(ok.is_ok());
        let bad = LadderCurve::from_samples(0.0, 1.0, 0.5, alloc::vec![0.0, 2.0, 1.0], Convention::AnchorLog, 10.0, 1e-10);
        assert!(bad.is_err());
        let short = LadderCurve::from_samples(0.0, 1.0, 0.5, alloc::vec![0.0, 2.0], Convention::AnchorLog, 10.0, 1e-10);
        assert!(short.is_err());
    }
}
