//! Zeros of `Z` on the critical line and the geometry of `φ₂` between them:
//! the inflection point `ρ`, the paired zero `γ̄`, the crossing point `ρ̄`
//! and chords rotating about `γ`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::exec::map_ordered;
use crate::ladder::{chord, solve_chord_slope, Chord, Convention, LadderCurve};
use crate::quad::{integrate_z4_with, MomentOptions};
use crate::roots::{bisect, first_sign_change, Bracket};
use crate::specfun::{theta, Precision, ZEvaluator};
use crate::{validity_length, Error, Result};

/// Widest scan spacing for sign changes of `Z`.
pub const MAX_SCAN_STEP: f64 = 0.05;
/// Width of the final bisection bracket around each zero.
pub const ZERO_WIDTH: f64 = 1e-10;
/// Allowed gap between the zero count and `Δϑ/π`.
pub const COUNT_SLACK: f64 = 2.0;
/// Accuracy of `ρ` and `ρ̄`.
pub const POINT_TOL: f64 = 1e-8;

/// A pair of consecutive zeros and the points derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroGeometry {
    pub gamma: f64,
    pub gamma_next: f64,
    pub rho: Option<f64>,
    /// Slope of the chord `(γ, ρ)`.
    pub tan_beta: Option<f64>,
    pub gamma_bar: Option<f64>,
    /// `γ̄ − γ − γ^{13/14+2ε}`.
    pub delta_gap: Option<f64>,
    pub rho_bar: Option<f64>,
}

impl ZeroGeometry {
    pub fn new(gamma: f64, gamma_next: f64) -> Result<Self> {
        if !(gamma_next > gamma) {
            return Err(Error::domain("zeros must be increasing"));
        }
        Ok(ZeroGeometry {
            gamma,
            gamma_next,
            rho: None,
            tan_beta: None,
            gamma_bar: None,
            delta_gap: None,
            rho_bar: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroOptions {
    pub precision: Precision,
    pub scan_step: f64,
    /// Heights per concurrently scanned chunk.
    pub chunk: f64,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions {
            precision: Precision::default(),
            scan_step: MAX_SCAN_STEP,
            chunk: 50.0,
        }
    }
}

/// Zeros of `Z` in `[t_lo, t_hi]`.
pub fn find_zeros(t_lo: f64, t_hi: f64) -> Result<Vec<f64>> {
    find_zeros_with(t_lo, t_hi, &ZeroOptions::default())
}

/// Scans for sign changes of `Z` on a grid no coarser than `opts.scan_step`,
/// bisects each to a bracket of width [`ZERO_WIDTH`], and checks the count
/// against `(ϑ(t_hi) − ϑ(t_lo))/π`.
pub fn find_zeros_with(t_lo: f64, t_hi: f64, opts: &ZeroOptions) -> Result<Vec<f64>> {
    if !(t_lo >= 10.0) || !t_hi.is_finite() {
        return Err(Error::domain("t_lo must be at least 10 and t_hi finite"));
    }
    if !(t_hi > t_lo) {
        return Err(Error::domain("t_hi must exceed t_lo"));
    }
    if !(opts.scan_step > 0.0 && opts.scan_step <= MAX_SCAN_STEP) {
        return Err(Error::domain("scan step must lie in (0, 0.05]"));
    }
    if !(opts.chunk > 0.0) {
        return Err(Error::domain("chunk must be positive"));
    }
    let ev = ZEvaluator::new(opts.precision, t_hi)?;
    ev.check_range(t_lo, t_hi)?;

    let pieces = ((t_hi - t_lo) / opts.chunk).ceil().max(1.0) as usize;
    let width = (t_hi - t_lo) / pieces as f64;
    let chunks: Vec<(f64, f64)> = (0..pieces)
        .map(|i| {
            let a = t_lo + i as f64 * width;
            let b = if i + 1 == pieces { t_hi } else { t_lo + (i + 1) as f64 * width };
            (a, b)
        })
        .collect();
    let found = map_ordered(&chunks, |&(a, b)| scan_chunk(&ev, a, b, opts.scan_step));
    let mut zeros = Vec::new();
    for z in found {
        zeros.extend(z?);
    }

    let expected = (theta(t_hi)? - theta(t_lo)?) / PI;
    if (zeros.len() as f64 - expected).abs() > COUNT_SLACK {
        return Err(Error::MissedZeros {
            found: zeros.len(),
            expected,
        });
    }
    Ok(zeros)
}

fn scan_chunk(ev: &ZEvaluator, a: f64, b: f64, max_step: f64) -> Result<Vec<f64>> {
    let cells = ((b - a) / max_step).ceil().max(1.0) as usize;
    let h = (b - a) / cells as f64;
    let z = |t: f64| ev.value(t);
    let mut out = Vec::new();
    let mut x0 = a;
    let mut z0 = z(a);
    for i in 1..=cells {
        let x1 = if i == cells { b } else { a + i as f64 * h };
        let z1 = z(x1);
        if !(z0.is_finite() && z1.is_finite()) {
            return Err(Error::domain(format!("Z is not finite near t = {x0}")));
        }
        // A sample that lands exactly on a zero is reported by the cell it ends.
        if (z0 < 0.0 && z1 >= 0.0) || (z0 > 0.0 && z1 <= 0.0) {
            let br = bisect(
                &z,
                Bracket {
                    lo: x0,
                    hi: x1,
                    f_lo: z0,
                    f_hi: z1,
                },
                ZERO_WIDTH,
            );
            out.push(br.best());
        } else if z0 == 0.0 && i == 1 && a > 0.0 {
            out.push(a);
        }
        x0 = x1;
        z0 = z1;
    }
    Ok(out)
}

/// First and second derivatives of `φ₂`, from `Z` and a central-difference
/// `Z′`.
#[derive(Debug, Clone)]
pub struct Curvature {
    ev: ZEvaluator,
    convention: Convention,
    anchor: f64,
}

impl Curvature {
    pub fn new(prec: Precision, t_max: f64, convention: Convention, anchor: f64) -> Result<Self> {
        Ok(Curvature {
            ev: ZEvaluator::new(prec, t_max)?,
            convention,
            anchor,
        })
    }

    /// Matches the conventions of `curve`.
    pub fn for_curve(curve: &LadderCurve, prec: Precision) -> Result<Self> {
        let c = Self::new(prec, curve.t1 + 1.0, curve.convention, curve.anchor)?;
        c.ev.check_range(curve.t0, curve.t1)?;
        Ok(c)
    }

    fn log(&self, t: f64) -> f64 {
        match self.convention {
            Convention::AnchorLog => self.anchor.ln(),
            Convention::LocalLog => t.ln(),
        }
    }

    /// `φ₂′(t) = 2π² Z⁴ / ln⁴`.
    pub fn slope(&self, t: f64) -> f64 {
        2.0 * PI * PI * self.ev.value(t).powi(4) / self.log(t).powi(4)
    }

    /// `φ₂″(t)`.
    pub fn second(&self, t: f64) -> f64 {
        let h = (1e-8 * t).max(1e-6);
        let z = self.ev.value(t);
        let dz = (self.ev.value(t + h) - self.ev.value(t - h)) / (2.0 * h);
        let l = self.log(t);
        let mut d = 8.0 * PI * PI * z.powi(3) * dz / l.powi(4);
        if self.convention == Convention::LocalLog {
            d -= 8.0 * PI * PI * z.powi(4) / (t * l.powi(5));
        }
        d
    }
}

fn covers(curve: &LadderCurve, a: f64, b: f64) -> Result<()> {
    // Allow rounding slack at the ends; zeros are only known to 1e-10.
    let slack = 1e-9 * curve.t1.abs().max(1.0);
    if a < curve.t0 - slack || b > curve.t1 + slack {
        return Err(Error::domain(format!(
            "curve [{}, {}] does not cover [{a}, {b}]",
            curve.t0, curve.t1
        )));
    }
    Ok(())
}

/// The smallest `ρ ∈ (γ, γ′)` where `φ₂″` changes sign, with
/// `tan β = slope(γ, ρ)` filled in.
pub fn find_inflection(geom: &ZeroGeometry, curve: &LadderCurve) -> Result<ZeroGeometry> {
    find_inflection_with(geom, curve, Precision::default())
}

pub fn find_inflection_with(geom: &ZeroGeometry, curve: &LadderCurve, prec: Precision) -> Result<ZeroGeometry> {
    let (g, g1) = (geom.gamma, geom.gamma_next);
    covers(curve, g, g1)?;
    let curv = Curvature::for_curve(curve, prec)?;
    let gap = g1 - g;
    let edge = (1e-6 * gap).max(1e-9 * g);
    let step = (gap / 256.0).min(curve.step);
    let f = |t: f64| curv.second(t);
    let Some(br) = first_sign_change(f, g + edge, g1 - edge, step) else {
        let samples = (0..=16)
            .map(|k| {
                let t = g + edge + (gap - 2.0 * edge) * k as f64 / 16.0;
                (t, curv.second(t))
            })
            .collect();
        return Err(Error::geometry("no sign change of the curvature between the zeros", samples));
    };
    let rho = bisect(f, br, POINT_TOL).best();
    if !(curv.slope(rho) > 0.0) {
        return Err(Error::geometry("curve is flat at the inflection point", alloc::vec![(rho, curv.slope(rho))]));
    }
    let lo = g.max(curve.t0);
    let tan_beta = chord(curve, lo, rho.min(curve.t1))?.slope;
    Ok(ZeroGeometry {
        rho: Some(rho),
        tan_beta: Some(tan_beta),
        ..*geom
    })
}

/// The smallest `U <= u_max` with `slope(γ, γ+U) = target_tan`.
///
/// Fails with [`Error::Range`] carrying the attained slopes when the target
/// is not reached.
pub fn rotating_chord_solve(curve: &LadderCurve, gamma: f64, target_tan: f64, u_max: f64) -> Result<f64> {
    if !(target_tan > 0.0) || !target_tan.is_finite() {
        return Err(Error::domain("target slope must be positive"));
    }
    if !(u_max > 0.0) {
        return Err(Error::domain("u_max must be positive"));
    }
    covers(curve, gamma, gamma + u_max)?;
    let n = gamma.max(curve.t0);
    match solve_chord_slope(curve, n, target_tan, (gamma + u_max).min(curve.t1)) {
        Ok(c) => Ok(c.m - gamma),
        Err(Error::NoBracket { min, max }) => Err(Error::Range {
            target: target_tan,
            min,
            max,
        }),
        Err(e) => Err(e),
    }
}

/// `γ̄` and `Δ(γ)`, with a note when `Δ(γ)` exceeds `γ^{1/4+ε}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GammaBar {
    pub gamma_bar: f64,
    pub delta_gap: f64,
    pub warning: Option<String>,
}

/// The first zero at or beyond `γ + γ^{13/14+2ε}`.
pub fn select_gamma_bar(gamma: f64, eps: f64, zeros: &[f64]) -> Result<GammaBar> {
    if !(gamma > 1.0) || !(eps >= 0.0) {
        return Err(Error::domain("need gamma > 1 and eps >= 0"));
    }
    let reach = gamma + validity_length(gamma, eps);
    let Some(&gamma_bar) = zeros.iter().find(|&&z| z >= reach) else {
        return Err(Error::Coverage {
            last: zeros.last().copied().unwrap_or(f64::NAN),
            needed: reach,
        });
    };
    let delta_gap = gamma_bar - reach;
    let limit = gamma.powf(0.25 + eps);
    let warning = (delta_gap > limit).then(|| format!("delta {delta_gap:.6} exceeds gamma^(1/4+eps) = {limit:.6}"));
    Ok(GammaBar {
        gamma_bar,
        delta_gap,
        warning,
    })
}

/// The first point in `(γ, γ̄)` where the curve meets its chord over
/// `[γ, γ̄]`.
///
/// The curve must start below the chord and end above it.
pub fn crossing_point(curve: &LadderCurve, gamma: f64, gamma_bar: f64) -> Result<f64> {
    if !(gamma_bar > gamma) {
        return Err(Error::domain("gamma_bar must exceed gamma"));
    }
    covers(curve, gamma, gamma_bar)?;
    let (a, b) = (gamma.max(curve.t0), gamma_bar.min(curve.t1));
    let (pa, pb) = (curve.value_at(a), curve.value_at(b));
    let slope = (pb - pa) / (b - a);
    let h = |t: f64| curve.value_at(t) - (pa + slope * (t - a));
    let step = curve.step.min(0.25 * (b - a));
    let (first, last) = (a + step, b - step);
    if !(h(first) < 0.0 && h(last) > 0.0) {
        let samples = (0..=16)
            .map(|k| {
                let t = first + (last - first) * k as f64 / 16.0;
                (t, h(t))
            })
            .collect();
        return Err(Error::geometry("curve does not start below and end above its chord", samples));
    }
    let br = first_sign_change(h, first, last, step).expect("sign change guaranteed by the end checks");
    let refined = bisect(h, br, 1e-3 * POINT_TOL);
    let rho_bar = if h(refined.lo).abs() <= h(refined.hi).abs() { refined.lo } else { refined.hi };
    if !(h(rho_bar).abs() <= POINT_TOL) {
        return Err(Error::Precision {
            requested: POINT_TOL,
            achievable: h(rho_bar).abs(),
        });
    }
    Ok(rho_bar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CheckKind {
    /// A chord inside `(γ, ρ)` parallel to the chord `(γ, ρ)`.
    ParallelToBeta,
    /// A chord of slope 1 inside `(γ, ρ̄)`.
    UnitSlope,
    /// A chord of negligible length.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorollaryCheck {
    pub kind: CheckKind,
    pub n: f64,
    pub m: f64,
    pub slope: f64,
    /// `∫_N^M Z⁴`.
    pub lhs: f64,
    /// `(slope/2π²)(M−N) ln⁴γ`.
    pub rhs: f64,
    pub rel_discrepancy: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorollaryReport {
    pub gamma: f64,
    pub tol: f64,
    /// `ln⁴(anchor)/ln⁴γ − 1`: the part of any discrepancy due to the curve
    /// being anchored away from `γ`.
    pub anchor_drift: f64,
    pub checks: Vec<CorollaryCheck>,
}

impl CorollaryReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryOptions {
    pub moment: MomentOptions,
    pub tol: f64,
    /// Chords to look for per kind.
    pub count: usize,
}

impl Default for CorollaryOptions {
    fn default() -> Self {
        CorollaryOptions {
            moment: MomentOptions::default(),
            tol: 1e-3,
            count: 3,
        }
    }
}

/// Checks the integral formulas on chords inside `(γ, ρ)` (parallel to the
/// chord `(γ, ρ)`) and inside `(γ, ρ̄)` (slope 1), whichever of `ρ` and
/// `ρ̄` are set.
pub fn verify_corollaries(geom: &ZeroGeometry, curve: &LadderCurve) -> Result<CorollaryReport> {
    verify_corollaries_with(geom, curve, &CorollaryOptions::default())
}

pub fn verify_corollaries_with(geom: &ZeroGeometry, curve: &LadderCurve, opts: &CorollaryOptions) -> Result<CorollaryReport> {
    let gamma = geom.gamma;
    let ln4 = gamma.ln().powi(4);
    let mut checks = Vec::new();
    let check = |kind: CheckKind, c: Chord| -> Result<CorollaryCheck> {
        let lhs = integrate_z4_with(c.n, c.m - c.n, curve.tol.max(1e-14), &opts.moment)?.value;
        let rhs = c.slope * (c.m - c.n) * ln4 / (2.0 * PI * PI);
        let rel = if lhs == 0.0 && rhs == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
        };
        Ok(CorollaryCheck {
            kind,
            n: c.n,
            m: c.m,
            slope: c.slope,
            lhs,
            rhs,
            rel_discrepancy: rel,
            passed: rel <= opts.tol,
        })
    };
    // Left endpoints are tried at these fractions of the window.
    let fractions: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).collect();
    let mut search = |kind: CheckKind, end: f64, target: f64| -> Result<()> {
        let mut found = 0;
        for &f in &fractions {
            if found >= opts.count {
                break;
            }
            let n = gamma + f * (end - gamma);
            if let Ok(c) = solve_chord_slope(curve, n, target, end) {
                checks.push(check(kind, c)?);
                found += 1;
            }
        }
        Ok(())
    };

    if let (Some(rho), Some(tan_beta)) = (geom.rho, geom.tan_beta) {
        covers(curve, gamma, rho)?;
        search(CheckKind::ParallelToBeta, rho, tan_beta)?;
    }
    if let Some(rho_bar) = geom.rho_bar {
        covers(curve, gamma, rho_bar)?;
        search(CheckKind::UnitSlope, rho_bar, 1.0)?;
    }
    if let Some(end) = geom.rho_bar.or(geom.rho) {
        // Both sides vanish with the chord length.
        let n = 0.5 * (gamma + end);
        let m = n + 1e-9 * n.max(1.0);
        let lhs = integrate_z4_with(n, m - n, 1e-8, &opts.moment)?.value;
        let slope = curve.slope(n, m);
        let rhs = slope * (m - n) * ln4 / (2.0 * PI * PI);
        checks.push(CorollaryCheck {
            kind: CheckKind::Degenerate,
            n,
            m,
            slope,
            lhs,
            rhs,
            rel_discrepancy: (lhs - rhs).abs(),
            passed: lhs.abs() <= 1e-6 && rhs.abs() <= 1e-6,
        });
    }
    Ok(CorollaryReport {
        gamma,
        tol: opts.tol,
        anchor_drift: curve.anchor.ln().powi(4) / ln4 - 1.0,
        checks,
    })
}
