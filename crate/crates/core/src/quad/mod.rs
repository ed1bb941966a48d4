//! Integrals of `Z⁴`: short and long intervals, the exponentially damped
//! moment, and polynomial fits in `ln T`.

mod adaptive;
mod fit;
mod gauss_kronrod;
mod laplace;

pub use adaptive::{graded_edges, integrate_cells, integrate_panels, CellIntegrals, Integral, MAX_DEPTH};
pub use fit::{
    fit_laplace_polynomial, fit_log_polynomial, fit_moment_polynomial, fit_moment_polynomial_degree, MomentFit, MIN_SAMPLES,
};
pub use gauss_kronrod::{gk15, PanelEstimate};
pub use laplace::{
    calibrate_envelope, laplace_moment, laplace_moment_to, laplace_moment_with, LaplaceMoment, LaplaceOptions, ENVELOPE_RANGE,
};

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::specfun::{Precision, ZEvaluator};
use crate::{Error, Result, DEFAULT_EVAL_BUDGET};

/// `∫_T^{T+U} Z⁴ dt` with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentEstimate {
    #[cfg_attr(feature = "serde", serde(rename = "T"))]
    pub start: f64,
    #[cfg_attr(feature = "serde", serde(rename = "U"))]
    pub length: f64,
    pub value: f64,
    pub err_bound: f64,
    pub panels: u64,
    pub evals: u64,
}

impl MomentEstimate {
    /// Ratio of the value to `(1/2π²) T ln⁴ T` at the right endpoint.
    ///
    /// Only meaningful for integrals starting near 1; reported, never gated.
    pub fn leading_term_ratio(&self) -> f64 {
        let t = self.start + self.length;
        self.value / (t * t.ln().powi(4) / (2.0 * PI * PI))
    }
}

/// Settings shared by all `Z⁴` integrations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentOptions {
    pub precision: Precision,
    /// Initial panel width as a multiple of the oscillation scale
    /// `2π / ln(max(t, 10)/2π)`.
    pub panel_scale: f64,
    /// Cap on integrand evaluations.
    pub budget: u64,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions {
            precision: Precision::default(),
            panel_scale: 0.25,
            budget: DEFAULT_EVAL_BUDGET,
        }
    }
}

/// Local oscillation scale of `Z` at height `t`.
pub fn oscillation_scale(t: f64) -> f64 {
    let l = (t.max(10.0) / (2.0 * PI)).ln();
    2.0 * PI / l.max(0.4)
}

impl MomentOptions {
    pub fn validate(&self) -> Result<()> {
        self.precision.validate()?;
        if !(self.panel_scale > 0.0 && self.panel_scale.is_finite()) {
            return Err(Error::domain("panel_scale must be positive"));
        }
        Ok(())
    }

    /// Panel edges on `[a, b]` at this configuration's density.
    pub fn edges(&self, a: f64, b: f64) -> alloc::vec::Vec<f64> {
        let scale = self.panel_scale;
        graded_edges(a, b, |t| {
            // The scale shrinks with height; use the panel's far end.
            let w = scale * oscillation_scale(t);
            scale * oscillation_scale(t + w)
        })
    }

    pub fn evaluator(&self, t_max: f64) -> Result<ZEvaluator> {
        ZEvaluator::new(self.precision, t_max)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain("tol must lie in (0, 1)"));
    }
    Ok(())
}

/// `∫_T^{T+U} Z⁴(t) dt` with default options.
pub fn integrate_z4(start: f64, length: f64, tol: f64) -> Result<MomentEstimate> {
    integrate_z4_with(start, length, tol, &MomentOptions::default())
}

/// `∫_T^{T+U} Z⁴(t) dt`.
///
/// The target is `|value - true| <= max(tol·value, tol)`; the reported
/// `err_bound` is the sum of per-panel Kronrod error estimates.
pub fn integrate_z4_with(start: f64, length: f64, tol: f64, opts: &MomentOptions) -> Result<MomentEstimate> {
    if !(start >= 1.0) || !start.is_finite() {
        return Err(Error::domain("T must be finite and at least 1"));
    }
    integrate_z4_from(start, length, tol, opts)
}

/// As [`integrate_z4_with`] but allowing any start `>= 0`.
pub(crate) fn integrate_z4_from(start: f64, length: f64, tol: f64, opts: &MomentOptions) -> Result<MomentEstimate> {
    if !(length >= 0.0) || !length.is_finite() {
        return Err(Error::domain("U must be finite and non-negative"));
    }
    check_tol(tol)?;
    opts.validate()?;
    if length == 0.0 {
        return Ok(MomentEstimate {
            start,
            length,
            value: 0.0,
            err_bound: 0.0,
            panels: 0,
            evals: 0,
        });
    }
    let end = start + length;
    let ev = opts.evaluator(end)?;
    ev.check_range(start, end)?;
    let edges = opts.edges(start, end);
    let f = |t: f64| ev.value(t).powi(4);
    let r = integrate_panels(&f, &edges, tol, opts.budget)?;
    Ok(MomentEstimate {
        start,
        length,
        value: r.value,
        err_bound: r.err_bound,
        panels: r.panels,
        evals: r.evals,
    })
}

/// Samples `(T, ∫_1^T Z⁴)` at increasing heights, integrating each
/// increment once and summing in order.
pub fn cumulative_moments(heights: &[f64], tol: f64, opts: &MomentOptions) -> Result<alloc::vec::Vec<(f64, MomentEstimate)>> {
    let mut out = alloc::vec::Vec::with_capacity(heights.len());
    let mut prev = 1.0;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut panels = 0;
    let mut evals = 0;
    for &t in heights {
        if !(t > prev) {
            return Err(Error::domain("heights must be increasing and above 1"));
        }
        let mut local = *opts;
        local.budget = opts.budget.saturating_sub(evals);
        let piece = integrate_z4_with(prev, t - prev, tol, &local)?;
        value += piece.value;
        err += piece.err_bound;
        panels += piece.panels;
        evals += piece.evals;
        out.push((
            t,
            MomentEstimate {
                start: 1.0,
                length: t - 1.0,
                value,
                err_bound: err,
                panels,
                evals,
            },
        ));
        prev = t;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_interval() {
        let m = integrate_z4(100.0, 0.0, 1e-8).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.err_bound, 0.0);
    }

    #[test]
    fn domain_checks() {
        assert!(matches!(integrate_z4(0.5, 1.0, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(integrate_z4(100.0, -1.0, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(integrate_z4(100.0, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(integrate_z4(100.0, 1.0, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let opts = MomentOptions {
            budget: 1000,
            ..MomentOptions::default()
        };
        assert!(matches!(
            integrate_z4_with(1000.0, 500.0, 1e-8, &opts),
            Err(Error::Budget { limit: 1000, .. })
        ));
    }

    #[test]
    fn additivity() {
        let whole = integrate_z4(1000.0, 20.0, 1e-10).unwrap();
        let a = integrate_z4(1000.0, 7.0, 1e-10).unwrap();
        let b = integrate_z4(1007.0, 13.0, 1e-10).unwrap();
        let slack = whole.err_bound + a.err_bound + b.err_bound + 1e-12 * whole.value;
        assert!((whole.value - a.value - b.value).abs() <= slack);
    }

    #[test]
    fn panel_width_tracks_oscillation() {
        assert!(oscillation_scale(1e6) < oscillation_scale(1e3));
        assert_eq!(oscillation_scale(1.0), oscillation_scale(10.0));
    }
}
