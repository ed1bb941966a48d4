//! `∫_0^∞ Z⁴(t) e^{-δt} dt`, truncated where an envelope bound on the tail
//! drops below the tolerance.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::adaptive::{graded_edges, integrate_panels};
use super::{check_tol, integrate_z4_from, MomentOptions};
use crate::{Error, Result};

/// Calibration window for the envelope `c·t·ln⁴t ≥ ∫_0^t Z⁴`.
pub const ENVELOPE_RANGE: (f64, f64) = (10.0, 1e4);
const ENVELOPE_STEP: f64 = 25.0;
const ENVELOPE_SAFETY: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LaplaceOptions {
    pub moment: MomentOptions,
    /// Envelope constant; calibrated on the fly when unset.
    pub envelope_const: Option<f64>,
}

impl Default for LaplaceOptions {
    fn default() -> Self {
        LaplaceOptions {
            moment: MomentOptions::default(),
            envelope_const: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LaplaceMoment {
    pub delta: f64,
    pub value: f64,
    /// Quadrature error plus the tail bound.
    pub err_bound: f64,
    pub t_max: f64,
    pub tail_bound: f64,
    pub envelope_const: f64,
    pub evals: u64,
}

/// Smallest `c` with `∫_0^T Z⁴ <= c·T·ln⁴T` on the calibration window,
/// times a safety factor of 2.
pub fn calibrate_envelope(opts: &MomentOptions) -> Result<f64> {
    let (lo, hi) = ENVELOPE_RANGE;
    let mut acc = integrate_z4_from(0.0, lo, 1e-8, opts)?.value;
    let mut worst = acc / (lo * lo.ln().powi(4));
    let mut t = lo;
    while t < hi {
        let next = (t + ENVELOPE_STEP).min(hi);
        acc += integrate_z4_from(t, next - t, 1e-8, opts)?.value;
        worst = worst.max(acc / (next * next.ln().powi(4)));
        t = next;
    }
    Ok(ENVELOPE_SAFETY * worst)
}

/// `δ c ∫_X^∞ t ln⁴t e^{-δt} dt`, which bounds `∫_X^∞ Z⁴ e^{-δt}` by parts
/// when `∫_0^t Z⁴ <= c t ln⁴ t`.
fn tail_bound(delta: f64, c: f64, x: f64) -> f64 {
    let g = |t: f64| t * t.ln().powi(4) * (-delta * t).exp();
    let end = x + 80.0 / delta;
    let edges = graded_edges(x, end, |_| 0.5 / delta);
    let r = integrate_panels(&g, &edges, 1e-6, u64::MAX).map(|r| r.value).unwrap_or(f64::INFINITY);
    delta * c * r
}

fn damped_piece(delta: f64, a: f64, b: f64, tol: f64, opts: &MomentOptions, budget: u64) -> Result<(f64, f64, u64)> {
    let ev = opts.evaluator(b)?;
    ev.check_range(a, b)?;
    let f = |t: f64| ev.value(t).powi(4) * (-delta * t).exp();
    let edges: Vec<f64> = opts.edges(a, b);
    let r = integrate_panels(&f, &edges, tol, budget)?;
    Ok((r.value, r.err_bound, r.evals))
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain("delta must lie in (0, 1]"));
    }
    Ok(())
}

/// [`laplace_moment_with`] using default options and a fresh envelope
/// calibration.
pub fn laplace_moment(delta: f64, tol: f64) -> Result<LaplaceMoment> {
    laplace_moment_with(delta, tol, &LaplaceOptions::default())
}

/// `∫_0^∞ Z⁴(t) e^{-δt} dt` to relative accuracy `tol`.
///
/// Starting from `t_max = 10/δ`, the cut-off is doubled until the tail bound
/// is below `tol·max(value, 1)/2`.
pub fn laplace_moment_with(delta: f64, tol: f64, opts: &LaplaceOptions) -> Result<LaplaceMoment> {
    check_delta(delta)?;
    check_tol(tol)?;
    opts.moment.validate()?;
    let c = match opts.envelope_const {
        Some(c) if c > 0.0 && c.is_finite() => c,
        Some(_) => return Err(Error::domain("envelope constant must be positive")),
        None => calibrate_envelope(&opts.moment)?,
    };
    let mut x = 10.0 / delta;
    let mut evals = 0u64;
    let (mut value, mut err, used) = damped_piece(delta, 0.0, x, 0.5 * tol, &opts.moment, opts.moment.budget)?;
    evals += used;
    loop {
        let tail = tail_bound(delta, c, x);
        if tail <= 0.5 * tol * value.abs().max(1.0) {
            return Ok(LaplaceMoment {
                delta,
                value,
                err_bound: err + tail,
                t_max: x,
                tail_bound: tail,
                envelope_const: c,
                evals,
            });
        }
        let remaining = opts.moment.budget.saturating_sub(evals);
        let (v, e, used) = damped_piece(delta, x, 2.0 * x, 0.5 * tol, &opts.moment, remaining).map_err(|e| match e {
            Error::Budget { limit, used, partial } => Error::Budget {
                limit,
                used: used + evals,
                partial: partial + value,
            },
            other => other,
        })?;
        value += v;
        err += e;
        evals += used;
        x *= 2.0;
    }
}

/// `∫_0^{t_max} Z⁴(t) e^{-δt} dt` with no tail handling.
pub fn laplace_moment_to(delta: f64, t_max: f64, tol: f64, opts: &MomentOptions) -> Result<f64> {
    check_delta(delta)?;
    check_tol(tol)?;
    if !(t_max > 0.0) {
        return Err(Error::domain("t_max must be positive"));
    }
    damped_piece(delta, 0.0, t_max, tol, opts, opts.budget).map(|(v, _, _)| v)
}
