//! Special functions on the critical line.

mod oracle;
mod riemann_siegel;
mod theta;

pub use oracle::{default_oracle_terms, zeta_oracle, zeta_oracle_bounded, OracleValue, MIN_BERNOULLI_TERMS};
pub use riemann_siegel::{correction_coefficient, remainder_bound, MAX_CORRECTION_TERMS};
pub use theta::{gram_point, ln_gamma, theta, THETA_SWITCHOVER};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};
use riemann_siegel::{split_height, MainSum};

/// Lowest height at which the Riemann–Siegel formula may be selected.
pub const MIN_RS_HEIGHT: f64 = 2.0;

/// Accuracy configuration for `Z` and the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Precision {
    /// Required absolute accuracy of `Z(t)`, in `(0, 1)`.
    pub target_abs_err: f64,
    /// Riemann–Siegel correction terms beyond the main sum (`0..=4`).
    pub correction_terms: usize,
    /// Euler–Maclaurin truncation; `0` selects `max(50, ⌈2t⌉)`.
    pub oracle_terms: usize,
    /// Heights below this are evaluated through the Euler–Maclaurin path.
    pub switchover: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            target_abs_err: 1e-8,
            correction_terms: MAX_CORRECTION_TERMS,
            oracle_terms: 0,
            switchover: 1000.0,
        }
    }
}

impl Precision {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_err > 0.0 && self.target_abs_err < 1.0) {
            return Err(Error::domain("target_abs_err must lie in (0, 1)"));
        }
        if self.correction_terms > MAX_CORRECTION_TERMS {
            return Err(Error::domain("at most 4 correction terms are implemented"));
        }
        if !(self.switchover >= MIN_RS_HEIGHT) {
            return Err(Error::domain("switchover height must be at least 2"));
        }
        Ok(())
    }

    /// Whether `t` is evaluated through the Riemann–Siegel formula.
    pub fn uses_riemann_siegel(&self, t: f64) -> bool {
        t >= self.switchover
    }
}

/// A height on the critical line with `ϑ(t)`, `Z(t)` and an error bound on `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalPoint {
    pub t: f64,
    pub theta: f64,
    pub z: f64,
    pub abs_err: f64,
}

/// Rounding estimate for the main sum: phase errors of order `ε·t·ln N`
/// accumulated as a random walk over `N` terms weighted by `n^{-1/2}`.
fn main_sum_rounding(t: f64, theta: f64, n: usize) -> f64 {
    let ln_n = (n.max(1) as f64).ln();
    f64::EPSILON * (1.0 + theta.abs() + t * ln_n) * (ln_n + 1.0).sqrt()
}

/// Evaluator for `Z(t)` with tables reused across many heights.
#[derive(Debug, Clone)]
pub struct ZEvaluator {
    prec: Precision,
    main: MainSum,
}

impl ZEvaluator {
    /// Tables are sized for heights up to `t_max`; larger heights still work
    /// but evaluate the extra terms without tables.
    pub fn new(prec: Precision, t_max: f64) -> Result<Self> {
        prec.validate()?;
        let (n, _) = split_height(t_max.max(MIN_RS_HEIGHT));
        Ok(ZEvaluator {
            prec,
            main: MainSum::new(n + 1),
        })
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    /// Checks that every height in `[lo, hi]` meets the target accuracy.
    ///
    /// The Riemann–Siegel bound decreases with height, so checking the lowest
    /// height that takes that path suffices.
    pub fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        let first_rs = lo.max(self.prec.switchover);
        if first_rs <= hi {
            let bound = self.rs_bound(first_rs);
            if bound > self.prec.target_abs_err {
                return Err(Error::Precision {
                    requested: self.prec.target_abs_err,
                    achievable: bound,
                });
            }
        }
        Ok(())
    }

    fn rs_bound(&self, t: f64) -> f64 {
        let (n, _) = split_height(t);
        let th = theta::theta_asymptotic(t.max(THETA_SWITCHOVER));
        remainder_bound(t, self.prec.correction_terms) + main_sum_rounding(t, th, n)
    }

    /// `Z(t)` with its error bound.
    pub fn eval(&self, t: f64) -> Result<EvalPoint> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::domain("Z requires a finite t >= 0"));
        }
        let th = theta(t)?;
        if self.prec.uses_riemann_siegel(t) {
            let abs_err = self.rs_bound(t);
            if abs_err > self.prec.target_abs_err {
                return Err(Error::Precision {
                    requested: self.prec.target_abs_err,
                    achievable: abs_err,
                });
            }
            Ok(EvalPoint {
                t,
                theta: th,
                z: self.riemann_siegel(t, th),
                abs_err,
            })
        } else {
            let zeta = zeta_oracle_bounded(t, &self.prec)?;
            let z = (Complex64::from_polar(1.0, th) * zeta.value).re;
            Ok(EvalPoint {
                t,
                theta: th,
                z,
                abs_err: zeta.abs_err,
            })
        }
    }

    /// `Z(t)` without error reporting, for use inside integrands.
    ///
    /// Callers are expected to have run [`ZEvaluator::check_range`] on the
    /// heights involved. Invalid input yields NaN.
    pub fn value(&self, t: f64) -> f64 {
        if !(t >= 0.0) || !t.is_finite() {
            return f64::NAN;
        }
        let th = theta::theta_unchecked(t);
        if self.prec.uses_riemann_siegel(t) {
            self.riemann_siegel(t, th)
        } else {
            match zeta_oracle_bounded(t, &self.prec) {
                Ok(v) => (Complex64::from_polar(1.0, th) * v.value).re,
                Err(_) => f64::NAN,
            }
        }
    }

    fn riemann_siegel(&self, t: f64, th: f64) -> f64 {
        let (n, p) = split_height(t);
        self.main.eval(t, th, n) + riemann_siegel::remainder(t, n, p, self.prec.correction_terms)
    }
}

/// `Z(t) = e^{iϑ(t)} ζ(1/2 + it)`.
///
/// Uses the Riemann–Siegel formula at and above `prec.switchover` and the
/// Euler–Maclaurin oracle below it. Fails with [`Error::Precision`] when the
/// configured correction terms cannot reach `prec.target_abs_err`.
pub fn z(t: f64, prec: &Precision) -> Result<EvalPoint> {
    ZEvaluator::new(*prec, t)?.eval(t)
}
