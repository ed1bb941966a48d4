//! Euler–Maclaurin summation of `ζ(1/2 + it)`.
//!
//! Shares no code with the Riemann–Siegel path: powers `n^{-s}` are formed
//! directly as complex exponentials and the remainder is bounded by the first
//! omitted correction term.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::Precision;
use crate::{Error, Result};

/// `B_{2k} / (2k)!` for k = 1..=20.
const BERNOULLI_OVER_FACTORIAL: [f64; 20] = [
    8.33333333333333333333e-2,
    -1.38888888888888888889e-3,
    3.30687830687830687831e-5,
    -8.26719576719576719577e-7,
    2.08767569878680989792e-8,
    -5.28419013868749318485e-10,
    1.33825365306846788328e-11,
    -3.38968029632258286683e-13,
    8.58606205627784456414e-15,
    -2.17486869855806187304e-16,
    5.5090028283602295152e-18,
    -1.39544646858125233407e-19,
    3.53470703962946747169e-21,
    -8.9535174270375468504e-23,
    2.26795245233768306031e-24,
    -5.74479066887220244526e-26,
    1.45517247561486490187e-27,
    -3.68599494066531017818e-29,
    9.33673425709504467203e-31,
    -2.36502241570062993456e-32,
];

/// Fewest Bernoulli correction terms ever used.
pub const MIN_BERNOULLI_TERMS: usize = 6;

/// A value of `ζ(1/2 + it)` with a certified bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    /// Remainder bound plus a floating-point rounding estimate.
    pub abs_err: f64,
    /// Number of terms summed directly.
    pub terms: usize,
    pub bernoulli_terms: usize,
}

/// Default truncation `max(50, ⌈2t⌉)`.
pub fn default_oracle_terms(t: f64) -> usize {
    (2.0 * t).ceil().max(50.0) as usize
}

/// `ζ(1/2 + it)` by Euler–Maclaurin summation.
pub fn zeta_oracle(t: f64, prec: &Precision) -> Result<Complex64> {
    zeta_oracle_bounded(t, prec).map(|v| v.value)
}

/// As [`zeta_oracle`], also returning the error bound and truncation used.
pub fn zeta_oracle_bounded(t: f64, prec: &Precision) -> Result<OracleValue> {
    prec.validate()?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain("zeta_oracle requires a finite t >= 0"));
    }
    let n = if prec.oracle_terms == 0 {
        default_oracle_terms(t)
    } else {
        prec.oracle_terms
    };
    if n < 2 {
        return Err(Error::domain("oracle_terms must be at least 2"));
    }
    let s = Complex64::new(0.5, t);
    let nf = n as f64;
    let ln_n = nf.ln();

    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += power_neg_s(k as f64, t);
    }
    let n_pow = power_neg_s(nf, t);
    sum += n_pow * nf / (s - 1.0) + n_pow * 0.5;

    // term_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let inv_n2 = 1.0 / (nf * nf);
    let mut rising = s;
    let mut scale = n_pow / nf;
    let mut used = 0;
    let mut bound = f64::INFINITY;
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = rising * scale * *b;
        if k >= MIN_BERNOULLI_TERMS {
            // |R_K| <= |T_{K+1}| |s + 2K + 1| / (σ + 2K + 1)
            let kk = k as f64;
            bound = term.norm() * (s + 2.0 * kk + 1.0).norm() / (0.5 + 2.0 * kk + 1.0);
            if bound <= 0.25 * prec.target_abs_err {
                break;
            }
        }
        sum += term;
        used = k + 1;
        let j = 2.0 * (k as f64) + 1.0;
        rising *= (s + j) * (s + j + 1.0);
        scale *= inv_n2;
    }
    let rounding = f64::EPSILON * (4.0 * (1.0 + t * ln_n) * (ln_n + 1.0).sqrt() + 2.0 * nf.sqrt());
    let abs_err = bound + rounding;
    if abs_err > prec.target_abs_err {
        return Err(Error::Precision {
            requested: prec.target_abs_err,
            achievable: abs_err,
        });
    }
    Ok(OracleValue {
        value: sum,
        abs_err,
        terms: n,
        bernoulli_terms: used,
    })
}

/// `n^{-(1/2 + it)}`.
fn power_neg_s(n: f64, t: f64) -> Complex64 {
    let ln = n.ln();
    Complex64::from_polar((-0.5 * ln).exp(), -t * ln)
}
