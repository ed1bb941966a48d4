//! Least-squares fits of `value/T` against powers of `ln T`.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Fewest samples accepted by the moment fits.
pub const MIN_SAMPLES: usize = 8;

/// Pivots smaller than this fraction of the largest are treated as zero.
const RANK_TOLERANCE: f64 = 1e-10;

/// Fitted coefficients, highest power first: `coeffs[k]` multiplies
/// `x^{degree-k}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentFit {
    pub coeffs: Vec<f64>,
    pub residual_rms: f64,
    /// Smallest and largest abscissa of the raw samples (`T` or `δ`).
    pub sample_range: (f64, f64),
}

impl MomentFit {
    /// Evaluates the fitted polynomial at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Fits `y ≈ Σ_k c_k x^{degree-k}` by Householder QR.
///
/// Abscissae are centred and scaled to `[-1, 1]` before factorisation and the
/// coefficients are mapped back afterwards.
pub fn fit_log_polynomial(points: &[(f64, f64)], degree: usize) -> Result<(Vec<f64>, f64)> {
    let m = points.len();
    let n = degree + 1;
    if m < n {
        return Err(Error::domain("fewer points than coefficients"));
    }
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
    let center = 0.5 * (lo + hi);
    let half = (0.5 * (hi - lo)).max(f64::MIN_POSITIVE);

    // Column j holds z^j, z = (x - center)/half.
    let mut a = vec![vec![0.0; n]; m];
    let mut b: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    for (row, &(x, _)) in a.iter_mut().zip(points) {
        let z = (x - center) / half;
        let mut p = 1.0;
        for cell in row.iter_mut() {
            *cell = p;
            p *= z;
        }
    }

    let mut diag = vec![0.0; n];
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        diag[k] = alpha;
        if norm == 0.0 {
            continue;
        }
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k + 1..n {
            let s: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum::<f64>() * 2.0 / vnorm2;
            for i in k..m {
                a[i][j] -= s * v[i - k];
            }
        }
        let s: f64 = (k..m).map(|i| v[i - k] * b[i]).sum::<f64>() * 2.0 / vnorm2;
        for i in k..m {
            b[i] -= s * v[i - k];
        }
    }

    let largest = diag.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    let smallest = diag.iter().fold(f64::INFINITY, |acc, d| acc.min(d.abs()));
    let ratio = if largest > 0.0 { smallest / largest } else { 0.0 };
    if !(ratio > RANK_TOLERANCE) {
        return Err(Error::Conditioning { pivot_ratio: ratio });
    }

    // Back substitution for the scaled coefficients, lowest power first.
    let mut scaled = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[k][j] * scaled[j];
        }
        scaled[k] = s / diag[k];
    }

    // Expand Σ s_j ((x - c)/h)^j into powers of x.
    let mut coeffs_low = vec![0.0; n];
    for (j, &s) in scaled.iter().enumerate() {
        let scale = s / half.powi(j as i32);
        let mut binom = 1.0;
        for i in 0..=j {
            // term of x^i in (x - c)^j
            let c_pow = (-center).powi((j - i) as i32);
            coeffs_low[i] += scale * binom * c_pow;
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }
    let coeffs: Vec<f64> = coeffs_low.into_iter().rev().collect();
    let fit = |x: f64| coeffs.iter().fold(0.0, |acc, &c| acc * x + c);
    let rms = (points.iter().map(|&(x, y)| (y - fit(x)).powi(2)).sum::<f64>() / m as f64).sqrt();
    Ok((coeffs, rms))
}

fn check_samples(xs: impl Iterator<Item = f64> + Clone) -> Result<(f64, f64)> {
    let mut sorted: Vec<f64> = xs.collect();
    if sorted.len() < MIN_SAMPLES {
        return Err(Error::domain("at least 8 samples are required"));
    }
    if sorted.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::domain("sample abscissae must be positive and finite"));
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("sample abscissae must be distinct"));
    }
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if hi < 10.0 * lo {
        return Err(Error::domain("samples must span at least one decade"));
    }
    Ok((lo, hi))
}

/// Fits `∫_1^T Z⁴ / T ≈ Σ_{K=0}^{4} C_K ln^{4-K} T` from `(T, value)` pairs.
pub fn fit_moment_polynomial(samples: &[(f64, f64)]) -> Result<MomentFit> {
    fit_moment_polynomial_degree(samples, 4)
}

/// As [`fit_moment_polynomial`] with a chosen degree in `ln T`.
pub fn fit_moment_polynomial_degree(samples: &[(f64, f64)], degree: usize) -> Result<MomentFit> {
    let range = check_samples(samples.iter().map(|s| s.0))?;
    let points: Vec<(f64, f64)> = samples.iter().map(|&(t, v)| (t.ln(), v / t)).collect();
    let (coeffs, residual_rms) = fit_log_polynomial(&points, degree)?;
    Ok(MomentFit {
        coeffs,
        residual_rms,
        sample_range: range,
    })
}

/// Fits `δ · ∫_0^∞ Z⁴ e^{-δt} ≈ A ln⁴(1/δ) + B ln³(1/δ) + … + E` from
/// `(δ, value)` pairs.
pub fn fit_laplace_polynomial(samples: &[(f64, f64)]) -> Result<MomentFit> {
    let range = check_samples(samples.iter().map(|s| 1.0 / s.0))?;
    let points: Vec<(f64, f64)> = samples.iter().map(|&(d, v)| ((1.0 / d).ln(), v * d)).collect();
    let (coeffs, residual_rms) = fit_log_polynomial(&points, 4)?;
    Ok(MomentFit {
        coeffs,
        residual_rms,
        sample_range: (1.0 / range.1, 1.0 / range.0),
    })
}
