//! Riemann–Siegel evaluation of `Z(t)`.
//!
//! `Z(t) = 2 Σ_{n≤N} n^{-1/2} cos(ϑ(t) - t ln n) + (-1)^{N-1} (2π/t)^{1/4} Σ_k C_k(p) (2π/t)^{k/2}`
//! with `N = ⌊√(t/2π)⌋` and `p` the fractional part of `√(t/2π)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Highest supported number of correction terms (`C_0` through `C_4`).
pub const MAX_CORRECTION_TERMS: usize = 4;

/// Remainder bounds `c_K t^{-(2K+3)/4}` after the terms `C_0..=C_K`,
/// valid for `t >= 200`.
const REMAINDER_COEFF: [f64; MAX_CORRECTION_TERMS + 1] = [0.127, 0.053, 0.011, 0.031, 0.017];

/// Taylor coefficients of `Ψ(p) = cos(2π(p² - p - 1/16)) / cos(2πp)` in powers
/// of `x = p - 1/2`. Ψ is even about 1/2, so only even powers appear.
const PSI_EVEN: [f64; 36] = [
    3.826834323650897717285e-1, // x^0
    1.748961872310081797441, // x^2
    2.118025207685496373185, // x^4
    -8.707216670511480739189e-1, // x^6
    -3.473311224346516707306, // x^8
    -1.662694730899932449643, // x^10
    1.216731288919232134477, // x^12
    1.301430416100797577301, // x^14
    3.051102182736167242109e-2, // x^16
    -3.755803051545095242798e-1, // x^18
    -1.085784416564065974355e-1, // x^20
    5.183290299954962337576e-2, // x^22
    2.99994806199022759204e-2, // x^24
    -2.27593967061256422602e-3, // x^26
    -4.38264741658033830594e-3, // x^28
    -4.064230183729846993072e-4, // x^30
    4.006097785422113927891e-4, // x^32
    8.971057991388841297834e-5, // x^34
    -2.30256500272391071161e-5, // x^36
    -9.38000660190679248472e-6, // x^38
    6.32351494760910750425e-7, // x^40
    6.551022819231501666212e-7, // x^42
    2.210523745552697258661e-8, // x^44
    -3.322316176445628835031e-8, // x^46
    -3.734910989933656081765e-9, // x^48
    1.244506706079773919515e-9, // x^50
    2.476820537650219184251e-10, // x^52
    -3.284272816891627194459e-11, // x^54
    -1.130540685229840367788e-11, // x^56
    4.565463979588693927593e-13, // x^58
    3.959848094524921519585e-13, // x^60
    7.849566221259617317142e-15, // x^62
    -1.105904315099123319372e-14, // x^64
    -7.73854398764150831706e-16, // x^66
    2.485775555027137218484e-16, // x^68
    3.051479718882721790972e-17, // x^70
];

const SERIES_LEN: usize = 71;

const fn falling(n: usize, j: usize) -> f64 {
    let mut out = 1.0;
    let mut i = 0;
    while i < j {
        out *= (n - i) as f64;
        i += 1;
    }
    out
}

/// Coefficient of `x^m` in the `j`-th derivative of Ψ.
const fn psi_derivative(m: usize, j: usize) -> f64 {
    let n = m + j;
    if n % 2 == 1 || n / 2 >= PSI_EVEN.len() {
        return 0.0;
    }
    PSI_EVEN[n / 2] * falling(n, j)
}

const PI2: f64 = PI * PI;
const PI4: f64 = PI2 * PI2;
const PI6: f64 = PI4 * PI2;
const PI8: f64 = PI4 * PI4;

/// Power series of `C_0..C_4` in `x = p - 1/2`, as linear combinations of Ψ
/// derivatives.
const fn correction_series() -> [[f64; SERIES_LEN]; MAX_CORRECTION_TERMS + 1] {
    let mut out = [[0.0; SERIES_LEN]; MAX_CORRECTION_TERMS + 1];
    let mut m = 0;
    while m < SERIES_LEN {
        out[0][m] = psi_derivative(m, 0);
        out[1][m] = -psi_derivative(m, 3) / (96.0 * PI2);
        out[2][m] = psi_derivative(m, 6) / (18_432.0 * PI4) + psi_derivative(m, 2) / (64.0 * PI2);
        out[3][m] = -psi_derivative(m, 9) / (5_308_416.0 * PI6)
            - psi_derivative(m, 5) / (3840.0 * PI4)
            - psi_derivative(m, 1) / (64.0 * PI2);
        out[4][m] = psi_derivative(m, 12) / (2_038_431_744.0 * PI8)
            + 11.0 * psi_derivative(m, 8) / (5_898_240.0 * PI6)
            + 19.0 * psi_derivative(m, 4) / (24_576.0 * PI4)
            + psi_derivative(m, 0) / (128.0 * PI2);
        m += 1;
    }
    out
}

static CORRECTIONS: [[f64; SERIES_LEN]; MAX_CORRECTION_TERMS + 1] = correction_series();

/// `C_k(p)` for `k <= 4` and `p ∈ [0, 1]`.
pub fn correction_coefficient(k: usize, p: f64) -> f64 {
    let x = p - 0.5;
    CORRECTIONS[k].iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Bound on the truncation error of the formula with `C_0..=C_K` at height `t`.
pub fn remainder_bound(t: f64, correction_terms: usize) -> f64 {
    let k = correction_terms.min(MAX_CORRECTION_TERMS);
    REMAINDER_COEFF[k] * t.powf(-((2 * k + 3) as f64) / 4.0)
}

/// Precomputed `ln n`, `n^{-1/2}` and smallest prime factors for the main sum.
///
/// `n^{-it}` is completely multiplicative, so only prime `n` need a sine and
/// cosine; composite terms are products of earlier ones.
#[derive(Debug, Clone)]
pub(crate) struct MainSum {
    ln: Vec<f64>,
    inv_sqrt: Vec<f64>,
    spf: Vec<u32>,
}

impl MainSum {
    pub fn new(n_max: usize) -> Self {
        let len = n_max.max(1) + 1;
        let mut spf = vec![0u32; len];
        for i in 2..len {
            if spf[i] == 0 {
                let mut j = i;
                while j < len {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let ln = (0..len).map(|n| if n == 0 { 0.0 } else { (n as f64).ln() }).collect();
        let inv_sqrt = (0..len)
            .map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64).sqrt() })
            .collect();
        MainSum { ln, inv_sqrt, spf }
    }

    pub fn capacity(&self) -> usize {
        self.spf.len() - 1
    }

    /// `2 Σ_{n≤N} n^{-1/2} cos(ϑ - t ln n)`.
    pub fn eval(&self, t: f64, theta: f64, n: usize) -> f64 {
        let cap = self.capacity();
        let mut powers = vec![Complex64::new(1.0, 0.0); n.min(cap) + 1];
        let mut acc = Complex64::new(1.0, 0.0);
        for k in 2..=n.min(cap) {
            let p = self.spf[k] as usize;
            let w = if p == k {
                let (s, c) = (t * self.ln[k]).sin_cos();
                Complex64::new(c, -s)
            } else {
                powers[p] * powers[k / p]
            };
            powers[k] = w;
            acc += w * self.inv_sqrt[k];
        }
        for k in cap + 1..=n {
            let kf = k as f64;
            let (s, c) = (t * kf.ln()).sin_cos();
            acc += Complex64::new(c, -s) / kf.sqrt();
        }
        let (s, c) = theta.sin_cos();
        2.0 * (c * acc.re - s * acc.im)
    }
}

/// Main-sum length `⌊√(t/2π)⌋` and fractional part.
pub(crate) fn split_height(t: f64) -> (usize, f64) {
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor();
    (n as usize, a - n)
}

/// Remainder part `(-1)^{N-1} (2π/t)^{1/4} Σ_{k≤K} C_k(p) (2π/t)^{k/2}`.
pub(crate) fn remainder(t: f64, n: usize, p: f64, correction_terms: usize) -> f64 {
    let r = (2.0 * PI / t).sqrt();
    let mut sum = 0.0;
    let mut scale = 1.0;
    for k in 0..=correction_terms.min(MAX_CORRECTION_TERMS) {
        sum += correction_coefficient(k, p) * scale;
        scale *= r;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * r.sqrt() * sum
}
