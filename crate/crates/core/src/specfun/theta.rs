use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Below this height theta is evaluated from the complex log-gamma function,
/// above it from the asymptotic series.
pub const THETA_SWITCHOVER: f64 = 30.0;

/// `B_{2k} / (2k (2k-1))` for k = 1..=8, the Stirling series coefficients.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Principal-branch-continuous `ln Γ(z)` for `Re z > 0`.
///
/// The argument is shifted up to `|z| >= 15` with the recurrence
/// `ln Γ(z) = ln Γ(z + 1) - ln z`, summing the logarithms one at a time so the
/// imaginary part stays on the continuous branch rather than being reduced
/// into `(-π, π]`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

/// Riemann–Siegel theta function `ϑ(t) = Im ln Γ(1/4 + it/2) - (t/2) ln π`.
///
/// Uses [`ln_gamma`] for `t < 30` and the asymptotic series through `t⁻⁹`
/// above. Both branches agree to about `1e-13` at the switchover.
pub fn theta(t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain("theta requires a finite t >= 0"));
    }
    Ok(theta_unchecked(t))
}

/// [`theta`] without input validation.
pub(crate) fn theta_unchecked(t: f64) -> f64 {
    if t < THETA_SWITCHOVER {
        theta_exact(t)
    } else {
        theta_asymptotic(t)
    }
}

pub(crate) fn theta_exact(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

pub(crate) fn theta_asymptotic(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    let tail = r
        * (1.0 / 48.0
            + r2 * (7.0 / 5760.0
                + r2 * (31.0 / 80_640.0 + r2 * (127.0 / 430_080.0 + r2 * (511.0 / 1_216_512.0)))));
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + tail
}

/// `ϑ'(t)`, asymptotically `½ ln(t/2π)`. Only used to steer Newton steps.
pub(crate) fn theta_slope(t: f64) -> f64 {
    0.5 * (t.max(1.0) / (2.0 * PI)).ln() + 1.0 / (48.0 * t.max(1.0) * t.max(1.0))
}

/// Gram point `g_n`, the solution of `ϑ(g_n) = nπ` for `n >= -1`.
pub fn gram_point(n: i64) -> Result<f64> {
    if n < -1 {
        return Err(Error::domain("gram points are indexed from -1"));
    }
    let target = n as f64 * PI;
    // theta is convex and increasing past its minimum near t = 6.29, so
    // Newton started to the right of the root descends onto it.
    let mut t = 20.0;
    while theta(t)? < target {
        t *= 2.0;
    }
    for _ in 0..100 {
        let f = theta(t)? - target;
        let step = f / theta_slope(t).max(0.1);
        t = (t - step).max(6.3);
        if step.abs() < 1e-13 * t.max(1.0) {
            break;
        }
    }
    Ok(t)
}
