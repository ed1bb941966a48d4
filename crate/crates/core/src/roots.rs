//! Bracketing root search shared by the geometry solvers.
//!
//! Every solver here has first-branch semantics: grids are scanned left to
//! right and the first bracket found is refined.

/// A sign change of `f` between `lo` and `hi`, with the function values there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

fn opposite(a: f64, b: f64) -> bool {
    (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)
}

/// Scans `start, start + step, ...` up to `end` (always sampling `end`) and
/// returns the first pair of consecutive samples where `f` changes sign.
///
/// A sample exactly equal to zero counts as a sign change with its
/// predecessor. Samples that are NaN stop the scan.
pub fn first_sign_change<F>(mut f: F, start: f64, end: f64, step: f64) -> Option<Bracket>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(step > 0.0 && end > start);
    let mut x0 = start;
    let mut f0 = f(x0);
    if f0.is_nan() {
        return None;
    }
    let mut i = 1u64;
    loop {
        let x1 = (start + i as f64 * step).min(end);
        let f1 = f(x1);
        if f1.is_nan() {
            return None;
        }
        if opposite(f0, f1) && !(f0 == 0.0 && i > 1) {
            return Some(Bracket { lo: x0, hi: x1, f_lo: f0, f_hi: f1 });
        }
        if x1 >= end {
            return None;
        }
        x0 = x1;
        f0 = f1;
        i += 1;
    }
}

/// Refines a bracket by bisection until its width is at most `tol`, and
/// returns the final bracket. Stops early on an exact zero.
pub fn bisect<F>(mut f: F, bracket: Bracket, tol: f64) -> Bracket
where
    F: FnMut(f64) -> f64,
{
    let Bracket { mut lo, mut hi, mut f_lo, mut f_hi } = bracket;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Bracket { lo: mid, hi: mid, f_lo: 0.0, f_hi: 0.0 };
        }
        if opposite(f_lo, fm) && f_lo != 0.0 {
            hi = mid;
            f_hi = fm;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    Bracket { lo, hi, f_lo, f_hi }
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).abs()
    }

    /// The endpoint whose function value is closer to zero.
    pub fn best(&self) -> f64 {
        if self.f_lo.abs() <= self.f_hi.abs() {
            self.lo
        } else {
            self.hi
        }
    }
}
