//! Numerics for the fourth power moment of the Riemann zeta function on the
//! critical line and for the cumulative curve it induces.
//!
//! The crate is `no_std` (it needs `alloc`) and is split into four layers:
//!
//! * [`specfun`]: the Riemann–Siegel theta function, `Z(t)` via the
//!   Riemann–Siegel formula, and an independent Euler–Maclaurin evaluation of
//!   `ζ(1/2 + it)` used as an oracle.
//! * [`quad`]: adaptive Gauss–Kronrod integration of `Z⁴`, the
//!   exponentially damped moment, and least-squares fits of the moment
//!   polynomial in `ln T`.
//! * [`ladder`]: reconstruction of the monotone curve `φ₂` whose derivative is
//!   `2π² Z⁴ / ln⁴ T`, and the chord geometry built on top of it.
//! * [`zeros`]: critical-line zeros and the geometric objects anchored at
//!   them (inflection point, crossing point, rotating chords).
//!
//! IO, the command line and file formats live in the companion `zeta4` crate.

#![no_std]
// The `num_traits::Float` imports carry `allow(unused_imports)`: whenever
// std ends up in the dependency graph its inherent float methods take over.

extern crate alloc;

mod error;
mod exec;
pub mod ladder;
pub mod quad;
pub mod roots;
pub mod specfun;
pub mod zeros;

pub use error::{Error, Result};
pub use ladder::{Chord, Convention, LadderCurve};
pub use quad::{MomentEstimate, MomentFit};
pub use specfun::{EvalPoint, Precision};
pub use zeros::ZeroGeometry;

/// Default cap on integrand evaluations for a single operation.
pub const DEFAULT_EVAL_BUDGET: u64 = 10_000_000;

/// Exponent `13/14` of the validity length `T^{13/14 + 2ε}`.
pub const VALIDITY_EXPONENT: f64 = 13.0 / 14.0;

/// Validity length `T^{13/14 + 2ε}` of the short-interval formula.
pub fn validity_length(t: f64, eps: f64) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    t.powf(VALIDITY_EXPONENT + 2.0 * eps)
}
