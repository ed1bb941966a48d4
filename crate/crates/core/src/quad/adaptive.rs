//! Adaptive panel integration.
//!
//! The interval is cut into initial panels, each panel is integrated with the
//! G7/K15 pair and bisected until its error share is met. Panels are
//! independent (and may run in parallel); the totals are accumulated in panel
//! order so the result does not depend on scheduling.

use alloc::vec::Vec;

use super::gauss_kronrod::{gk15, PanelEstimate, POINTS};
use crate::exec::map_ordered;
use crate::{Error, Result};

/// Deepest bisection applied to a single initial panel.
pub const MAX_DEPTH: u32 = 24;

/// Depth from which a bisection that fails to halve the error estimate ends
/// refinement.
const STALL_DEPTH: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_bound: f64,
    /// Accepted panels after refinement.
    pub panels: u64,
    pub evals: u64,
}

struct Refined {
    value: f64,
    err: f64,
    panels: u64,
    evals: u64,
}

fn refine<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    est: PanelEstimate,
    target: f64,
    depth: u32,
) -> Refined {
    if est.err <= target || depth >= MAX_DEPTH || !(est.err.is_finite()) {
        return Refined {
            value: est.value,
            err: est.err,
            panels: 1,
            evals: 0,
        };
    }
    let mid = 0.5 * (a + b);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    // On a resolved smooth panel one bisection cuts the error estimate by
    // orders of magnitude. If it does not even halve it, the estimate is
    // tracking noise in the integrand and further splitting is wasted.
    if depth >= STALL_DEPTH && left.err + right.err >= 0.5 * est.err {
        return Refined {
            value: left.value + right.value,
            err: left.err + right.err,
            panels: 2,
            evals: 2 * POINTS,
        };
    }
    let l = refine(f, a, mid, left, 0.5 * target, depth + 1);
    let r = refine(f, mid, b, right, 0.5 * target, depth + 1);
    Refined {
        value: l.value + r.value,
        err: l.err + r.err,
        panels: l.panels + r.panels,
        evals: 2 * POINTS + l.evals + r.evals,
    }
}

/// Per-cell integrals over consecutive cells given by `edges`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellIntegrals {
    pub values: Vec<f64>,
    pub errs: Vec<f64>,
    pub panels: u64,
    pub evals: u64,
}

impl CellIntegrals {
    /// Sums in cell order.
    pub fn total(&self) -> Integral {
        Integral {
            value: self.values.iter().fold(0.0, |acc, v| acc + v),
            err_bound: self.errs.iter().fold(0.0, |acc, v| acc + v),
            panels: self.panels,
            evals: self.evals,
        }
    }
}

/// Integrates `f` over each cell `[edges[i], edges[i+1]]`.
///
/// The total error target is `rel_tol * max(|first-pass value|, 1)`, shared
/// among cells in proportion to their width. Fails with [`Error::Budget`]
/// once more than `budget` evaluations would be needed; the error then
/// carries the sum over the cells that fit.
pub fn integrate_cells<F>(f: &F, edges: &[f64], rel_tol: f64, budget: u64) -> Result<CellIntegrals>
where
    F: Fn(f64) -> f64 + Sync + Send + ?Sized,
{
    if edges.len() < 2 {
        return Ok(CellIntegrals {
            values: Vec::new(),
            errs: Vec::new(),
            panels: 0,
            evals: 0,
        });
    }
    let spans: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let first_evals = spans.len() as u64 * POINTS;
    if first_evals > budget {
        let fit = (budget / POINTS) as usize;
        let partial = map_ordered(&spans[..fit], |&(a, b)| gk15(f, a, b).value)
            .into_iter()
            .fold(0.0, |acc, v| acc + v);
        return Err(Error::Budget {
            limit: budget,
            used: fit as u64 * POINTS,
            partial,
        });
    }
    let first = map_ordered(&spans, |&(a, b)| gk15(f, a, b));
    let rough = first.iter().fold(0.0, |acc, e| acc + e.value);
    let total = edges[edges.len() - 1] - edges[0];
    let target = rel_tol * rough.abs().max(1.0);

    let work: Vec<((f64, f64), PanelEstimate)> = spans.into_iter().zip(first).collect();
    let refined = map_ordered(&work, |&((a, b), est)| {
        refine(f, a, b, est, target * (b - a) / total, 0)
    });

    let mut out = CellIntegrals {
        values: Vec::with_capacity(refined.len()),
        errs: Vec::with_capacity(refined.len()),
        panels: 0,
        evals: first_evals,
    };
    for r in &refined {
        out.values.push(r.value);
        out.errs.push(r.err);
        out.panels += r.panels;
        out.evals += r.evals;
    }
    if out.evals > budget {
        return Err(Error::Budget {
            limit: budget,
            used: out.evals,
            partial: out.total().value,
        });
    }
    Ok(out)
}

/// Integrates `f` over `[edges[0], edges[last]]`; see [`integrate_cells`].
pub fn integrate_panels<F>(f: &F, edges: &[f64], rel_tol: f64, budget: u64) -> Result<Integral>
where
    F: Fn(f64) -> f64 + Sync + Send + ?Sized,
{
    integrate_cells(f, edges, rel_tol, budget).map(|c| c.total())
}

/// Panel edges on `[a, b]` whose width follows `width(t)` at each panel's
/// left edge. The last panel ends exactly at `b`.
pub fn graded_edges<W: Fn(f64) -> f64>(a: f64, b: f64, width: W) -> Vec<f64> {
    let mut edges = Vec::new();
    edges.push(a);
    if b <= a {
        return edges;
    }
    let mut x = a;
    loop {
        let w = width(x).max(1e-12 * x.abs().max(1.0));
        let next = x + w;
        // Merge a trailing sliver into the previous panel.
        if next >= b - 0.25 * w {
            edges.push(b);
            break;
        }
        edges.push(next);
        x = next;
    }
    edges
}
