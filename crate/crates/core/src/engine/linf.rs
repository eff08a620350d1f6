use rayon::prelude::*;

use super::{breakpoints, PointMask};
use crate::error::{Error, Result};
use crate::model::{check_pair, DiscrepancyResult, Method, PointSet, WeightSet};

/// A grid interval `[a, b]` in one coordinate with both counting masks.
struct GridSide {
    len: f64,
    closed: PointMask,
    open: PointMask,
}

fn grid_sides(ps: &PointSet, j: usize) -> Vec<GridSide> {
    let g = breakpoints(ps, j);
    let n = ps.len();
    let mut out = Vec::with_capacity(g.len() * (g.len() + 1) / 2);
    for (s, &a) in g.iter().enumerate() {
        for &b in &g[s..] {
            out.push(GridSide {
                len: b - a,
                closed: PointMask::from_fn(n, |k| {
                    let x = ps.point(k)[j];
                    a <= x && x <= b
                }),
                open: PointMask::from_fn(n, |k| {
                    let x = ps.point(k)[j];
                    a < x && x < b
                }),
            });
        }
    }
    out
}

struct Search<'a> {
    dims: &'a [Vec<GridSide>],
    weights: &'a [f64],
}

impl Search<'_> {
    fn descend(&self, level: usize, vol: f64, closed: &PointMask, open: &PointMask) -> f64 {
        if level == self.dims.len() {
            let over = closed.weighted_sum(self.weights) - vol;
            let under = vol - open.weighted_sum(self.weights);
            return over.max(under);
        }
        let mut best = f64::NEG_INFINITY;
        let mut c = closed.clone();
        let mut o = open.clone();
        for side in &self.dims[level] {
            closed.and_into(&side.closed, &mut c);
            open.and_into(&side.open, &mut o);
            best = best.max(self.descend(level + 1, vol * side.len, &c, &o));
        }
        best
    }
}

/// Exact extreme `L_inf` discrepancy.
///
/// Within a cell of the grid `Γ_1 × ... × Γ_d` the set of counted points is
/// fixed, so the supremum of `Δ` is reached by shrinking onto a closed grid
/// box and the supremum of `-Δ` by growing to an open grid box. The result is
/// the maximum of `W([a,b]) - vol` and `vol - W((a,b))` over grid boxes.
pub fn extreme_linf_exact(ps: &PointSet, ws: &WeightSet, budget: f64) -> Result<DiscrepancyResult> {
    check_pair(ps, ws)?;
    let needed: f64 = (0..ps.dim())
        .map(|j| {
            let m = breakpoints(ps, j).len() as f64;
            m * (m + 1.0) / 2.0
        })
        .product();
    if needed > budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget,
            advice: "use the sampled lower bound",
        });
    }
    let dims: Vec<Vec<GridSide>> = (0..ps.dim()).map(|j| grid_sides(ps, j)).collect();
    let search = Search {
        dims: &dims,
        weights: ws.as_slice(),
    };
    let value = dims[0]
        .par_iter()
        .map(|side| search.descend(1, side.len, &side.closed, &side.open))
        .reduce(|| 0.0, f64::max);
    Ok(DiscrepancyResult::exact(f64::INFINITY, ps, Method::LinfExact, value))
}
