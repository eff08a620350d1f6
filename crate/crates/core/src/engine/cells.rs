use rayon::prelude::*;

use super::{breakpoints, PointMask};
use crate::error::{Error, Result};
use crate::model::{check_pair, DiscrepancyResult, Method, PointSet, WeightSet};
use crate::sum::{pairwise_sum, PairwiseAccumulator};

/// Partition of the box domain on which the weighted count is constant.
///
/// In dimension `j` the breakpoints `Γ_j` split `[0,1]` into intervals; a
/// cell picks an interval `s` for `a_j` and an interval `t >= s` for `b_j`.
/// Point `k` is counted in dimension `j` iff `γ_{s+1} <= x_kj <= γ_t`, which
/// is never the case on the diagonal cells `s == t`.
#[derive(Debug, Clone)]
pub struct CellDecomposition {
    grids: Vec<Vec<f64>>,
}

/// One per-dimension cell: `(b-a)^i` moments and the included points.
struct DimCell {
    moments: Vec<f64>,
    mask: PointMask,
}

impl CellDecomposition {
    pub fn new(ps: &PointSet) -> Self {
        Self {
            grids: (0..ps.dim()).map(|j| breakpoints(ps, j)).collect(),
        }
    }

    pub fn breakpoints(&self, j: usize) -> &[f64] {
        &self.grids[j]
    }

    /// Total number of cells, as a float since it overflows quickly.
    pub fn cell_count(&self) -> f64 {
        self.grids
            .iter()
            .map(|g| {
                let k = (g.len() - 1) as f64;
                k * (k + 1.0) / 2.0
            })
            .product()
    }

    fn dim_cells(&self, ps: &PointSet, j: usize, p: u32) -> Vec<DimCell> {
        let g = &self.grids[j];
        let k = g.len() - 1;
        let n = ps.len();
        let mut out = Vec::with_capacity(k * (k + 1) / 2);
        for s in 0..k {
            for t in s..k {
                let moments = (0..=p)
                    .map(|i| {
                        if s == t {
                            triangle_moment(g[s], g[s + 1], i)
                        } else {
                            rectangle_moment(g[s], g[s + 1], g[t], g[t + 1], i)
                        }
                    })
                    .collect();
                let mask = if s == t {
                    PointMask::from_fn(n, |_| false)
                } else {
                    let (lo, hi) = (g[s + 1], g[t]);
                    PointMask::from_fn(n, |k| {
                        let x = ps.point(k)[j];
                        lo <= x && x <= hi
                    })
                };
                out.push(DimCell { moments, mask });
            }
        }
        out
    }
}

/// `int_{α0}^{α1} int_{β0}^{β1} (b-a)^i db da` for `α1 <= β0`.
fn rectangle_moment(a0: f64, a1: f64, b0: f64, b1: f64, i: u32) -> f64 {
    let e = (i + 2) as i32;
    let num = (b1 - a0).powi(e) - (b1 - a1).powi(e) - (b0 - a0).powi(e) + (b0 - a1).powi(e);
    num / f64::from((i + 1) * (i + 2))
}

/// `int_{γ}^{γ'} int_a^{γ'} (b-a)^i db da`.
fn triangle_moment(g0: f64, g1: f64, i: u32) -> f64 {
    (g1 - g0).powi((i + 2) as i32) / f64::from((i + 1) * (i + 2))
}

fn binomials(p: u32) -> Vec<f64> {
    let mut row = vec![1.0f64; p as usize + 1];
    for i in 1..p as usize {
        row[i] = row[i - 1] * f64::from(p - i as u32 + 1) / i as f64;
    }
    row
}

struct Walk<'a> {
    dims: &'a [Vec<DimCell>],
    weights: &'a [f64],
    binom: &'a [f64],
    p: u32,
    // int of (b-a)^p over the whole 1-d domain
    tail_volume: f64,
}

impl Walk<'_> {
    fn descend(&self, level: usize, moments: &[f64], mask: &PointMask, acc: &mut PairwiseAccumulator) {
        if mask.is_empty() {
            // count is zero on every remaining cell: only the V^p term survives
            let rest = self.dims.len() - level;
            acc.push(moments[self.p as usize] * self.tail_volume.powi(rest as i32));
            return;
        }
        if level == self.dims.len() {
            let count = mask.weighted_sum(self.weights);
            let p = self.p as usize;
            let mut terms = Vec::with_capacity(p + 1);
            let mut c_pow = 1.0;
            // i runs from p down to 0 so C^{p-i} is built incrementally
            for i in (0..=p).rev() {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                terms.push(sign * self.binom[i] * c_pow * moments[i]);
                c_pow *= count;
            }
            acc.push(pairwise_sum(&terms));
            return;
        }
        let mut next = vec![0.0; moments.len()];
        let mut sub = mask.clone();
        for cell in &self.dims[level] {
            for ((o, m), c) in next.iter_mut().zip(moments).zip(&cell.moments) {
                *o = m * c;
            }
            mask.and_into(&cell.mask, &mut sub);
            self.descend(level + 1, &next, &sub, acc);
        }
    }
}

/// Exact extreme `L_p` discrepancy for even `p` by integrating the binomial
/// expansion of `(C - V)^p` cell by cell.
pub fn extreme_lp_exact_even_p(
    ps: &PointSet,
    ws: &WeightSet,
    p: u32,
    budget: f64,
) -> Result<DiscrepancyResult> {
    check_pair(ps, ws)?;
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "exact cell integration needs an even p >= 2, got {p}"
        )));
    }
    let cells = CellDecomposition::new(ps);
    let needed = cells.cell_count();
    if needed > budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget,
            advice: "use the Monte Carlo engine",
        });
    }
    let dims: Vec<Vec<DimCell>> = (0..ps.dim()).map(|j| cells.dim_cells(ps, j, p)).collect();
    let binom = binomials(p);
    let walk = Walk {
        dims: &dims,
        weights: ws.as_slice(),
        binom: &binom,
        p,
        tail_volume: 1.0 / f64::from((p + 1) * (p + 2)),
    };

    let full = PointMask::full(ps.len());
    let partials: Vec<f64> = dims[0]
        .par_iter()
        .map(|cell| {
            let mut acc = PairwiseAccumulator::new();
            let mut mask = full.clone();
            full.and_into(&cell.mask, &mut mask);
            walk.descend(1, &cell.moments, &mask, &mut acc);
            acc.total()
        })
        .collect();
    let integral = pairwise_sum(&partials);
    if integral < -1e-12 {
        return Err(Error::Internal(format!(
            "integral of |Δ|^{p} evaluated to {integral}"
        )));
    }
    let value = integral.max(0.0).powf(1.0 / f64::from(p));
    Ok(DiscrepancyResult::exact(f64::from(p), ps, Method::EvenPExact, value))
}
