//! Extreme `L_p` discrepancy engines.
//!
//! | method | p | cost |
//! |---|---|---|
//! | [`extreme_l2_exact`] | 2 | `O(n^2 d)` |
//! | [`extreme_lp_exact_even_p`] | even | number of grid cells |
//! | [`extreme_linf_exact`] | inf | number of grid boxes |
//! | [`extreme_lp_mc`] | any finite | samples |
//! | [`extreme_linf_lower_mc`] | inf (lower bound) | samples |

mod cells;
mod l2;
mod linf;
mod mc;

pub use cells::{extreme_lp_exact_even_p, CellDecomposition};
pub use l2::extreme_l2_exact;
pub use linf::extreme_linf_exact;
pub use mc::{extreme_linf_lower_mc, extreme_lp_mc, McConfig, McSummary, mc_integral};

/// Default limit on exact cell evaluations for even `p`.
pub const DEFAULT_CELL_BUDGET: f64 = 1e7;
/// Default limit on grid box evaluations for `p = inf`.
pub const DEFAULT_BOX_BUDGET: f64 = 1e8;

/// Sorted, deduplicated breakpoints `{0, 1} ∪ {x_kj}` of one coordinate.
pub(crate) fn breakpoints(ps: &crate::model::PointSet, j: usize) -> Vec<f64> {
    let mut g: Vec<f64> = ps.points().map(|x| x[j]).collect();
    g.push(0.0);
    g.push(1.0);
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Fixed-width bitset over point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PointMask(Vec<u64>);

impl PointMask {
    pub(crate) fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        Self(words)
    }

    pub(crate) fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for k in (0..n).filter(|&k| f(k)) {
            words[k / 64] |= 1 << (k % 64);
        }
        Self(words)
    }

    pub(crate) fn and_into(&self, other: &Self, out: &mut Self) {
        for ((o, a), b) in out.0.iter_mut().zip(&self.0).zip(&other.0) {
            *o = a & b;
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// Sum of `weights[k]` over set bits, in index order.
    pub(crate) fn weighted_sum(&self, weights: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, &word) in self.0.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                s += weights[i * 64 + bit];
                w &= w - 1;
            }
        }
        s
    }
}
