use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{check_pair, DiscrepancyResult, Method, PointSet, WeightSet};
use crate::sum::pairwise_sum;

/// Closed-form extreme `L_2` discrepancy from the kernel
/// `K(x,y) = prod_i (min(x_i,y_i) - x_i y_i)`:
///
/// `L_2^2 = sum_{j,k} c_j c_k K(x_j,x_k) - 2 sum_k c_k prod_i g(x_ki) + 12^-d`
/// with `g(x) = (1 - x^3 - (1-x)^3) / 6`.
pub fn extreme_l2_exact(ps: &PointSet, ws: &WeightSet) -> Result<DiscrepancyResult> {
    check_pair(ps, ws)?;
    let squared = l2_squared(ps, ws.as_slice());
    if squared < -1e-12 {
        return Err(Error::Internal(format!(
            "squared L2 discrepancy evaluated to {squared}"
        )));
    }
    let value = squared.max(0.0).sqrt();
    Ok(DiscrepancyResult::exact(2.0, ps, Method::L2Exact, value))
}

pub(crate) fn l2_squared(ps: &PointSet, c: &[f64]) -> f64 {
    let n = ps.len();
    let d = ps.dim();

    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let xj = ps.point(j);
            let terms: Vec<f64> = (0..n)
                .map(|k| {
                    let xk = ps.point(k);
                    let kern: f64 = xj
                        .iter()
                        .zip(xk)
                        .map(|(&s, &t)| s.min(t) - s * t)
                        .product();
                    c[k] * kern
                })
                .collect();
            c[j] * pairwise_sum(&terms)
        })
        .collect();
    let double_sum = pairwise_sum(&rows);

    let cross: Vec<f64> = ps
        .points()
        .zip(c)
        .map(|(x, &ck)| ck * x.iter().map(|&t| moment_one(t)).product::<f64>())
        .collect();
    let cross = pairwise_sum(&cross);

    double_sum - 2.0 * cross + 12f64.powi(-(d as i32))
}

/// `int_{a <= x < b} (b - a) d(a,b)` over the one-dimensional domain.
#[inline]
fn moment_one(x: f64) -> f64 {
    let y = 1.0 - x;
    (1.0 - x * x * x - y * y * y) / 6.0
}
