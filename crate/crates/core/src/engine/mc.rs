use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{check_pair, local_discrepancy_raw, sample_box_into, DiscrepancyResult, Method, PointSet, WeightSet};
use crate::rng::{chunks, ChunkStream};
use crate::sum::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed }
    }
}

/// Sample mean of an integrand under the uniform box sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSummary {
    pub mean: f64,
    /// Standard error of `mean`.
    pub stderr: f64,
    pub samples: u64,
}

impl McSummary {
    /// Estimate of the integral over the box domain, which has mass `2^-d`.
    pub fn integral(&self, d: usize) -> (f64, f64) {
        let scale = 0.5f64.powi(d as i32);
        (scale * self.mean, scale * self.stderr)
    }
}

/// Averages `f(a, b)` over `cfg.samples` boxes drawn from the chunked seed
/// streams. Bit-identical for any rayon pool size.
pub fn mc_integral<F>(d: usize, cfg: McConfig, f: F) -> McSummary
where
    F: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    let parts: Vec<(f64, f64)> = chunks(cfg.samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(chunk, len)| {
            let mut stream = ChunkStream::new(cfg.seed, chunk);
            let mut a = vec![0.0; d];
            let mut b = vec![0.0; d];
            let mut vals = Vec::with_capacity(len as usize);
            for _ in 0..len {
                sample_box_into(&mut stream, &mut a, &mut b);
                vals.push(f(&a, &b));
            }
            let s = pairwise_sum(&vals);
            for v in vals.iter_mut() {
                *v *= *v;
            }
            (s, pairwise_sum(&vals))
        })
        .collect();
    let sums: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let squares: Vec<f64> = parts.iter().map(|p| p.1).collect();
    let n = cfg.samples as f64;
    let mean = pairwise_sum(&sums) / n;
    let var = if cfg.samples > 1 {
        ((pairwise_sum(&squares) - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    McSummary {
        mean,
        stderr: (var / n).sqrt(),
        samples: cfg.samples,
    }
}

/// Monte Carlo estimate `(2^-d mean |Δ|^p)^{1/p}` with a delta-method
/// standard error.
pub fn extreme_lp_mc(ps: &PointSet, ws: &WeightSet, p: f64, cfg: McConfig) -> Result<DiscrepancyResult> {
    check_pair(ps, ws)?;
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::invalid(format!("Monte Carlo needs a finite p >= 1, got {p}")));
    }
    if cfg.samples < 100 {
        return Err(Error::invalid("Monte Carlo needs at least 100 samples"));
    }
    let weights = ws.as_slice();
    let summary = mc_integral(ps.dim(), cfg, |a, b| {
        let delta = local_discrepancy_raw(ps, weights, a, b).abs();
        if p == 2.0 {
            delta * delta
        } else {
            delta.powf(p)
        }
    });
    let (integral, se_integral) = summary.integral(ps.dim());
    let value = integral.powf(1.0 / p);
    let (stderr, raw) = if value > 0.0 {
        (se_integral * value.powf(1.0 - p) / p, false)
    } else if p == 1.0 {
        (se_integral, false)
    } else {
        (se_integral, true)
    };
    Ok(DiscrepancyResult {
        p,
        d: ps.dim(),
        n: ps.len(),
        method: Method::Mc,
        value,
        stderr: Some(stderr),
        samples: Some(cfg.samples),
        seed: Some(cfg.seed),
        stderr_is_raw: raw,
    })
}

/// Largest `|Δ|` over sampled boxes: a lower bound on the `L_inf` value.
pub fn extreme_linf_lower_mc(ps: &PointSet, ws: &WeightSet, cfg: McConfig) -> Result<DiscrepancyResult> {
    check_pair(ps, ws)?;
    if cfg.samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let d = ps.dim();
    let weights = ws.as_slice();
    let value = chunks(cfg.samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(chunk, len)| {
            let mut stream = ChunkStream::new(cfg.seed, chunk);
            let mut a = vec![0.0; d];
            let mut b = vec![0.0; d];
            let mut best: f64 = 0.0;
            for _ in 0..len {
                sample_box_into(&mut stream, &mut a, &mut b);
                best = best.max(local_discrepancy_raw(ps, weights, &a, &b).abs());
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(DiscrepancyResult {
        p: f64::INFINITY,
        d,
        n: ps.len(),
        method: Method::LinfSampled,
        value,
        stderr: Some(0.0),
        samples: Some(cfg.samples),
        seed: Some(cfg.seed),
        stderr_is_raw: false,
    })
}
