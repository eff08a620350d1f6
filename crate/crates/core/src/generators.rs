//! Point-set constructions used for experiments and tests.

use crate::error::{Error, Result};
use crate::model::PointSet;
use crate::rng::{chunks, ChunkStream, UnitStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Random,
    Grid,
    VdcHammersley,
    Lattice,
    Centered,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub d: usize,
    pub seed: Option<u64>,
    pub generating_vector: Option<Vec<u64>>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, d: usize) -> Self {
        Self {
            kind,
            n,
            d,
            seed: None,
            generating_vector: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_generating_vector(mut self, g: Vec<u64>) -> Self {
        self.generating_vector = Some(g);
        self
    }
}

/// Radical inverse of `k` in base `b`.
pub fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut x = 0.0;
    while k > 0 {
        x += (k % base) as f64 * scale;
        k /= base;
        scale *= inv;
    }
    x
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut c = 2u64;
    while primes.len() < count {
        if primes.iter().take_while(|&&q| q * q <= c).all(|&q| !c.is_multiple_of(q)) {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

/// Builds the point set described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<PointSet> {
    let GeneratorSpec { kind, n, d, .. } = *spec;
    if n == 0 || d == 0 {
        return Err(Error::invalid("generators need n >= 1 and d >= 1"));
    }
    let coords = match kind {
        GeneratorKind::Random => {
            let seed = spec
                .seed
                .ok_or_else(|| Error::invalid("RANDOM point sets require a seed"))?;
            let total = (n * d) as u64;
            let mut out = Vec::with_capacity(n * d);
            for (chunk, len) in chunks(total) {
                let mut s = ChunkStream::new(seed, chunk);
                out.extend((0..len).map(|_| s.next_unit()));
            }
            out
        }
        GeneratorKind::Grid => {
            let m = (n as f64).powf(1.0 / d as f64).round() as usize;
            let m = [m.saturating_sub(1), m, m + 1]
                .into_iter()
                .find(|&m| m > 0 && m.checked_pow(d as u32) == Some(n))
                .ok_or_else(|| Error::invalid(format!("GRID needs n to be a perfect {d}-th power, got {n}")))?;
            let mut out = Vec::with_capacity(n * d);
            for idx in 0..n {
                let mut rem = idx;
                let mut row = vec![0.0; d];
                for slot in row.iter_mut().rev() {
                    *slot = ((rem % m) as f64 + 0.5) / m as f64;
                    rem /= m;
                }
                out.extend(row);
            }
            out
        }
        GeneratorKind::VdcHammersley => {
            let primes = first_primes(d.saturating_sub(1).max(1));
            let mut out = Vec::with_capacity(n * d);
            for k in 0..n as u64 {
                if d == 1 {
                    out.push(radical_inverse(k, 2));
                } else {
                    out.push(k as f64 / n as f64);
                    out.extend(primes.iter().map(|&b| radical_inverse(k, b)));
                }
            }
            out
        }
        GeneratorKind::Lattice => {
            let g = spec
                .generating_vector
                .as_ref()
                .ok_or_else(|| Error::invalid("LATTICE requires a generating vector"))?;
            if g.len() != d {
                return Err(Error::invalid(format!(
                    "generating vector has {} components for dimension {d}",
                    g.len()
                )));
            }
            if let Some(bad) = g.iter().find(|&&gj| gj < 1 || gj >= n as u64) {
                return Err(Error::invalid(format!(
                    "generating vector component {bad} not in [1, {}]",
                    n as i64 - 1
                )));
            }
            let nn = n as u64;
            let mut out = Vec::with_capacity(n * d);
            for k in 0..nn {
                out.extend(g.iter().map(|&gj| ((k as u128 * gj as u128) % nn as u128) as f64 / n as f64));
            }
            out
        }
        GeneratorKind::Centered => {
            if n != 1 {
                return Err(Error::invalid("CENTERED is defined only for n = 1"));
            }
            vec![0.5; d]
        }
    };
    PointSet::new(d, coords)
}
