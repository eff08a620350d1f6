//! Point sets, weights, test boxes and the local discrepancy function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::UnitStream;

/// `n` points in `[0,1)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    d: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds a point set from row-major coordinates, checking `0 <= x < 1`.
    pub fn new(d: usize, coords: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !coords.len().is_multiple_of(d) {
            return Err(Error::invalid(format!(
                "{} coordinates do not form rows of dimension {d}",
                coords.len()
            )));
        }
        for (i, &x) in coords.iter().enumerate() {
            if !(0.0..1.0).contains(&x) {
                return Err(Error::invalid(format!(
                    "coordinate {x} of point {} (dimension {}) is outside [0,1)",
                    i / d + 1,
                    i % d + 1
                )));
            }
        }
        Ok(Self { d, coords })
    }

    pub fn empty(d: usize) -> Result<Self> {
        Self::new(d, Vec::new())
    }

    pub fn from_rows(d: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::invalid(format!(
                "row of length {} in a set of dimension {d}",
                r.len()
            )));
        }
        Self::new(d, rows.concat())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, k: usize) -> &[f64] {
        &self.coords[k * self.d..(k + 1) * self.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightKind {
    General,
    Nonneg,
    Qmc,
}

/// Per-point cubature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    weights: Vec<f64>,
    kind: WeightKind,
}

impl WeightSet {
    /// Equal weights `1/n`.
    pub fn qmc(n: usize) -> Self {
        let w = if n == 0 { 0.0 } else { 1.0 / n as f64 };
        Self {
            weights: vec![w; n],
            kind: WeightKind::Qmc,
        }
    }

    pub fn general(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::invalid(format!("weight {w} is not finite")));
        }
        Ok(Self {
            weights,
            kind: WeightKind::General,
        })
    }

    pub fn nonneg(weights: Vec<f64>) -> Result<Self> {
        let mut ws = Self::general(weights)?;
        if let Some(w) = ws.weights.iter().find(|&&w| w < 0.0) {
            return Err(Error::invalid(format!("negative weight {w} in a NONNEG set")));
        }
        ws.kind = WeightKind::Nonneg;
        Ok(ws)
    }

    /// Picks the most specific kind the weights satisfy: QMC if every weight
    /// is exactly `1/n`, NONNEG if none is negative, GENERAL otherwise.
    pub fn classify(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        if n > 0 && weights.iter().all(|&w| w == 1.0 / n as f64) {
            return Ok(Self::qmc(n));
        }
        if weights.iter().all(|&w| w >= 0.0) {
            Self::nonneg(weights)
        } else {
            Self::general(weights)
        }
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn abs_sum(&self) -> f64 {
        crate::sum::pairwise_sum(&self.weights.iter().map(|w| w.abs()).collect::<Vec<_>>())
    }
}

/// A test box `[a, b)` with `a <= b` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxPair {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl BoxPair {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::invalid("box corners must have equal, positive dimension"));
        }
        for (j, (&lo, &hi)) in a.iter().zip(&b).enumerate() {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::invalid(format!(
                    "coordinate {} of box is not 0 <= a <= b <= 1 (a={lo}, b={hi})",
                    j + 1
                )));
            }
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.a
    }

    pub fn upper(&self) -> &[f64] {
        &self.b
    }

    pub fn volume(&self) -> f64 {
        volume(&self.a, &self.b)
    }
}

#[inline]
pub(crate) fn volume(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(lo, hi)| hi - lo).product()
}

/// Weighted count of points in `[a, b)` minus the box volume. No validation.
#[inline]
pub(crate) fn local_discrepancy_raw(ps: &PointSet, weights: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut count = 0.0;
    for (x, &c) in ps.points().zip(weights) {
        let inside = x
            .iter()
            .zip(a.iter().zip(b))
            .all(|(&xj, (&aj, &bj))| aj <= xj && xj < bj);
        if inside {
            count += c;
        }
    }
    count - volume(a, b)
}

pub(crate) fn check_pair(ps: &PointSet, ws: &WeightSet) -> Result<()> {
    if ps.len() != ws.len() {
        return Err(Error::invalid(format!(
            "{} points but {} weights",
            ps.len(),
            ws.len()
        )));
    }
    Ok(())
}

/// Signed local discrepancy `sum_k c_k 1[a <= x_k < b] - vol([a,b))`.
pub fn local_discrepancy(ps: &PointSet, ws: &WeightSet, bx: &BoxPair) -> Result<f64> {
    check_pair(ps, ws)?;
    if bx.dim() != ps.dim() {
        return Err(Error::invalid(format!(
            "box of dimension {} for points of dimension {}",
            bx.dim(),
            ps.dim()
        )));
    }
    Ok(local_discrepancy_raw(ps, ws.as_slice(), &bx.a, &bx.b))
}

/// Fills `a`, `b` with a draw uniform on the box domain: per coordinate two
/// uniforms, sorted.
#[inline]
pub fn sample_box_into<S: UnitStream + ?Sized>(stream: &mut S, a: &mut [f64], b: &mut [f64]) {
    for (lo, hi) in a.iter_mut().zip(b.iter_mut()) {
        let u = stream.next_unit();
        let v = stream.next_unit();
        (*lo, *hi) = if u <= v { (u, v) } else { (v, u) };
    }
}

/// Draws one box uniformly from the domain `{(a,b) : a <= b}` of total
/// Lebesgue measure `2^-d`.
pub fn sample_box_pair<S: UnitStream + ?Sized>(stream: &mut S, d: usize) -> BoxPair {
    let mut a = vec![0.0; d];
    let mut b = vec![0.0; d];
    sample_box_into(stream, &mut a, &mut b);
    BoxPair { a, b }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    L2Exact,
    EvenPExact,
    Mc,
    LinfExact,
    LinfSampled,
}

impl Method {
    pub fn is_sampled(self) -> bool {
        matches!(self, Method::Mc | Method::LinfSampled)
    }
}

/// Outcome of a discrepancy computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    #[serde(with = "crate::io::exponent")]
    pub p: f64,
    pub d: usize,
    pub n: usize,
    pub method: Method,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Set when the delta method is undefined (zero estimate) and `stderr`
    /// holds the standard error of the raw integral instead.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub stderr_is_raw: bool,
}

impl DiscrepancyResult {
    pub(crate) fn exact(p: f64, ps: &PointSet, method: Method, value: f64) -> Self {
        Self {
            p,
            d: ps.dim(),
            n: ps.len(),
            method,
            value,
            stderr: None,
            samples: None,
            seed: None,
            stderr_is_raw: false,
        }
    }
}
