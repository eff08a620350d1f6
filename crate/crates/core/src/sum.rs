//! Pairwise (tree) summation.
//!
//! Every large reduction in the crate goes through these helpers so that the
//! rounding behaviour depends only on the order of the inputs, never on how
//! work was split between threads.

const BLOCK: usize = 32;

/// Sums a slice by recursive halving, with a short sequential base case.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= BLOCK {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Streaming pairwise accumulator.
///
/// Values are summed in blocks; completed blocks are merged like a binary
/// counter, so memory stays logarithmic in the number of pushed values and the
/// result is deterministic for a given push order.
#[derive(Debug, Clone, Default)]
pub struct PairwiseAccumulator {
    block: Vec<f64>,
    // (level, partial sum); levels strictly decrease from bottom to top
    stack: Vec<(u32, f64)>,
}

impl PairwiseAccumulator {
    pub fn new() -> Self {
        Self {
            block: Vec::with_capacity(BLOCK),
            stack: Vec::new(),
        }
    }

    pub fn push(&mut self, value: f64) {
        self.block.push(value);
        if self.block.len() == BLOCK {
            let s = self.block.iter().fold(0.0, |acc, v| acc + v);
            self.block.clear();
            self.push_partial(0, s);
        }
    }

    fn push_partial(&mut self, mut level: u32, mut s: f64) {
        while let Some(&(top_level, top)) = self.stack.last() {
            if top_level != level {
                break;
            }
            self.stack.pop();
            s += top;
            level += 1;
        }
        self.stack.push((level, s));
    }

    pub fn total(&self) -> f64 {
        let tail: f64 = self.block.iter().fold(0.0, |acc, v| acc + v);
        let mut acc = tail;
        for &(_, s) in self.stack.iter().rev() {
            acc += s;
        }
        acc
    }
}

impl Extend<f64> for PairwiseAccumulator {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.push(v);
        }
    }
}
