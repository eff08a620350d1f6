//! Counter-based random streams.
//!
//! A run is identified by a seed; its samples are split into fixed chunks of
//! [`CHUNK_SIZE`] and chunk `c` always draws from ChaCha stream `c` of that
//! seed. Results therefore do not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of samples drawn from one stream.
pub const CHUNK_SIZE: u64 = 1 << 16;

/// Source of uniform variates on `[0, 1)`.
pub trait UnitStream {
    fn next_unit(&mut self) -> f64;
}

/// The stream assigned to one chunk of a seeded run.
#[derive(Debug, Clone)]
pub struct ChunkStream {
    rng: ChaCha8Rng,
}

impl ChunkStream {
    pub fn new(seed: u64, chunk: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        Self { rng }
    }
}

impl UnitStream for ChunkStream {
    #[inline]
    fn next_unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl<F: FnMut() -> f64> UnitStream for F {
    fn next_unit(&mut self) -> f64 {
        self()
    }
}

/// Splits `total` samples into `(chunk_id, len)` pieces.
pub fn chunks(total: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    let n_chunks = total.div_ceil(CHUNK_SIZE);
    (0..n_chunks).map(move |c| {
        let start = c * CHUNK_SIZE;
        (c, CHUNK_SIZE.min(total - start))
    })
}
