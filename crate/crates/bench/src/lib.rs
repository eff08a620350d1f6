//! Criterion benchmarks for the discrepancy engines; see `benches/`.
