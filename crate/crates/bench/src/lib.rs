//! Criterion benchmarks for hyperlab-core; see `benches/`.
