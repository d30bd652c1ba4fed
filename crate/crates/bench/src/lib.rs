//! Criterion benchmarks for reprokit; see `benches/`.
