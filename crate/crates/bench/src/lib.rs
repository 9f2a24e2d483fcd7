//! Benchmarks for the estimation pipeline live in `benches/`.
