//! Benchmarks for the meter identifier live in `benches/`.
