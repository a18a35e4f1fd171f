//! Criterion benchmarks for the analysis and simulation hot paths live in `benches/`.
