//! Criterion benchmarks for `irrdiv-core` live under `benches/`.
