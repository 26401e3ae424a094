//! Criterion benchmarks for the sampling and kernel code live under `benches/`.
