//! Criterion benchmarks for the zeta-cycles pipeline; see `benches/pipeline.rs`.
