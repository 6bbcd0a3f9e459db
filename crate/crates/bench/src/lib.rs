//! Criterion benchmarks for `rps-core`; see `benches/rps.rs`.
