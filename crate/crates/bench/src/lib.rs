//! Criterion benchmarks for `secvar-core`; see `benches/`.
