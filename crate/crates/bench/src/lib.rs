//! Criterion benchmarks for `singlet-core`; see `benches/`.
