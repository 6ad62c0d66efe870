//! Benchmarks for `earring-core`; see `benches/`.
