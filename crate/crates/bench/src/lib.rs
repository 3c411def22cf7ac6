//! Benchmarks for the tropmirror pipeline live in `benches/`.
