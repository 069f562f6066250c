//! Benchmarks for bosent-core.
