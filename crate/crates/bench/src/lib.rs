//! Criterion benchmarks for `telehazard`; see `benches/core.rs`.
