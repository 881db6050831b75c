//! Benchmark harness for the truncation engines; see `benches/engines.rs`.
