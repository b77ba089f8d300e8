//! Benchmark-only crate; see `benches/bilinear.rs`.
