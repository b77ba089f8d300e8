//! Sweep engine, configuration layering and data emission for the
//! detector-pair simulations. The binary `udw` wires these to a CLI.

pub mod config;
pub mod emit;
pub mod plan;
pub mod verify;

pub use config::Config;
pub use emit::{emit, to_csv, to_json, Format};
pub use plan::{preset, run_sweep, run_sweep_serial, Axis, Observable, SweepPlan, SweepRange, SweepRow};
