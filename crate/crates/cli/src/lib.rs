//! Library side of the `invsum` command: sweep planning and report output.

pub mod error;
pub mod report;
pub mod sweep;

pub use error::CliError;
pub use report::{emit_report, emit_summary, parse_json, Format};
pub use sweep::{run_cell, run_sweep, Cell, SweepConfig, SweepOutcome};
