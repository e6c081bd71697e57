//! Parameter sweeps over the coupling and their CSV output.

mod config;
mod run;

pub use config::{validate_config, GGrid, OutputKind, SweepSpec};
pub use run::{equivalence_table, fmt_float, run_sweep, SweepError, SweepOutcome};
