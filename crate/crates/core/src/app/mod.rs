//! Configuration loading and the `schedule`, `simulate` and `verify` commands.

mod commands;
mod config;

pub use commands::{cmd_schedule, cmd_simulate, cmd_verify, CheckResult, ScheduleOutcome, SimulateOutcome, StaggeredProbe, VerifyReport};
pub use config::{ChainSection, Couplings, Experiment, ExperimentConfig, FieldSection, NoiseSection, OutputSection, RunSection, SchemeSection};
