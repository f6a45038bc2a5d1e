//! Seeded Monte Carlo experiments and their artifacts.

mod output;
mod scan;
mod spec;
mod stats;
mod studies;

pub use output::{emit_outputs, records_csv, success_svg, CSV_HEADER};
pub use scan::{in_pool, p_for, scan_threshold, trial_sampler, CellSummary, Outcome, ScanResult, ThresholdEstimate, TrialRecord};
pub use spec::{Axis, BisectionSpec, ExperimentSpec, HostSpec, RationalInput};
pub use stats::{median_with_infinity, Proportion, Z_95};
pub use studies::{counterexample_experiment, prop2_experiment, CounterexampleRow, CoverageRow, CoverageStudy};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "PFACTOR_WORKERS";

/// Worker count from [`WORKERS_ENV`]; `None` when unset or unparsable.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&w| w > 0)
}
