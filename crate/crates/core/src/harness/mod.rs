//! Experiment plumbing: configs, runs, traces, sweeps and plots.

pub mod config;
pub mod plot;
pub mod run;
pub mod sweep;
pub mod trace;

use std::path::{Path, PathBuf};

pub use config::{table_defaults, Algorithm, Eval, ExperimentConfig, ResolvedConfig};
pub use run::{run, run_on, RunRecord};
pub use sweep::{best_per_game, sweep, Grid, SweepOutcome};
pub use trace::{parse_csv, read_csv, write_csv, TraceRow, TraceWriter, CSV_HEADER};

/// Environment variable naming the root directory for relative output paths.
pub const OUT_DIR_ENV: &str = "RTREGRET_OUT_DIR";

/// Joins a relative `path` onto `root` when one is given.
pub fn output_path(root: Option<&Path>, path: &Path) -> PathBuf {
    match root {
        Some(root) if path.is_relative() => root.join(path),
        _ => path.to_path_buf(),
    }
}
