//! Scenario configuration, sweeps and the verification suite behind the
//! `phasefluct` binary.

pub mod config;
pub mod record;
pub mod run;
pub mod taylor;
pub mod verify;

pub use config::{ConfigError, Overrides, RawConfig, SweepConfig, TimeGrid, TimeScale, Tolerances, VerifyConfig};
pub use record::{write_csv, SweepRecord, COLUMNS};
pub use run::{run_point, run_sweep, sweep_points, thread_pool, PointInput, PointSettings, THREADS_ENV};
pub use taylor::{taylor_check, TaylorReport};
pub use verify::{verify, Check, VerificationReport};
