//! Experiment runner: Monte Carlo campaigns, backend cross-checks, CSV.

pub mod campaign;
mod csv_out;
pub mod curves;
mod run_stats;
pub mod stats;
pub mod verify;

pub use campaign::{run_campaign, run_trials, Campaign, CampaignConfig, Summary};
pub use csv_out::{emit_csv, write_csv, COLUMNS};
pub use curves::{detection_curves, write_curves, CurveRow};
pub use run_stats::RunStats;
pub use verify::{verify_backends, VerifyReport};
