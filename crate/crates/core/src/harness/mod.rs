//! Scenario runner: wires scene, guide events, policy, scan plan,
//! reflection events and depth together per scan period, plus the analytic
//! sweeps and the three-policy comparison.

mod compare;
mod config;
mod runner;
mod sweep;

pub use compare::{compare_sampling, comparison_policies, CompareRow, COMPARE_FILE};
pub use config::{FirstPeriod, MetricsConfig, Overrides, Scenario};
pub use runner::{
    plane_scene, run_scenario, write_report_csv, DumpSet, PeriodReport, RunOptions, REPORT_FILE,
};
pub use sweep::{
    frequency_range, sweep_delta_t, sweep_event_rate, write_rows_csv, DeltaTRow, EventRateRow,
    DEFAULT_FREQ_RANGE,
};
