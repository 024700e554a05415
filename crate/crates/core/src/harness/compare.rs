use std::fs::File;
use std::io::Write;

use serde::Serialize;

use super::config::Scenario;
use super::runner::{run_scenario, PeriodReport, RunOptions};
use super::sweep::write_rows_csv;
use crate::error::{Error, Result};
use crate::sampling_policy::{EventGuidedParams, Policy};

pub const COMPARE_FILE: &str = "compare.csv";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub policy: String,
    /// Mean reflection events per second over all periods.
    pub mean_event_rate: f64,
    /// Mean over periods that produced a plane fit.
    pub mean_plane_rms_m: Option<f64>,
    pub mean_mask_fraction: f64,
    pub failed_periods: usize,
}

impl CompareRow {
    pub fn from_reports(policy: String, reports: &[PeriodReport]) -> Self {
        let n = reports.len().max(1) as f64;
        let rms: Vec<f64> = reports.iter().filter_map(|r| r.plane_rms_m).collect();
        Self {
            policy,
            mean_event_rate: reports.iter().map(|r| r.reflection_event_rate).sum::<f64>() / n,
            mean_plane_rms_m: (!rms.is_empty()).then(|| rms.iter().sum::<f64>() / rms.len() as f64),
            mean_mask_fraction: reports.iter().map(|r| r.mask_fraction).sum::<f64>() / n,
            failed_periods: reports.iter().filter(|r| r.error.is_some()).count(),
        }
    }
}

/// Dense, sparse and event-guided policies derived from the scenario's own.
///
/// The sparse stride and the event-guided background stride are shared: the
/// scenario's value when it sets one, 16 otherwise.
pub fn comparison_policies(policy: &Policy) -> [Policy; 3] {
    let guided = match *policy {
        Policy::EventGuided(p) => p,
        Policy::Sparse { stride, .. } => EventGuidedParams {
            background_stride: stride,
            ..EventGuidedParams::default()
        },
        Policy::Dense {} => EventGuidedParams::default(),
    };
    let sparse = match *policy {
        Policy::Sparse { .. } => *policy,
        _ => Policy::sparse(guided.background_stride),
    };
    [Policy::dense(), sparse, Policy::EventGuided(guided)]
}

/// Runs the scenario once per comparison policy with identical seeds and
/// periods. Each run writes into a subdirectory named after its policy and
/// the summary goes to `compare.csv`.
pub fn compare_sampling(scenario: &Scenario, options: &RunOptions) -> Result<Vec<CompareRow>> {
    let out_dir = options
        .out_dir
        .clone()
        .or_else(|| scenario.output_dir.clone());
    let mut rows = Vec::with_capacity(3);
    for policy in comparison_policies(&scenario.policy) {
        let label = policy.label();
        let run = Scenario {
            policy,
            output_dir: None,
            ..scenario.clone()
        };
        let opts = RunOptions {
            out_dir: out_dir.as_ref().map(|d| d.join(&label)),
            ..options.clone()
        };
        let reports = run_scenario(&run, &opts)?;
        rows.push(CompareRow::from_reports(label, &reports));
    }
    if let Some(dir) = &out_dir {
        let path = dir.join(COMPARE_FILE);
        let mut file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        write_rows_csv(&rows, &mut file)?;
        file.flush().map_err(|e| Error::io(&path, e))?;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_are_shared() {
        let [d, s, g] = comparison_policies(&Policy::sparse(8));
        assert_eq!(d, Policy::dense());
        assert_eq!(s, Policy::sparse(8));
        let Policy::EventGuided(p) = g else { panic!() };
        assert_eq!(p.background_stride, 8);

        let [_, s, _] = comparison_policies(&Policy::dense());
        assert_eq!(s, Policy::sparse(16));
    }
}
