//! Monte Carlo experiment engine: sample systems, count their positive
//! zeros with the certified counter, and summarize.
//!
//! Trials draw from per-index child streams, so the records are identical
//! for any thread count and any scheduling order.

use crate::bounds::SystemSpec;
use crate::random_systems::{sample_system, RngStream};
use crate::rootcount::{count_positive_zeros, CountError};
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub count: usize,
    pub certified: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub trials: u64,
    pub certified_trials: u64,
    pub certification_rate: f64,
    /// Mean over certified trials only.
    pub mean_count: f64,
    pub stderr: f64,
    pub max_count: usize,
    pub seed: u64,
}

/// Sample mean and its standard error.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

fn run_one(spec: &SystemSpec, stream: &RngStream, trial: u64, tol: f64) -> TrialRecord {
    let start = Instant::now();
    let system = sample_system(spec, &mut stream.stream(trial));
    let (count, certified) = match count_positive_zeros(&system, tol) {
        Ok(result) => (result.count, result.certified),
        // Span-deficient supports have no zeros with probability one.
        Err(CountError::UnboundedRegion) => (0, true),
        Err(_) => (0, false),
    };
    TrialRecord {
        trial,
        count,
        certified,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs `trials` independent trials; records come back in trial order.
pub fn run_trials(
    spec: &SystemSpec,
    trials: u64,
    seed: u64,
    tol: f64,
    threads: usize,
) -> Vec<TrialRecord> {
    let stream = RngStream::new(seed);
    if threads <= 1 {
        (0..trials)
            .map(|i| run_one(spec, &stream, i, tol))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|i| run_one(spec, &stream, i, tol))
                .collect()
        })
    }
}

pub fn summarize(records: &[TrialRecord], seed: u64) -> ExperimentSummary {
    let certified: Vec<f64> = records
        .iter()
        .filter(|r| r.certified)
        .map(|r| r.count as f64)
        .collect();
    let (mean, se) = mean_stderr(&certified);
    ExperimentSummary {
        trials: records.len() as u64,
        certified_trials: certified.len() as u64,
        certification_rate: if records.is_empty() {
            f64::NAN
        } else {
            certified.len() as f64 / records.len() as f64
        },
        mean_count: mean,
        stderr: se,
        max_count: records
            .iter()
            .filter(|r| r.certified)
            .map(|r| r.count)
            .max()
            .unwrap_or(0),
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{EquationSpec, Exponent};

    fn binomial_spec() -> SystemSpec {
        SystemSpec::new(
            1,
            vec![EquationSpec {
                support: vec![vec![Exponent::from_i64(0)], vec![Exponent::from_i64(1)]],
                variances: vec![1.0, 1.0],
            }],
        )
        .unwrap()
    }

    #[test]
    fn records_identical_across_thread_counts() {
        let spec = binomial_spec();
        let serial = run_trials(&spec, 64, 5, 1e-10, 1);
        let parallel = run_trials(&spec, 64, 5, 1e-10, 4);
        let strip = |rs: &[TrialRecord]| -> Vec<(u64, usize, bool)> {
            rs.iter().map(|r| (r.trial, r.count, r.certified)).collect()
        };
        assert_eq!(strip(&serial), strip(&parallel));
    }

    #[test]
    fn binomial_mean_is_half() {
        let spec = binomial_spec();
        let records = run_trials(&spec, 4000, 11, 1e-10, 1);
        let summary = summarize(&records, 11);
        assert_eq!(summary.certified_trials, 4000);
        assert!((summary.mean_count - 0.5).abs() <= 3.0 * summary.stderr);
        assert_eq!(summary.max_count, 1);
    }

    #[test]
    fn mean_stderr_basics() {
        let (m, se) = mean_stderr(&[1.0, 1.0, 1.0]);
        assert_eq!(m, 1.0);
        assert_eq!(se, 0.0);
        let (m, _) = mean_stderr(&[0.0, 2.0]);
        assert_eq!(m, 1.0);
    }
}
