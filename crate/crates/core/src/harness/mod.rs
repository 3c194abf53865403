//! Monte Carlo trials over random generating sets, Haar-proxy lattice
//! samples, and the experiments built on them.

mod config;
mod experiments;
mod sampling;
mod stats;
mod trials;

pub use config::{Config, Source};
pub use experiments::{
    compare_experiment, compare_samples, filtration_scaling_experiment, write_cdf_tsv, CompareReport, FiltrationRow,
    FiltrationTable, SampleSummary,
};
pub use sampling::{rank_warning, sample_generating_set, trial_rng, SamplingMode};
pub use stats::{ks_distance, EmpiricalDistribution, REPORT_QUANTILES};
pub use trials::{
    read_records, rescaling, run_trial, run_trials, summarize, write_record, write_summary_csv, x_samples,
    BatchSummary, TrialRecord,
};
