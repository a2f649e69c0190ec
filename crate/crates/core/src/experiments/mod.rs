//! Rate and coverage experiments, condition verdicts and report output.

pub mod conditions;
pub mod config;
pub mod coverage;
pub mod rate;
pub mod report;
pub mod slope;

pub use conditions::{check_conditions, dobrushin_verdict, ConditionReport, Status, Verdict};
pub use config::{RateExperimentConfig, RateMode, XGridPolicy};
pub use coverage::{run_coverage, CoverageConfig, CoverageReport, MAX_FAILURE_RATE};
pub use rate::{
    empirical_ks_normal, replicate_statistics, run_rate, run_rate_exact_iid, run_rate_exact_markov,
    run_rate_monte_carlo, RatePoint, RateReport,
};
pub use slope::{fit_loglog_slope, SlopeFit};
