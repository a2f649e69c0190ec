//! Empirical coverage of plug-in confidence intervals for `ξ_p`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::with_pool;
use crate::error::{Error, Result};
use crate::estimators::{estimate_quantile_ci, EstimateOptions};
use crate::numeric::CompensatedSum;
use crate::processes::{draw, model_facts, ProcessModel, TimeSeries};
use crate::rng::{replicate_key, stream};

/// Largest tolerated fraction of replicates whose plug-in estimate fails.
pub const MAX_FAILURE_RATE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageConfig {
    pub model: ProcessModel,
    pub p: f64,
    pub level: f64,
    pub n: usize,
    pub replicates: usize,
    pub master_seed: u64,
    pub threads: usize,
    pub options: EstimateOptions,
}

impl CoverageConfig {
    pub fn new(model: ProcessModel, p: f64, level: f64, n: usize, replicates: usize) -> Self {
        CoverageConfig {
            model,
            p,
            level,
            n,
            replicates,
            master_seed: 0,
            threads: 0,
            options: EstimateOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::Config(format!("p={} outside (0,1)", self.p)));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Config(format!("level={} outside (0,1)", self.level)));
        }
        if self.replicates == 0 {
            return Err(Error::Config("coverage needs at least one replicate".into()));
        }
        if self.n < 16 {
            return Err(Error::Config(format!(
                "n={} is below the plug-in minimum of 16",
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub model_id: String,
    pub p: f64,
    pub level: f64,
    pub n: usize,
    pub r: usize,
    /// Replicates whose interval contains `ξ_p`.
    pub covered: usize,
    /// `covered / (r − failures)`.
    pub coverage: f64,
    /// Binomial standard error `√(c(1−c)/m)` over the `m` usable replicates.
    pub std_error: f64,
    pub width_mean: f64,
    pub width_median: f64,
    /// Replicates where the plug-in estimate was unavailable.
    pub failures: usize,
    pub master_seed: u64,
}

/// Replicate `i` draws from `stream(replicate_key(master_seed, n), i)`.
pub fn run_coverage(cfg: &CoverageConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let xi = model_facts(&cfg.model, cfg.p)?.xi_p;
    let key = replicate_key(cfg.master_seed, cfg.n as u64);
    let outcomes: Vec<Option<(bool, f64)>> = with_pool(cfg.threads, || {
        (0..cfg.replicates as u64)
            .into_par_iter()
            .map(|i| -> Result<Option<(bool, f64)>> {
                let mut rng = stream(key, i);
                let sample = TimeSeries::from_values(draw(&cfg.model, cfg.n, &mut rng))?;
                match estimate_quantile_ci(&sample, cfg.p, cfg.level, &cfg.options) {
                    Ok(est) => Ok(Some((est.covers(xi), est.ci_hi - est.ci_lo))),
                    Err(Error::PlugIn { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let failures = outcomes.iter().filter(|o| o.is_none()).count();
    let rate = failures as f64 / cfg.replicates as f64;
    if rate > MAX_FAILURE_RATE {
        return Err(Error::Precondition(format!(
            "plug-in estimate failed on {failures} of {} replicates ({:.1}%, limit {:.0}%)",
            cfg.replicates,
            100.0 * rate,
            100.0 * MAX_FAILURE_RATE
        )));
    }
    let ok: Vec<(bool, f64)> = outcomes.into_iter().flatten().collect();
    let m = ok.len() as f64;
    let covered = ok.iter().filter(|o| o.0).count();
    let coverage = covered as f64 / m;
    let mut widths: Vec<f64> = ok.iter().map(|o| o.1).collect();
    let width_mean = widths.iter().copied().collect::<CompensatedSum>().value() / m;
    widths.sort_by(f64::total_cmp);
    let mid = widths.len() / 2;
    let width_median = if widths.len() % 2 == 1 {
        widths[mid]
    } else {
        0.5 * (widths[mid - 1] + widths[mid])
    };
    Ok(CoverageReport {
        model_id: cfg.model.id().to_string(),
        p: cfg.p,
        level: cfg.level,
        n: cfg.n,
        r: cfg.replicates,
        covered,
        coverage,
        std_error: (coverage * (1.0 - coverage) / m).sqrt(),
        width_mean,
        width_median,
        failures,
        master_seed: cfg.master_seed,
    })
}
