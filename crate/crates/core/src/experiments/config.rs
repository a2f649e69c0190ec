use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::ProcessModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateMode {
    #[serde(rename = "exact-iid")]
    ExactIid,
    #[serde(rename = "exact-markov")]
    ExactMarkov,
    #[serde(rename = "mc")]
    MonteCarlo,
}

impl RateMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateMode::ExactIid => "exact-iid",
            RateMode::ExactMarkov => "exact-markov",
            RateMode::MonteCarlo => "mc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact-iid" => Ok(RateMode::ExactIid),
            "exact-markov" => Ok(RateMode::ExactMarkov),
            "mc" => Ok(RateMode::MonteCarlo),
            other => Err(Error::Config(format!("unknown mode '{other}'"))),
        }
    }
}

/// Evaluation points `x` for `Δ_n` in exact i.i.d. mode: `points` equally
/// spaced values in `[−range_tau·τ, range_tau·τ]`. The omitted tails carry
/// at most `2Φ(−range_tau)` of normal mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGridPolicy {
    pub range_tau: f64,
    pub points: usize,
}

impl Default for XGridPolicy {
    fn default() -> Self {
        XGridPolicy {
            range_tau: 8.0,
            points: 2001,
        }
    }
}

impl XGridPolicy {
    pub fn grid(&self, tau: f64) -> Vec<f64> {
        let half = self.range_tau * tau;
        let k = self.points;
        (0..k).map(|i| -half + 2.0 * half * i as f64 / (k - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateExperimentConfig {
    pub model: ProcessModel,
    pub p: f64,
    pub mode: RateMode,
    pub n_grid: Vec<usize>,
    /// Replicates per `n` (Monte Carlo mode).
    pub replicates: usize,
    pub x_grid: XGridPolicy,
    pub master_seed: u64,
    /// Worker threads; zero uses the global default.
    pub threads: usize,
}

impl RateExperimentConfig {
    pub fn new(model: ProcessModel, p: f64, mode: RateMode, n_grid: Vec<usize>) -> Self {
        RateExperimentConfig {
            model,
            p,
            mode,
            n_grid,
            replicates: 1000,
            x_grid: XGridPolicy::default(),
            master_seed: 0,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::Config(format!("p={} outside (0,1)", self.p)));
        }
        if self.n_grid.len() < 2 {
            return Err(Error::Config("n_grid needs at least two entries".into()));
        }
        if self.n_grid[0] == 0 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_grid must be positive and strictly increasing".into()));
        }
        if self.mode == RateMode::MonteCarlo && self.replicates < 100 {
            return Err(Error::Config(format!(
                "Monte Carlo mode needs at least 100 replicates, got {}",
                self.replicates
            )));
        }
        if self.x_grid.points < 2 || !(self.x_grid.range_tau > 0.0) {
            return Err(Error::Config(
                "x grid needs at least two points and a positive range".into(),
            ));
        }
        Ok(())
    }
}

/// Runs `f` on a pool of `threads` workers (zero: global pool).
pub(crate) fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}
