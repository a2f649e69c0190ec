//! Analytic ground truth per model: `ξ_p`, `f(ξ_p)`, `σ²_∞(ξ_p)`, `τ²_∞(p)`
//! and mixing bounds.

use serde::{Deserialize, Serialize};

use super::model::ProcessModel;
use super::spectral::{ma_spectral_density, spectral_density_positivity_check};
use crate::error::{domain, Result};
use crate::numeric::{bivariate_normal_cdf, phi_unchecked, quantile_unchecked, CompensatedSum, MAX_ABS_CORR};
use crate::oracles::{c5_probability, markov_long_run_variance};

/// Largest number of lagged covariance terms summed for `σ²_∞`.
pub const SERIES_CAP: usize = 10_000;
/// Terms below this magnitude end the `σ²_∞` series.
pub const SERIES_TOL: f64 = 1e-14;
/// Grid used for the latent MA spectral density.
pub const SPECTRAL_GRID: usize = 4096;
/// Spectral minima at or below this are treated as zeros.
pub const SPECTRAL_FLOOR: f64 = 1e-12;

/// Upper bound on the strong mixing coefficient `α(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaBound {
    /// `α(n) = 0` for `n > m`.
    MDependent { m: usize },
    /// `α(n) ≤ min(¼, δⁿ)`.
    Geometric { delta: f64 },
}

impl AlphaBound {
    pub fn at(&self, n: usize) -> f64 {
        match *self {
            AlphaBound::MDependent { m } => {
                if n > m {
                    0.0
                } else {
                    0.25
                }
            }
            AlphaBound::Geometric { delta } => 0.25f64.min(delta.powi(n.min(i32::MAX as usize) as i32)),
        }
    }

    /// Whether `α(n) = O(n^{−α₀})` for every `α₀`, in particular some `α₀ > 12`.
    pub fn decays_polynomially(&self) -> bool {
        match *self {
            AlphaBound::MDependent { .. } => true,
            AlphaBound::Geometric { delta } => delta < 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFacts {
    pub p: f64,
    pub xi_p: f64,
    /// `f(ξ_p)`; absent for discrete marginals.
    pub density_at_xi: Option<f64>,
    pub sigma2_inf: f64,
    /// `σ²_∞ / f(ξ_p)²`; absent when the density is.
    pub tau2_inf: Option<f64>,
    pub alpha_bound: AlphaBound,
    /// Coupling coefficient `β(n)`; every model here is driven by its own
    /// innovations, so the coupled copy coincides with the original.
    pub beta_bound: f64,
    pub c1_holds: bool,
    pub c5_holds: bool,
    pub notes: Vec<String>,
}

impl ModelFacts {
    pub fn tau_inf(&self) -> Option<f64> {
        self.tau2_inf.map(f64::sqrt)
    }
}

/// `Φ₂(h, k; ρ)` extended to `|ρ| → 1` by its comonotone limits.
pub(crate) fn bvn_with_limits(h: f64, k: f64, rho: f64) -> f64 {
    if rho > MAX_ABS_CORR {
        phi_unchecked(h.min(k))
    } else if rho < -MAX_ABS_CORR {
        (phi_unchecked(h) + phi_unchecked(k) - 1.0).max(0.0)
    } else {
        bivariate_normal_cdf(h, k, rho).expect("finite arguments")
    }
}

/// Latent autocorrelations `ρ_k = Σ_j θ_j θ_{j+k}`, `k = 1..=m`.
pub fn ma_autocorrelations(theta: &[f64]) -> Vec<f64> {
    (1..theta.len())
        .map(|k| theta.iter().zip(&theta[k..]).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn model_facts(model: &ProcessModel, p: f64) -> Result<ModelFacts> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("model_facts: p={p} outside (0,1)"));
    }
    let mut notes = Vec::new();
    let (xi_p, density, sigma2, alpha, c5) = match model {
        ProcessModel::Iid { marginal } => {
            notes.push("C.5: G₀ ≡ p < 1 for an independent sequence".into());
            let xi = marginal.quantile(p)?;
            (
                xi,
                Some(marginal.pdf(xi)),
                p * (1.0 - p),
                AlphaBound::MDependent { m: 0 },
                true,
            )
        }
        ProcessModel::GaussianMa { theta, marginal } => {
            let xi = marginal.quantile(p)?;
            let z = quantile_unchecked(p);
            let mut acc = CompensatedSum::new();
            acc.add(p * (1.0 - p));
            for rho in ma_autocorrelations(theta) {
                acc.add(2.0 * (bvn_with_limits(z, z, rho) - p * p));
            }
            let spec = spectral_density_positivity_check(ma_spectral_density(theta), SPECTRAL_GRID)?;
            let c5 = spec.min_value > SPECTRAL_FLOOR;
            notes.push(format!(
                "C.5: latent spectral density minimum {:.3e} at λ={:.4}; {}",
                spec.min_value,
                spec.argmin,
                if c5 {
                    "bounded away from zero"
                } else {
                    "vanishes, Y₀ is interpolable"
                }
            ));
            let m = theta.len() - 1;
            (
                xi,
                Some(marginal.pdf(xi)),
                acc.value(),
                AlphaBound::MDependent { m },
                c5,
            )
        }
        ProcessModel::DoeblinCopula {
            marginal,
            retain,
            latent_corr,
        } => {
            let xi = marginal.quantile(p)?;
            let z = quantile_unchecked(p);
            let mut acc = CompensatedSum::new();
            acc.add(p * (1.0 - p));
            let (mut weight, mut corr) = (1.0, 1.0);
            for _ in 0..SERIES_CAP {
                weight *= retain;
                corr *= latent_corr;
                let term = 2.0 * weight * (bvn_with_limits(z, z, corr) - p * p);
                acc.add(term);
                if term.abs() < SERIES_TOL {
                    break;
                }
            }
            notes.push("C.5: regeneration keeps G₀ inside [(1−ρ)p, 1−(1−ρ)(1−p)]".into());
            (
                xi,
                Some(marginal.pdf(xi)),
                acc.value(),
                AlphaBound::Geometric { delta: *retain },
                true,
            )
        }
        ProcessModel::FiniteMarkov(chain) => {
            let xi = chain.quantile(p)?;
            let report = c5_probability(chain, xi);
            notes.push("C.1: discrete marginal has no density at ξ_p".into());
            notes.push(format!("C.5: exact g(ξ_p) = {} against p = {p}", report.g));
            let sigma2 = markov_long_run_variance(chain, xi)?;
            (
                xi,
                None,
                sigma2,
                AlphaBound::Geometric {
                    delta: chain.dobrushin(),
                },
                report.g < p,
            )
        }
    };
    let density = density.filter(|&f| f > 0.0 && f.is_finite());
    let c1_holds = density.is_some();
    if !c1_holds && model.marginal().is_some() {
        notes.push("C.1: density vanishes at ξ_p".into());
    }
    Ok(ModelFacts {
        p,
        xi_p,
        density_at_xi: density,
        sigma2_inf: sigma2,
        tau2_inf: density.map(|f| sigma2 / (f * f)),
        alpha_bound: alpha,
        beta_bound: 0.0,
        c1_holds,
        c5_holds: c5,
        notes,
    })
}
