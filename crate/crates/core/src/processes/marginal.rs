use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::{phi_unchecked, quantile_unchecked, std_normal_pdf, upper_tail};

/// Continuous stationary marginal `F` of the observed series.
///
/// `SymmetricPareto { nu }` has distribution function
/// `F(x) = ½(1 − x)^{−ν}` for `x < 0` and `1 − ½(1 + x)^{−ν}` for `x ≥ 0`,
/// a symmetric law with polynomial tails of index `ν` and an explicit
/// quantile function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalLaw {
    StdNormal,
    Uniform,
    SymmetricPareto { nu: f64 },
}

impl MarginalLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MarginalLaw::SymmetricPareto { nu } if !(nu > 0.0 && nu.is_finite()) => {
                domain(format!("symmetric_pareto: tail index nu={nu} must be positive"))
            }
            _ => Ok(()),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            MarginalLaw::StdNormal => phi_unchecked(x),
            MarginalLaw::Uniform => x.clamp(0.0, 1.0),
            MarginalLaw::SymmetricPareto { nu } => {
                if x < 0.0 {
                    0.5 * (1.0 - x).powf(-nu)
                } else {
                    1.0 - 0.5 * (1.0 + x).powf(-nu)
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            MarginalLaw::StdNormal => std_normal_pdf(x),
            MarginalLaw::Uniform => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            MarginalLaw::SymmetricPareto { nu } => 0.5 * nu * (1.0 + x.abs()).powf(-nu - 1.0),
        }
    }

    /// `F⁻¹(p)` for `p ∈ (0,1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("marginal quantile: p={p} outside (0,1)"));
        }
        Ok(match *self {
            MarginalLaw::StdNormal => quantile_unchecked(p),
            MarginalLaw::Uniform => p,
            MarginalLaw::SymmetricPareto { nu } => {
                if p < 0.5 {
                    1.0 - (2.0 * p).powf(-1.0 / nu)
                } else {
                    (2.0 * (1.0 - p)).powf(-1.0 / nu) - 1.0
                }
            }
        })
    }

    /// `F⁻¹(Φ(z))`, evaluated without passing through `Φ(z)` near one.
    pub fn from_latent(&self, z: f64) -> f64 {
        match *self {
            MarginalLaw::StdNormal => z,
            MarginalLaw::Uniform => phi_unchecked(z),
            MarginalLaw::SymmetricPareto { nu } => {
                if z < 0.0 {
                    1.0 - (2.0 * phi_unchecked(z)).powf(-1.0 / nu)
                } else {
                    (2.0 * upper_tail(z)).powf(-1.0 / nu) - 1.0
                }
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(self, MarginalLaw::Uniform)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MarginalLaw::StdNormal => "std_normal",
            MarginalLaw::Uniform => "uniform",
            MarginalLaw::SymmetricPareto { .. } => "symmetric_pareto",
        }
    }
}
