//! Process models and their JSON model-spec representation.
//!
//! Schema (version 1). A model file is a single JSON object whose `"model"`
//! field selects the variant; `"version"` is optional and must be `1` when
//! present. Unknown fields are rejected.
//!
//! ```json
//! {"model": "iid", "marginal": "uniform"}
//! {"model": "gaussian_ma", "theta": [1.0, 1.0], "marginal": "std_normal"}
//! {"model": "doeblin_copula", "marginal": "std_normal", "retain": 0.6, "latent_corr": 0.7}
//! {"model": "finite_markov", "transition": [[0.9, 0.1], [0.1, 0.9]], "values": [0.0, 1.0]}
//! ```
//!
//! `marginal` is `"std_normal"`, `"uniform"` or `{"symmetric_pareto": {"nu": 3.0}}`.
//! `theta` is rescaled to unit sum of squares on load.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::marginal::MarginalLaw;
use super::markov::FiniteMarkov;
use crate::error::{domain, Error, Result};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
enum ModelSpec {
    Iid {
        marginal: MarginalLaw,
    },
    GaussianMa {
        theta: Vec<f64>,
        marginal: MarginalLaw,
    },
    DoeblinCopula {
        marginal: MarginalLaw,
        retain: f64,
        latent_corr: f64,
    },
    FiniteMarkov {
        transition: Vec<Vec<f64>>,
        values: Vec<f64>,
    },
}

/// A validated generative model.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessModel {
    Iid {
        marginal: MarginalLaw,
    },
    /// Latent `Y_t = Σ_j θ_j ε_{t−j}` with `Σθ² = 1`, observed through
    /// `X = F⁻¹(Φ(Y))`; `m`-dependent with `m = θ.len() − 1`.
    GaussianMa {
        theta: Vec<f64>,
        marginal: MarginalLaw,
    },
    /// Regenerating Gaussian-copula chain: with probability `1 − retain`
    /// the latent state is redrawn from `N(0,1)`, otherwise it takes an
    /// AR(1) step with coefficient `latent_corr`.
    DoeblinCopula {
        marginal: MarginalLaw,
        retain: f64,
        latent_corr: f64,
    },
    FiniteMarkov(FiniteMarkov),
}

impl ProcessModel {
    pub fn iid(marginal: MarginalLaw) -> Result<Self> {
        marginal.validate()?;
        Ok(ProcessModel::Iid { marginal })
    }

    pub fn gaussian_ma(theta: Vec<f64>, marginal: MarginalLaw) -> Result<Self> {
        marginal.validate()?;
        if theta.is_empty() || theta.iter().any(|t| !t.is_finite()) {
            return domain("gaussian_ma: theta must be a non-empty list of finite reals");
        }
        let norm = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm == 0.0 {
            return domain("gaussian_ma: theta must not be identically zero");
        }
        // already-normalized input is kept bit-for-bit so that specs round trip
        let theta = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            theta
        } else {
            theta.iter().map(|t| t / norm).collect()
        };
        Ok(ProcessModel::GaussianMa { theta, marginal })
    }

    pub fn doeblin_copula(marginal: MarginalLaw, retain: f64, latent_corr: f64) -> Result<Self> {
        marginal.validate()?;
        if !(0.0..1.0).contains(&retain) {
            return domain(format!("doeblin_copula: retain={retain} outside [0,1)"));
        }
        if !(latent_corr > -1.0 && latent_corr < 1.0) {
            return domain(format!("doeblin_copula: latent_corr={latent_corr} outside (-1,1)"));
        }
        Ok(ProcessModel::DoeblinCopula {
            marginal,
            retain,
            latent_corr,
        })
    }

    pub fn finite_markov(transition: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        Ok(ProcessModel::FiniteMarkov(FiniteMarkov::new(transition, values)?))
    }

    pub fn id(&self) -> &'static str {
        match self {
            ProcessModel::Iid { .. } => "iid",
            ProcessModel::GaussianMa { .. } => "gaussian_ma",
            ProcessModel::DoeblinCopula { .. } => "doeblin_copula",
            ProcessModel::FiniteMarkov(_) => "finite_markov",
        }
    }

    pub fn marginal(&self) -> Option<MarginalLaw> {
        match self {
            ProcessModel::Iid { marginal }
            | ProcessModel::GaussianMa { marginal, .. }
            | ProcessModel::DoeblinCopula { marginal, .. } => Some(*marginal),
            ProcessModel::FiniteMarkov(_) => None,
        }
    }

    pub fn as_chain(&self) -> Option<&FiniteMarkov> {
        match self {
            ProcessModel::FiniteMarkov(c) => Some(c),
            _ => None,
        }
    }

    /// Parses a model-spec JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("model spec: {e}")))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::Config("model spec must be a JSON object".into()))?;
        if let Some(v) = obj.remove("version") {
            if v.as_u64() != Some(SCHEMA_VERSION) {
                return Err(Error::Config(format!(
                    "model spec: unsupported version {v}, expected {SCHEMA_VERSION}"
                )));
            }
        }
        let spec: ModelSpec = serde_json::from_value(value).map_err(|e| Error::Config(format!("model spec: {e}")))?;
        Self::from_spec(spec).map_err(|e| match e {
            Error::Domain(m) => Error::Config(m),
            other => other,
        })
    }

    fn from_spec(spec: ModelSpec) -> Result<Self> {
        match spec {
            ModelSpec::Iid { marginal } => Self::iid(marginal),
            ModelSpec::GaussianMa { theta, marginal } => Self::gaussian_ma(theta, marginal),
            ModelSpec::DoeblinCopula {
                marginal,
                retain,
                latent_corr,
            } => Self::doeblin_copula(marginal, retain, latent_corr),
            ModelSpec::FiniteMarkov { transition, values } => Self::finite_markov(transition, values),
        }
    }

    fn to_spec(&self) -> ModelSpec {
        match self.clone() {
            ProcessModel::Iid { marginal } => ModelSpec::Iid { marginal },
            ProcessModel::GaussianMa { theta, marginal } => ModelSpec::GaussianMa { theta, marginal },
            ProcessModel::DoeblinCopula {
                marginal,
                retain,
                latent_corr,
            } => ModelSpec::DoeblinCopula {
                marginal,
                retain,
                latent_corr,
            },
            ProcessModel::FiniteMarkov(c) => ModelSpec::FiniteMarkov {
                transition: c.transition().to_vec(),
                values: c.values().to_vec(),
            },
        }
    }

    /// Serializes to the versioned model-spec schema.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self.to_spec()).expect("model spec serializes");
        v.as_object_mut()
            .expect("tagged enum is an object")
            .insert("version".into(), SCHEMA_VERSION.into());
        serde_json::to_string(&v).expect("json value serializes")
    }
}

/// A generated sample together with the provenance needed to regenerate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub values: Vec<f64>,
    pub model_id: String,
    pub seed: u64,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Wraps externally supplied observations.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return domain("time series must be non-empty");
        }
        Ok(Self {
            values,
            model_id: "external".into(),
            seed: 0,
        })
    }
}
