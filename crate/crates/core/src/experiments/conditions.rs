//! Per-condition verdicts for a model at a given `p`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracles::c5_probability;
use crate::processes::{dobrushin_coefficient, model_facts, AlphaBound, ProcessModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
    NotApplicable,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Indeterminate => "INDETERMINATE",
            Status::NotApplicable => "N/A",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: String,
    pub status: Status,
    /// Numeric margin where one exists (larger is safer).
    pub margin: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub model_id: String,
    pub p: f64,
    pub verdicts: Vec<Verdict>,
}

impl ConditionReport {
    pub fn get(&self, condition: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.condition == condition)
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Fail)
    }
}

/// Exponent the mixing bound must beat: `α(n) = O(n^{−α₀})` with `α₀ > 12`.
pub const REQUIRED_ALPHA_EXPONENT: f64 = 12.0;

fn verdict(condition: &str, status: Status, margin: Option<f64>, detail: impl Into<String>) -> Verdict {
    Verdict {
        condition: condition.into(),
        status,
        margin,
        detail: detail.into(),
    }
}

/// Contraction check on a raw stochastic matrix. Works on reducible
/// matrices too, which cannot be built into a stationary model.
pub fn dobrushin_verdict(transition: &[Vec<f64>]) -> Result<Verdict> {
    let d = dobrushin_coefficient(transition)?;
    let status = if d < 1.0 { Status::Pass } else { Status::Fail };
    Ok(verdict(
        "dobrushin",
        status,
        Some(1.0 - d),
        format!("Dobrushin coefficient {d}"),
    ))
}

pub fn check_conditions(model: &ProcessModel, p: f64) -> Result<ConditionReport> {
    let facts = model_facts(model, p)?;
    let mut out = Vec::with_capacity(6);

    out.push(match facts.density_at_xi {
        Some(f) => verdict(
            "C.1",
            Status::Pass,
            Some(f),
            format!("continuous marginal, f(ξ_p) = {f:.6e} at ξ_p = {:.6}", facts.xi_p),
        ),
        None if model.as_chain().is_some() => {
            verdict("C.1", Status::Fail, None, "finite-state marginal has no density at ξ_p")
        }
        None => verdict(
            "C.1",
            Status::Fail,
            Some(0.0),
            format!("density vanishes at ξ_p = {}", facts.xi_p),
        ),
    });

    out.push(match facts.alpha_bound {
        AlphaBound::MDependent { m } => verdict(
            "C.2",
            Status::Pass,
            None,
            format!("{m}-dependent: α(n) = 0 for n > {m}, beating any α₀ > {REQUIRED_ALPHA_EXPONENT}"),
        ),
        AlphaBound::Geometric { delta } if delta < 1.0 => verdict(
            "C.2",
            Status::Pass,
            Some(1.0 - delta),
            format!("α(n) ≤ {delta}ⁿ decays faster than n^(−α₀) for any α₀ > {REQUIRED_ALPHA_EXPONENT}"),
        ),
        AlphaBound::Geometric { delta } => verdict(
            "C.2",
            Status::Indeterminate,
            Some(1.0 - delta),
            "no geometric bound from the Dobrushin coefficient",
        ),
    });

    out.push(match model.as_chain() {
        Some(chain) => dobrushin_verdict(chain.transition())?,
        None => verdict(
            "dobrushin",
            Status::NotApplicable,
            None,
            "only defined for finite-state chains",
        ),
    });

    out.push(verdict(
        "C.3",
        Status::Pass,
        Some(0.0),
        "β(n) ≡ 0: the process is a function of its own innovations",
    ));

    out.push(match model {
        ProcessModel::GaussianMa { .. } => verdict(
            "C.4",
            Status::Indeterminate,
            None,
            "moving average is not Markov; no numeric checker for the conditioning approximation",
        ),
        _ => verdict(
            "C.4",
            Status::Pass,
            Some(0.0),
            "Markov property: conditioning on neighbours is exact",
        ),
    });

    out.push(match model {
        ProcessModel::FiniteMarkov(chain) => {
            let r = c5_probability(chain, facts.xi_p);
            let status = if r.g < p { Status::Pass } else { Status::Fail };
            verdict(
                "C.5",
                status,
                Some(p - r.g),
                format!("exact g(ξ_p) = {} (identity error {:.1e})", r.g, r.identity_error()),
            )
        }
        ProcessModel::DoeblinCopula { retain, .. } => verdict(
            "C.5",
            Status::Pass,
            Some(p),
            format!(
                "regeneration keeps G₀ in [{:.4}, {:.4}], so g(ξ_p) = 0",
                (1.0 - retain) * p,
                1.0 - (1.0 - retain) * (1.0 - p)
            ),
        ),
        ProcessModel::Iid { .. } => verdict("C.5", Status::Pass, Some(p), "G₀ ≡ p, so g(ξ_p) = 0"),
        ProcessModel::GaussianMa { .. } => {
            let status = if facts.c5_holds { Status::Pass } else { Status::Fail };
            let margin = if facts.c5_holds { Some(p) } else { Some(0.0) };
            let detail = facts
                .notes
                .iter()
                .find(|n| n.starts_with("C.5"))
                .cloned()
                .unwrap_or_default();
            verdict("C.5", status, margin, detail)
        }
    });

    Ok(ConditionReport {
        model_id: model.id().to_string(),
        p,
        verdicts: out,
    })
}
