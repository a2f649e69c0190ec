//! Conditional law of `Y₀` given its neighbours for a stationary chain, and
//! the exact quantities built from `G(y) = P(value(Y₀) ≤ y | Y₋₁, Y₁)`.
//!
//! For a Markov chain, conditioning on all other coordinates reduces to the
//! two neighbours, with `P(Y₀ = b | Y₋₁ = a, Y₁ = c) = P_ab P_bc / (P²)_ac`.

use serde::{Deserialize, Serialize};

use crate::numeric::CompensatedSum;
use crate::processes::FiniteMarkov;
use crate::theory::psi_modulus;

/// Conditional pmf of `Y₀` for one neighbour pair `(Y₋₁, Y₁) = (left, right)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairLaw {
    pub left: usize,
    pub right: usize,
    /// `P(Y₋₁ = left, Y₁ = right) = ν_left (P²)_{left,right}`.
    pub weight: f64,
    pub pmf: Vec<f64>,
}

/// All neighbour pairs of positive probability; pairs with `(P²)_ac = 0`
/// carry zero weight and are omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalLaw {
    values: Vec<f64>,
    pairs: Vec<PairLaw>,
}

impl ConditionalLaw {
    pub fn pairs(&self) -> &[PairLaw] {
        &self.pairs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `G(y)` for one pair. Returns exactly `1` (or `0`) when no state with
    /// positive conditional mass lies above (or at/below) `y`.
    pub fn conditional_cdf(&self, pair: &PairLaw, y: f64) -> f64 {
        let mut below = CompensatedSum::new();
        let (mut any_below, mut any_above) = (false, false);
        for (b, &m) in pair.pmf.iter().enumerate() {
            if m > 0.0 {
                if self.values[b] <= y {
                    below.add(m);
                    any_below = true;
                } else {
                    any_above = true;
                }
            }
        }
        match (any_below, any_above) {
            (_, false) => 1.0,
            (false, true) => 0.0,
            _ => below.value().clamp(0.0, 1.0),
        }
    }

    /// `g(y) = P(G(y) = 1)`.
    pub fn forced_mass(&self, y: f64) -> f64 {
        self.pairs
            .iter()
            .filter(|pr| self.conditional_cdf(pr, y) == 1.0)
            .map(|pr| pr.weight)
            .collect::<CompensatedSum>()
            .value()
    }

    /// `E G(y)`, which must equal `F(y)`.
    pub fn expected_cdf(&self, y: f64) -> f64 {
        self.pairs
            .iter()
            .map(|pr| pr.weight * self.conditional_cdf(pr, y))
            .collect::<CompensatedSum>()
            .value()
    }

    /// `P(ε < G(y) < 1 − ε)`.
    pub fn interior_mass(&self, y: f64, eps: f64) -> f64 {
        self.pairs
            .iter()
            .filter(|pr| {
                let g = self.conditional_cdf(pr, y);
                eps < g && g < 1.0 - eps
            })
            .map(|pr| pr.weight)
            .collect::<CompensatedSum>()
            .value()
    }

    /// `E|G(y)e^{ιt} + 1 − G(y)|`, accumulated as `1 − E(1 − |Ψ_G(t)|)` so
    /// that `t = 0` gives exactly one.
    pub fn cf_modulus(&self, y: f64, t: f64) -> f64 {
        let deficit: CompensatedSum = self
            .pairs
            .iter()
            .map(|pr| pr.weight * (1.0 - psi_modulus(self.conditional_cdf(pr, y), t)))
            .collect();
        1.0 - deficit.value()
    }

    /// Marginal law of `Y₀` recovered by averaging over pairs.
    pub fn middle_marginal(&self) -> Vec<f64> {
        let s = self.values.len();
        (0..s)
            .map(|b| {
                self.pairs
                    .iter()
                    .map(|pr| pr.weight * pr.pmf[b])
                    .collect::<CompensatedSum>()
                    .value()
            })
            .collect()
    }
}

pub fn conditional_law(chain: &FiniteMarkov) -> ConditionalLaw {
    let s = chain.states();
    let p = chain.transition();
    let nu = chain.stationary();
    let mut pairs = Vec::new();
    for a in 0..s {
        for c in 0..s {
            let joint: Vec<f64> = (0..s).map(|b| p[a][b] * p[b][c]).collect();
            let two_step = joint.iter().copied().collect::<CompensatedSum>().value();
            if two_step > 0.0 && nu[a] > 0.0 {
                pairs.push(PairLaw {
                    left: a,
                    right: c,
                    weight: nu[a] * two_step,
                    pmf: joint.iter().map(|j| j / two_step).collect(),
                });
            }
        }
    }
    ConditionalLaw {
        values: chain.values().to_vec(),
        pairs,
    }
}

/// Exact `g(ξ) = P(G₀(ξ) = 1)` together with the identity `E G₀(ξ) = F(ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C5Report {
    pub xi: f64,
    pub g: f64,
    /// `F(ξ)` from the stationary law.
    pub f_xi: f64,
    /// `E G₀(ξ)` from the conditional law.
    pub expected_g: f64,
    /// `F(ξ) − g(ξ)`.
    pub margin: f64,
}

impl C5Report {
    pub fn identity_error(&self) -> f64 {
        (self.expected_g - self.f_xi).abs()
    }
}

pub fn c5_probability(chain: &FiniteMarkov, xi: f64) -> C5Report {
    let law = conditional_law(chain);
    let g = law.forced_mass(xi);
    let f_xi = chain.cdf(xi);
    C5Report {
        xi,
        g,
        f_xi,
        expected_g: law.expected_cdf(xi),
        margin: f_xi - g,
    }
}

pub fn conditional_cf_modulus(chain: &FiniteMarkov, y: f64, t: f64) -> f64 {
    conditional_law(chain).cf_modulus(y, t)
}
