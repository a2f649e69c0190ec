//! Finite-state Markov chains: validation, stationary law, Dobrushin
//! coefficient.

use crate::error::{domain, Error, Result};
use nalgebra::{DMatrix, DVector};

/// Largest supported state space.
pub const MAX_STATES: usize = 32;

const ROW_TOL: f64 = 1e-12;

/// Tolerance for deciding `F(v) ≥ p` at a state value.
pub const CDF_TIE_TOL: f64 = 1e-12;

/// A stationary, irreducible chain on `S` states emitting `values[state]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMarkov {
    transition: Vec<Vec<f64>>,
    values: Vec<f64>,
    stationary: Vec<f64>,
}

impl FiniteMarkov {
    pub fn new(transition: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        let s = transition.len();
        if s == 0 || s > MAX_STATES {
            return domain(format!("finite_markov: {s} states, supported range 1..={MAX_STATES}"));
        }
        if values.len() != s {
            return domain("finite_markov: values and transition sizes differ");
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] <= w[0]) {
            return domain("finite_markov: values must be finite and strictly increasing");
        }
        let stationary = stationary_distribution(&transition)?;
        Ok(Self {
            transition,
            values,
            stationary,
        })
    }

    pub fn states(&self) -> usize {
        self.values.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// `F(y) = Σ_{s : values[s] ≤ y} ν_s`.
    pub fn cdf(&self, y: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.stationary)
            .filter(|(&v, _)| v <= y)
            .map(|(_, &w)| w)
            .sum::<f64>()
            .min(1.0)
    }

    /// Indicator `I(values[s] ≤ y)` per state.
    pub fn indicator(&self, y: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v <= y).collect()
    }

    /// Smallest state value `v` with `F(v) ≥ p`, where `F(v)` within
    /// [`CDF_TIE_TOL`] of `p` counts as reaching it (stationary masses carry
    /// solver rounding).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("finite_markov quantile: p={p} outside (0,1)"));
        }
        Ok(self
            .values
            .iter()
            .copied()
            .find(|&v| self.cdf(v) >= p - CDF_TIE_TOL)
            .unwrap_or(*self.values.last().unwrap()))
    }

    /// Midpoint between the state value at the `p`-quantile and the next
    /// larger value (or the quantile itself plus one if it is the top state).
    pub fn gap_midpoint_above(&self, p: f64) -> Result<f64> {
        let xi = self.quantile(p)?;
        let idx = self.values.iter().position(|&v| v == xi).unwrap();
        Ok(match self.values.get(idx + 1) {
            Some(&next) => 0.5 * (xi + next),
            None => xi + 1.0,
        })
    }

    pub fn dobrushin(&self) -> f64 {
        dobrushin_unchecked(&self.transition)
    }

    pub fn has_full_support(&self) -> bool {
        self.transition.iter().all(|row| row.iter().all(|&x| x > 0.0))
    }
}

fn check_stochastic(p: &[Vec<f64>]) -> Result<()> {
    let s = p.len();
    if s == 0 {
        return domain("empty transition matrix");
    }
    for (i, row) in p.iter().enumerate() {
        if row.len() != s {
            return domain(format!("transition row {i} has {} entries, expected {s}", row.len()));
        }
        if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return domain(format!("transition row {i} has entries outside [0,1]"));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_TOL {
            return domain(format!("transition row {i} sums to {sum}"));
        }
    }
    Ok(())
}

fn dobrushin_unchecked(p: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let tv = 0.5 * p[i].iter().zip(&p[j]).map(|(a, b)| (a - b).abs()).sum::<f64>();
            worst = worst.max(tv);
        }
    }
    worst.min(1.0)
}

/// `max_{i,j} ½ Σ_k |P_ik − P_jk|`; the chain contracts in total variation
/// (and the uniform condition on transition rows holds) iff this is `< 1`.
pub fn dobrushin_coefficient(p: &[Vec<f64>]) -> Result<f64> {
    check_stochastic(p)?;
    Ok(dobrushin_unchecked(p))
}

/// Boolean reachability closure (Warshall).
fn reachability(p: &[Vec<f64>]) -> Vec<Vec<bool>> {
    let s = p.len();
    let mut r: Vec<Vec<bool>> = (0..s)
        .map(|i| (0..s).map(|j| i == j || p[i][j] > 0.0).collect())
        .collect();
    for k in 0..s {
        for i in 0..s {
            if r[i][k] {
                for j in 0..s {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Solves `νP = ν`, `Σν = 1` for an irreducible chain.
pub fn stationary_distribution(p: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_stochastic(p)?;
    let s = p.len();
    let reach = reachability(p);
    if let Some(i) = (0..s).find(|&i| reach[i].iter().any(|&r| !r)) {
        // Report a closed class reachable from the offending state.
        let class = (0..s)
            .filter(|&j| reach[i][j])
            .find(|&j| (0..s).all(|k| !reach[j][k] || reach[k][j]))
            .map(|j| (0..s).filter(|&k| reach[j][k] && reach[k][j]).collect())
            .unwrap_or_default();
        return Err(Error::Reducible { class });
    }

    // (Pᵀ − I)ν = 0 with the last equation replaced by Σν = 1.
    let mut a = DMatrix::<f64>::zeros(s, s);
    for i in 0..s {
        for j in 0..s {
            a[(i, j)] = p[j][i] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..s {
        a[(s - 1, j)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(s);
    b[s - 1] = 1.0;
    let lu = a.clone().lu();
    let mut nu = lu
        .solve(&b)
        .ok_or_else(|| Error::Domain("stationary_distribution: singular system".into()))?;
    // one round of iterative refinement
    let resid = &b - &a * &nu;
    if let Some(corr) = lu.solve(&resid) {
        nu += corr;
    }
    let mut nu: Vec<f64> = nu.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = nu.iter().sum();
    nu.iter_mut().for_each(|x| *x /= total);
    Ok(nu)
}
