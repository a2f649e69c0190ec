//! Exact law of the indicator count `Σᵢ I(Xᵢ ≤ y)` for a stationary
//! finite-state chain, plus its exact variance at finite and infinite `n`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::CompensatedSum;
use crate::processes::FiniteMarkov;

/// Default ceiling on the DP working set.
pub const DEFAULT_MEMORY_CAP: usize = 2 << 30;

/// Probability mass function on `{0, 1, …, n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountDistribution {
    n: usize,
    pmf: Vec<f64>,
}

impl CountDistribution {
    /// Validates and clips rounding-level negatives (≥ −1e-15) to zero.
    pub fn new(mut pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return domain("count distribution: empty pmf");
        }
        for p in pmf.iter_mut() {
            if !p.is_finite() || *p < -1e-15 {
                return domain(format!("count distribution: invalid mass {p}"));
            }
            *p = p.max(0.0);
        }
        let d = Self { n: pmf.len() - 1, pmf };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pmf.len() != self.n + 1 || self.pmf.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return domain("count distribution: malformed pmf");
        }
        let total = self.pmf.iter().copied().collect::<CompensatedSum>().value();
        if (total - 1.0).abs() > 1e-12 {
            return domain(format!("count distribution: total mass {total}"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn mean(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .collect::<CompensatedSum>()
            .value()
    }

    /// Central moments `μ_r` for `r = 0..=max_order`.
    pub fn central_moments(&self, max_order: usize) -> Vec<f64> {
        let mean = self.mean();
        let mut acc = vec![CompensatedSum::new(); max_order + 1];
        for (k, &p) in self.pmf.iter().enumerate() {
            let d = k as f64 - mean;
            let mut term = p;
            for slot in acc.iter_mut() {
                slot.add(term);
                term *= d;
            }
        }
        acc.iter().map(|a| a.value()).collect()
    }

    pub fn variance(&self) -> f64 {
        self.central_moments(2)[2]
    }

    /// `P(count ≥ k)`.
    pub fn upper_tail(&self, k: usize) -> f64 {
        if k > self.n {
            return 0.0;
        }
        self.pmf[k..]
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
            .min(1.0)
    }
}

/// Exact pmf of `Σ_{i=1}^n I(Xᵢ ≤ y)` started from stationarity.
pub fn markov_count_distribution(chain: &FiniteMarkov, y: f64, n: usize) -> Result<CountDistribution> {
    markov_count_distribution_capped(chain, y, n, DEFAULT_MEMORY_CAP)
}

/// As [`markov_count_distribution`] with an explicit memory cap in bytes.
///
/// Dynamic programming over (running count, current state), stored
/// count-major/state-minor; two layers of `(n+1)·S` doubles are live.
pub fn markov_count_distribution_capped(
    chain: &FiniteMarkov,
    y: f64,
    n: usize,
    cap_bytes: usize,
) -> Result<CountDistribution> {
    if n == 0 {
        return domain("markov_count_distribution: n must be at least 1");
    }
    let s = chain.states();
    let need = (n + 1)
        .checked_mul(s)
        .and_then(|c| c.checked_mul(2 * std::mem::size_of::<f64>()))
        .unwrap_or(usize::MAX);
    if need > cap_bytes {
        return Err(Error::Resource(format!(
            "count DP needs {need} bytes for n={n}, S={s}; cap is {cap_bytes}"
        )));
    }
    let ind = chain.indicator(y);
    let p = chain.transition();
    let mut cur = vec![0.0; (n + 1) * s];
    let mut next = vec![0.0; (n + 1) * s];
    for (st, &w) in chain.stationary().iter().enumerate() {
        cur[usize::from(ind[st]) * s + st] = w;
    }
    for step in 1..n {
        // after `step` observations the count is at most `step`
        next[..(step + 2) * s].iter_mut().for_each(|x| *x = 0.0);
        for c in 0..=step {
            let row = &cur[c * s..(c + 1) * s];
            if row.iter().all(|&x| x == 0.0) {
                continue;
            }
            for to in 0..s {
                let mut acc = CompensatedSum::new();
                for (from, &mass) in row.iter().enumerate() {
                    acc.add(mass * p[from][to]);
                }
                next[(c + usize::from(ind[to])) * s + to] += acc.value();
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let pmf: Vec<f64> = (0..=n)
        .map(|c| {
            cur[c * s..(c + 1) * s]
                .iter()
                .copied()
                .collect::<CompensatedSum>()
                .value()
        })
        .collect();
    CountDistribution::new(pmf)
}

/// Autocovariances `γ_k = Cov(I(X₀ ≤ y), I(X_k ≤ y))` for `k = 0..len`.
pub(crate) fn indicator_autocovariances(chain: &FiniteMarkov, y: f64, len: usize) -> Vec<f64> {
    let s = chain.states();
    let f = chain.cdf(y);
    let nu = chain.stationary();
    let p = chain.transition();
    let h: Vec<f64> = chain.indicator(y).iter().map(|&b| f64::from(u8::from(b)) - f).collect();
    // v = P^k h
    let mut v = h.clone();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let g: CompensatedSum = (0..s).map(|a| nu[a] * h[a] * v[a]).collect();
        out.push(g.value());
        v = (0..s).map(|a| (0..s).map(|b| p[a][b] * v[b]).sum()).collect();
    }
    out
}

/// `Var(Σ_{i=1}^n I(Xᵢ ≤ y)) = nγ₀ + 2Σ_{k=1}^{n−1}(n−k)γ_k`, exactly.
pub fn markov_count_variance(chain: &FiniteMarkov, y: f64, n: usize) -> f64 {
    let gamma = indicator_autocovariances(chain, y, n);
    let mut acc = CompensatedSum::new();
    acc.add(n as f64 * gamma[0]);
    for (k, g) in gamma.iter().enumerate().skip(1) {
        acc.add(2.0 * (n - k) as f64 * g);
    }
    acc.value().max(0.0)
}

/// `σ²∞(y) = Σ_{k∈ℤ} γ_k = ⟨h, (2Z − I)h⟩_ν` with the fundamental matrix
/// `Z = (I − P + 1ν)⁻¹` and `h = I(· ≤ y) − F(y)`.
pub fn markov_long_run_variance(chain: &FiniteMarkov, y: f64) -> Result<f64> {
    let s = chain.states();
    let f = chain.cdf(y);
    let nu = chain.stationary();
    let p = chain.transition();
    let h: Vec<f64> = chain.indicator(y).iter().map(|&b| f64::from(u8::from(b)) - f).collect();
    let a = DMatrix::from_fn(s, s, |i, j| f64::from(u8::from(i == j)) - p[i][j] + nu[j]);
    let zh = a
        .lu()
        .solve(&nalgebra::DVector::from_column_slice(&h))
        .ok_or_else(|| Error::Domain("fundamental matrix is singular".into()))?;
    let v: CompensatedSum = (0..s).map(|i| nu[i] * h[i] * (2.0 * zh[i] - h[i])).collect();
    Ok(v.value().max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::enumerate::{enumerate_counts, lazy3, sym2};

    #[test]
    fn two_step_symmetric_chain_by_hand() {
        // paths: 00 → 0.45, 01/10 → 0.05 each, 11 → 0.45; y=0.5 counts state 0
        let d = markov_count_distribution(&sym2(), 0.5, 2).unwrap();
        let want = [0.45, 0.1, 0.45];
        for (a, b) in d.pmf().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_path_enumeration() {
        for chain in [sym2(), lazy3()] {
            for &y in &[-1.0, 0.5, 1.5, 3.0] {
                for n in 1..=6 {
                    let d = markov_count_distribution(&chain, y, n).unwrap();
                    let e = enumerate_counts(&chain, y, n);
                    for (a, b) in d.pmf().iter().zip(&e) {
                        assert!((a - b).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn iid_rows_reduce_to_binomial() {
        let chain = FiniteMarkov::new(
            vec![vec![0.2, 0.5, 0.3], vec![0.2, 0.5, 0.3], vec![0.2, 0.5, 0.3]],
            vec![0.0, 1.0, 2.0],
        )
        .unwrap();
        let n = 300;
        let d = markov_count_distribution(&chain, 1.0, n).unwrap();
        let q = 0.7f64;
        // binomial pmf by the multiplicative recurrence from k = 0
        let mut b = vec![0.0; n + 1];
        b[0] = (1.0 - q).powi(n as i32);
        for k in 0..n {
            b[k + 1] = b[k] * (n - k) as f64 / (k + 1) as f64 * q / (1.0 - q);
        }
        for (a, e) in d.pmf().iter().zip(&b) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn point_mass_below_all_values() {
        let d = markov_count_distribution(&lazy3(), -5.0, 50).unwrap();
        assert!((d.pmf()[0] - 1.0).abs() < 1e-15);
        assert!(d.pmf()[1..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn mean_and_variance_invariants() {
        let chain = lazy3();
        for &n in &[1usize, 10, 257, 1024] {
            let d = markov_count_distribution(&chain, 1.5, n).unwrap();
            assert!((d.mean() - n as f64 * chain.cdf(1.5)).abs() < 1e-9);
            let v = markov_count_variance(&chain, 1.5, n);
            assert!((d.variance() - v).abs() < 1e-9 * v.max(1.0), "n={n}");
        }
    }

    #[test]
    fn long_run_variance_matches_series() {
        let chain = lazy3();
        for &y in &[0.5, 1.5] {
            let g = indicator_autocovariances(&chain, y, 400);
            let series = g[0] + 2.0 * g[1..].iter().sum::<f64>();
            let exact = markov_long_run_variance(&chain, y).unwrap();
            assert!((series - exact).abs() < 1e-13);
        }
        // symmetric 2-state: σ² = p(1−p)(1+λ)/(1−λ) with λ = 0.8
        let v = markov_long_run_variance(&sym2(), 0.5).unwrap();
        assert!((v - 0.25 * 9.0).abs() < 1e-12);
    }

    #[test]
    fn memory_cap_is_enforced() {
        match markov_count_distribution_capped(&lazy3(), 0.5, 1000, 1024) {
            Err(Error::Resource(_)) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_pmf() {
        assert!(CountDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(CountDistribution::new(vec![]).is_err());
        assert!(CountDistribution::new(vec![1.0, -1e-3]).is_err());
        let d = CountDistribution::new(vec![1.0, -1e-16]).unwrap();
        assert_eq!(d.pmf()[1], 0.0);
    }
}
