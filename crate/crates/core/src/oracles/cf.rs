//! Characteristic function and cumulants of the standardized indicator sum
//! `S_n = n^{−1/2} Σᵢ (I(Xᵢ ≤ y) − F(y)) / σ_n(y)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::count::{markov_count_distribution, markov_count_variance};
use crate::error::{domain, Result};
use crate::processes::FiniteMarkov;

/// One evaluation `H_n(t) = E exp(ιtS_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfSample {
    pub t: f64,
    pub value: Complex64,
    pub n: usize,
}

/// `F(y)` and `σ_n(y)` with `σ_n² = n⁻¹ Var(Σ I(Xᵢ ≤ y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Standardization {
    pub f: f64,
    pub sigma_n: f64,
}

pub fn standardization(chain: &FiniteMarkov, y: f64, n: usize) -> Result<Standardization> {
    if n == 0 {
        return domain("standardization: n must be at least 1");
    }
    let var = markov_count_variance(chain, y, n) / n as f64;
    if !(var > 1e-15) {
        return domain(format!("degenerate sigma_n at y={y}: variance {var}"));
    }
    Ok(Standardization {
        f: chain.cdf(y),
        sigma_n: var.sqrt(),
    })
}

/// Exact `H_n(t)` via `ν D (P D)^{n−1} 1` with `D = diag(exp(ιt·w_s/√n))`.
pub fn markov_cf(chain: &FiniteMarkov, y: f64, n: usize, t: f64) -> Result<CfSample> {
    let st = standardization(chain, y, n)?;
    Ok(CfSample {
        t,
        value: cf_with(chain, y, n, t, st),
        n,
    })
}

pub(crate) fn cf_with(chain: &FiniteMarkov, y: f64, n: usize, t: f64, st: Standardization) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let s = chain.states();
    let scale = t / (st.sigma_n * (n as f64).sqrt());
    let phase: Vec<Complex64> = chain
        .indicator(y)
        .iter()
        .map(|&b| Complex64::from_polar(1.0, scale * (f64::from(u8::from(b)) - st.f)))
        .collect();
    let p = chain.transition();
    let mut row: Vec<Complex64> = chain.stationary().iter().zip(&phase).map(|(&w, &d)| d * w).collect();
    let mut next = vec![Complex64::new(0.0, 0.0); s];
    for _ in 1..n {
        for (to, slot) in next.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (from, r) in row.iter().enumerate() {
                acc += r * p[from][to];
            }
            *slot = acc * phase[to];
        }
        std::mem::swap(&mut row, &mut next);
    }
    row.iter().sum()
}

/// Cumulants `χ_{r,n}` of `S_n` for `r = 0..=max_order` (`max_order` in
/// `2..=5`); entries 0 and 1 are zero. Computed from the exact count pmf,
/// so `χ_{2,n} = 1` up to rounding.
pub fn markov_cumulants(chain: &FiniteMarkov, y: f64, n: usize, max_order: usize) -> Result<Vec<f64>> {
    if !(2..=5).contains(&max_order) {
        return domain(format!("markov_cumulants: max_order={max_order} outside 2..=5"));
    }
    let d = markov_count_distribution(chain, y, n)?;
    let mu = d.central_moments(max_order);
    if !(mu[2] > 1e-15 * n as f64) {
        return domain(format!("degenerate sigma_n at y={y}"));
    }
    Ok(cumulants_from_central(&mu, max_order))
}

/// Standardized cumulants from central moments `μ₀..μ_r` of the count.
pub(crate) fn cumulants_from_central(mu: &[f64], max_order: usize) -> Vec<f64> {
    let mut k = vec![0.0; max_order + 1];
    k[2] = mu[2];
    if max_order >= 3 {
        k[3] = mu[3];
    }
    if max_order >= 4 {
        k[4] = mu[4] - 3.0 * mu[2] * mu[2];
    }
    if max_order >= 5 {
        k[5] = mu[5] - 10.0 * mu[3] * mu[2];
    }
    let sd = mu[2].sqrt();
    for (r, v) in k.iter_mut().enumerate().skip(2) {
        *v /= sd.powi(r as i32);
    }
    k[2] = mu[2] / (sd * sd);
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::enumerate::{enumerate_counts, iid_half, lazy3, sym2};

    #[test]
    fn zero_is_one() {
        let v = markov_cf(&lazy3(), 0.5, 37, 0.0).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn single_factor_formula() {
        let chain = FiniteMarkov::new(vec![vec![0.2, 0.5, 0.3]; 3], vec![0.0, 1.0, 2.0]).unwrap();
        let y = 0.5;
        let f = 0.2;
        let sigma = (f * (1.0 - f) as f64).sqrt();
        for &t in &[0.3, -1.1, 2.7] {
            let direct: Complex64 = chain
                .stationary()
                .iter()
                .zip(chain.indicator(y))
                .map(|(&w, b)| w * Complex64::from_polar(1.0, t * (f64::from(u8::from(b)) - f) / sigma))
                .sum();
            let v = markov_cf(&chain, y, 1, t).unwrap().value;
            assert!((v - direct).norm() < 1e-15);
        }
    }

    #[test]
    fn agrees_with_fourier_of_pmf() {
        for chain in [sym2(), lazy3(), iid_half()] {
            for n in 1..=10 {
                let y = 0.5;
                let st = standardization(&chain, y, n).unwrap();
                let pmf = enumerate_counts(&chain, y, n);
                let scale = 1.0 / (st.sigma_n * (n as f64).sqrt());
                for &t in &[-3.0, -0.4, 0.9, 2.2] {
                    let want: Complex64 = pmf
                        .iter()
                        .enumerate()
                        .map(|(k, &m)| m * Complex64::from_polar(1.0, t * scale * (k as f64 - n as f64 * st.f)))
                        .sum();
                    let got = markov_cf(&chain, y, n, t).unwrap().value;
                    assert!((got - want).norm() < 1e-13, "n={n} t={t}");
                    let neg = markov_cf(&chain, y, n, -t).unwrap().value;
                    assert!((neg - got.conj()).norm() < 1e-14);
                    assert!(got.norm() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn degenerate_level_is_an_error() {
        assert!(markov_cf(&lazy3(), 10.0, 5, 1.0).is_err());
        assert!(markov_cumulants(&lazy3(), -1.0, 5, 4).is_err());
        assert!(markov_cumulants(&lazy3(), 0.5, 5, 6).is_err());
    }

    #[test]
    fn cumulant_examples() {
        let c = markov_cumulants(&iid_half(), 0.5, 40, 5).unwrap();
        assert!((c[2] - 1.0).abs() < 1e-10);
        assert!(c[3].abs() < 1e-10);
        assert!(c[5].abs() < 1e-10);
        // n Bernoulli(½): κ4 of the count is −n/8, variance n/4 → χ4 = −2/n
        assert!((c[4] + 2.0 / 40.0).abs() < 1e-12);
        for chain in [sym2(), lazy3()] {
            for &n in &[1usize, 5, 64, 500] {
                let c = markov_cumulants(&chain, 0.5, n, 5).unwrap();
                assert!((c[2] - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cumulants_match_enumerated_paths() {
        let chain = sym2();
        let n = 3;
        let pmf = enumerate_counts(&chain, 0.5, n);
        let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        let m = |r: i32| -> f64 { pmf.iter().enumerate().map(|(k, p)| p * (k as f64 - mean).powi(r)).sum() };
        let sd = m(2).sqrt();
        let want = [
            m(3) / sd.powi(3),
            (m(4) - 3.0 * m(2) * m(2)) / sd.powi(4),
            (m(5) - 10.0 * m(3) * m(2)) / sd.powi(5),
        ];
        let got = markov_cumulants(&chain, 0.5, n, 5).unwrap();
        for (g, w) in got[3..].iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        let lazy = lazy3();
        let pmf = enumerate_counts(&lazy, 1.5, 3);
        let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        let m3: f64 = pmf.iter().enumerate().map(|(k, p)| p * (k as f64 - mean).powi(3)).sum();
        let m2: f64 = pmf.iter().enumerate().map(|(k, p)| p * (k as f64 - mean).powi(2)).sum();
        let got = markov_cumulants(&lazy, 1.5, 3, 3).unwrap();
        assert!((got[3] - m3 / m2.powf(1.5)).abs() < 1e-12);
    }
}
