//! Empirical distribution function, the inf-definition sample quantile and
//! Kolmogorov (sup-norm) distances against a normal law.

use serde::{Deserialize, Serialize};

use super::normal::phi_unchecked;
use crate::error::{domain, Result};
use crate::oracles::CountDistribution;

/// Empirical distribution function of a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Edf {
    sorted: Vec<f64>,
}

impl Edf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return domain("Edf: empty sample");
        }
        if sample.iter().any(|x| x.is_nan()) {
            return domain("Edf: sample contains NaN");
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// `#{i : xᵢ ≤ x}`.
    pub fn count_le(&self, x: f64) -> usize {
        self.sorted.partition_point(|&v| v <= x)
    }
}

/// `F_n(x) = k/n` with `k = #{i : xᵢ ≤ x}`.
pub fn edf_eval(edf: &Edf, x: f64) -> f64 {
    edf.count_le(x) as f64 / edf.len() as f64
}

/// Rank `k₀ = min{k : k/n ≥ p}` (1-based), i.e. `⌈np⌉` with the
/// comparison done exactly as [`edf_eval`] does it, so `np` landing on an
/// integer gives `k₀ = np` regardless of how `n·p` rounds.
pub fn quantile_rank(n: usize, p: f64) -> usize {
    let nf = n as f64;
    let mut k = (nf * p).ceil().clamp(0.0, nf) as usize;
    while k > 0 && (k - 1) as f64 / nf >= p {
        k -= 1;
    }
    while k < n && (k as f64 / nf) < p {
        k += 1;
    }
    k
}

/// `F_n⁻¹(p) = inf{x : F_n(x) ≥ p}`, the `⌈np⌉`-th order statistic.
pub fn sample_quantile(edf: &Edf, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("sample_quantile: p={p} outside (0,1)"));
    }
    let k = quantile_rank(edf.len(), p);
    Ok(edf.sorted[k.max(1) - 1])
}

/// A distribution function tabulated on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCdf {
    xs: Vec<f64>,
    ps: Vec<f64>,
}

impl GridCdf {
    pub fn new(xs: Vec<f64>, ps: Vec<f64>) -> Result<Self> {
        if xs.len() != ps.len() {
            return domain("GridCdf: xs and ps differ in length");
        }
        if xs.is_empty() {
            return domain("GridCdf: empty grid");
        }
        if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| w[1] <= w[0]) {
            return domain("GridCdf: xs must be finite and strictly increasing");
        }
        if ps.iter().any(|p| !(0.0..=1.0).contains(p)) || ps.windows(2).any(|w| w[1] < w[0]) {
            return domain("GridCdf: ps must be nondecreasing in [0,1]");
        }
        Ok(Self { xs, ps })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ps(&self) -> &[f64] {
        &self.ps
    }
}

/// `max_i |psᵢ − Φ(xsᵢ/scale)|`.
///
/// This is a lower bound on the sup over the real line; between grid
/// points both functions are monotone, so the gap to the true sup is at most
/// the larger of the two functions' increments over one grid cell.
pub fn kolmogorov_distance(law: &GridCdf, scale: f64) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return domain(format!("kolmogorov_distance: scale={scale} must be positive"));
    }
    if law.xs.is_empty() {
        return domain("kolmogorov_distance: empty grid");
    }
    Ok(law
        .xs
        .iter()
        .zip(&law.ps)
        .map(|(&x, &p)| (p - phi_unchecked(x / scale)).abs())
        .fold(0.0, f64::max))
}

/// Exact sup distance between an integer-lattice law and `N(mu, sigma²)`.
///
/// The lattice CDF is constant on `[k, k+1)` while `Φ` increases, so the sup
/// is attained at an atom, approached from the left or right.
pub fn lattice_kolmogorov_distance(pmf: &CountDistribution, mu: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) || !mu.is_finite() {
        return domain(format!("lattice_kolmogorov_distance: bad mu={mu} sigma={sigma}"));
    }
    pmf.validate()?;
    let mut below = 0.0;
    let mut acc = super::binomial::CompensatedSum::new();
    let mut worst: f64 = 0.0;
    for (k, &mass) in pmf.pmf().iter().enumerate() {
        let z = phi_unchecked((k as f64 - mu) / sigma);
        acc.add(mass);
        let at = acc.value().min(1.0);
        worst = worst.max((below - z).abs()).max((at - z).abs());
        below = at;
    }
    Ok(worst)
}
