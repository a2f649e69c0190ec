//! Exact finite-`n` ground truth: the i.i.d. quantile law by duality, and
//! transfer-matrix computations for finite-state Markov chains.

mod cf;
mod conditional;
mod count;
#[cfg(test)]
pub(crate) mod enumerate;

pub use cf::{markov_cf, markov_cumulants, standardization, CfSample, Standardization};
pub use conditional::{c5_probability, conditional_cf_modulus, conditional_law, C5Report, ConditionalLaw, PairLaw};
pub use count::{
    markov_count_distribution, markov_count_distribution_capped, markov_count_variance, markov_long_run_variance,
    CountDistribution, DEFAULT_MEMORY_CAP,
};

pub(crate) use cf::cf_with;

use crate::numeric::{binomial_upper_tail, quantile_rank};

/// `P(ξ̂_n ≤ y)` for an i.i.d. sample with `F(y) = fy`, using
/// `ξ̂_n ≤ y ⟺ n F_n(y) ≥ ⌈np⌉`.
pub fn iid_quantile_cdf(n: usize, p: f64, fy: f64) -> f64 {
    let k0 = quantile_rank(n, p) as u64;
    binomial_upper_tail(n as u64, fy.clamp(0.0, 1.0), k0).expect("rank within 1..=n")
}
