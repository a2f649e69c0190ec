//! Binomial tail probabilities.
//!
//! Terms are generated from the mode outwards by the pmf ratio
//! `b(k+1)/b(k) = (n-k)/(k+1) · q/(1-q)`, all relative to `b(mode) = 1`.
//! Both tails are summed with compensation and the result is
//! `upper / (upper + lower)`, so no gamma functions or `1 - x`
//! cancellations are involved. Terms below 1e-20 of the mode mass are
//! dropped, which bounds the work by `O(√(nq(1-q)))`.

use crate::error::{domain, Result};

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

const CUTOFF: f64 = 1e-20;

/// `P(Bin(n, q) ≥ k0)` for `0 ≤ k0 ≤ n + 1`.
pub fn binomial_upper_tail(n: u64, q: f64, k0: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return domain(format!("binomial_upper_tail: q={q} outside [0,1]"));
    }
    if k0 > n + 1 {
        return domain(format!("binomial_upper_tail: k0={k0} exceeds n+1={}", n + 1));
    }
    if k0 == 0 {
        return Ok(1.0);
    }
    if k0 == n + 1 {
        return Ok(0.0);
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    if q == 1.0 {
        return Ok(1.0);
    }

    let nf = n as f64;
    let mode = (((n + 1) as f64) * q).floor().min(nf) as u64;
    let up_ratio = q / (1.0 - q);
    let down_ratio = (1.0 - q) / q;

    let mut upper = CompensatedSum::new();
    let mut lower = CompensatedSum::new();
    let mut push = |k: u64, t: f64| {
        if k >= k0 {
            upper.add(t)
        } else {
            lower.add(t)
        }
    };

    push(mode, 1.0);
    let mut t = 1.0;
    let mut k = mode;
    while k < n {
        t *= (nf - k as f64) / (k as f64 + 1.0) * up_ratio;
        k += 1;
        if t < CUTOFF {
            break;
        }
        push(k, t);
    }
    let mut t = 1.0;
    let mut k = mode;
    while k > 0 {
        t *= k as f64 / (nf - k as f64 + 1.0) * down_ratio;
        k -= 1;
        if t < CUTOFF {
            break;
        }
        push(k, t);
    }

    let up = upper.value();
    let lo = lower.value();
    Ok(up / (up + lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct enumeration: Σ_{k ≥ k0} C(n,k) q^k (1-q)^{n-k}.
    fn enumerate(n: u64, q: f64, k0: u64) -> f64 {
        let mut total = 0.0;
        for k in k0..=n {
            let mut c = 1.0;
            for j in 0..k {
                c = c * (n - j) as f64 / (j + 1) as f64;
            }
            total += c * q.powi(k as i32) * (1.0 - q).powi((n - k) as i32);
        }
        total
    }

    #[test]
    fn small_cases() {
        assert!((binomial_upper_tail(3, 0.5, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((binomial_upper_tail(2, 0.3, 1).unwrap() - 0.51).abs() < 1e-15);
        assert_eq!(binomial_upper_tail(17, 0.2, 0).unwrap(), 1.0);
        assert_eq!(binomial_upper_tail(17, 0.2, 18).unwrap(), 0.0);
        assert!(binomial_upper_tail(3, 0.5, 5).is_err());
        assert!(binomial_upper_tail(3, 1.5, 1).is_err());
    }

    #[test]
    fn degenerate_q() {
        assert_eq!(binomial_upper_tail(10, 0.0, 1).unwrap(), 0.0);
        assert_eq!(binomial_upper_tail(10, 1.0, 10).unwrap(), 1.0);
    }

    #[test]
    fn matches_enumeration_up_to_twelve() {
        for n in 1..=12u64 {
            for &q in &[0.01, 0.1, 0.25, 0.5, 0.6, 0.9, 0.999] {
                for k0 in 0..=n + 1 {
                    let a = binomial_upper_tail(n, q, k0).unwrap();
                    let b = enumerate(n, q, k0);
                    assert!((a - b).abs() < 1e-14, "n={n} q={q} k0={k0}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn large_n_symmetry() {
        // Bin(2m+1, 1/2) has P(X ≥ m+1) = 1/2 exactly.
        for &n in &[1_001u64, 100_001, 1_000_001] {
            let v = binomial_upper_tail(n, 0.5, (n + 1) / 2).unwrap();
            assert!((v - 0.5).abs() < 1e-12, "n={n}: {v}");
        }
    }

    #[test]
    fn large_n_complement() {
        let n = 1_000_000u64;
        // q and 1 − q must both be exact in binary: at n = 10⁶ a rounding of
        // 1 − q alone shifts the tail by ~n·ulp.
        for &q in &[1.0 / 1048576.0, 0.3125, 0.765625] {
            for &k0 in &[0u64, 1, 250_000, 300_000, 300_500, 770_000, 999_999] {
                let up = binomial_upper_tail(n, q, k0).unwrap();
                // lower tail of Bin(n,q) below k0 = upper tail of Bin(n,1-q) at n-k0+1
                let low = binomial_upper_tail(n, 1.0 - q, n - k0 + 1).unwrap();
                assert!((up + low - 1.0).abs() < 1e-12, "q={q} k0={k0}");
            }
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1.0, 1e-16, 1e-16, -1.0].into_iter().collect();
        assert!((s.value() - 2e-16).abs() < 1e-30);
    }
}
