use proptest::prelude::*;
use quantrate::oracles::{
    c5_probability, conditional_law, markov_cf, markov_count_distribution, markov_count_variance, markov_cumulants,
};
use quantrate::processes::FiniteMarkov;
use quantrate::theory::lemma33_check;

/// Row-stochastic matrices from raw weights; zero weights become zero
/// transitions, and the diagonal is kept positive so every chain is aperiodic.
fn chain_from(weights: Vec<Vec<f64>>) -> Option<FiniteMarkov> {
    let s = weights.len();
    let rows = weights
        .into_iter()
        .enumerate()
        .map(|(i, mut w)| {
            w[i] = w[i].max(0.05);
            let t: f64 = w.iter().sum();
            w.into_iter().map(|x| x / t).collect()
        })
        .collect();
    FiniteMarkov::new(rows, (0..s).map(|v| v as f64).collect()).ok()
}

fn weights() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..=4).prop_flat_map(|s| {
        proptest::collection::vec(proptest::collection::vec(prop_oneof![Just(0.0), 0.01f64..1.0], s), s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_law_moments(w in weights(), n in 1usize..60, level in 0usize..3) {
        let Some(chain) = chain_from(w) else { return Ok(()) };
        let y = level.min(chain.states() - 2) as f64 + 0.5;
        let d = markov_count_distribution(&chain, y, n).unwrap();
        prop_assert!((d.pmf().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((d.mean() - n as f64 * chain.cdf(y)).abs() < 1e-9);
        let v = markov_count_variance(&chain, y, n);
        prop_assert!((d.variance() - v).abs() < 1e-9 * v.max(1.0));
    }

    #[test]
    fn cf_is_bounded_and_conjugate_symmetric(w in weights(), n in 1usize..60, t in -8.0f64..8.0) {
        let Some(chain) = chain_from(w) else { return Ok(()) };
        let y = 0.5;
        if markov_count_variance(&chain, y, n) / n as f64 <= 1e-12 {
            return Ok(());
        }
        let h = markov_cf(&chain, y, n, t).unwrap().value;
        let g = markov_cf(&chain, y, n, -t).unwrap().value;
        prop_assert!(h.norm() <= 1.0 + 1e-12);
        prop_assert!((h - g.conj()).norm() < 1e-13);
        let c = markov_cumulants(&chain, y, n, 5).unwrap();
        prop_assert!((c[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn conditional_identity_and_forced_mass(w in weights()) {
        let Some(chain) = chain_from(w) else { return Ok(()) };
        let law = conditional_law(&chain);
        for &x in chain.values() {
            let r = c5_probability(&chain, x);
            prop_assert!(r.identity_error() < 1e-12);
            prop_assert!(r.g <= r.f_xi + 1e-12);
            if chain.has_full_support() && chain.cdf(x) < 1.0 {
                prop_assert_eq!(r.g, 0.0);
            }
            prop_assert!(law.cf_modulus(x, 1.3) <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn contraction_bound_holds_whenever_its_hypothesis_does(w in weights(), p in 0.05f64..0.95, eps in 0.01f64..0.3) {
        let Some(chain) = chain_from(w) else { return Ok(()) };
        let t: Vec<f64> = (0..33).map(|i| -std::f64::consts::PI + std::f64::consts::PI * i as f64 / 16.0).collect();
        let half = (chain.states() - 1) as f64;
        if let Ok(r) = lemma33_check(&chain, p, eps, half, &t) {
            prop_assert!(r.min_margin() >= -1e-12, "margin {}", r.min_margin());
            let at_zero = r.margins.iter().map(|row| row[16]).fold(f64::INFINITY, f64::min);
            prop_assert!(at_zero.abs() < 1e-15);
        }
    }
}
