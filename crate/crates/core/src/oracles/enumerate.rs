//! Brute-force path enumeration and small reference chains for tests.

use crate::processes::FiniteMarkov;

pub(crate) fn sym2() -> FiniteMarkov {
    FiniteMarkov::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]], vec![0.0, 1.0]).unwrap()
}

pub(crate) fn lazy3() -> FiniteMarkov {
    FiniteMarkov::new(
        vec![vec![0.7, 0.2, 0.1], vec![0.15, 0.7, 0.15], vec![0.1, 0.2, 0.7]],
        vec![0.0, 1.0, 2.0],
    )
    .unwrap()
}

pub(crate) fn forcing3() -> FiniteMarkov {
    FiniteMarkov::new(
        vec![vec![0.5, 0.5, 0.0], vec![0.5, 0.0, 0.5], vec![0.0, 0.5, 0.5]],
        vec![0.0, 1.0, 2.0],
    )
    .unwrap()
}

pub(crate) fn iid_half() -> FiniteMarkov {
    FiniteMarkov::new(vec![vec![0.5, 0.5]; 2], vec![0.0, 1.0]).unwrap()
}

/// Every state path of length `n` with its stationary probability.
pub(crate) fn enumerate_paths(chain: &FiniteMarkov, n: usize) -> Vec<(Vec<usize>, f64)> {
    let s = chain.states();
    let mut out = Vec::with_capacity(s.pow(n as u32));
    let mut path = vec![0usize; n];
    loop {
        let mut prob = chain.stationary()[path[0]];
        for w in path.windows(2) {
            prob *= chain.transition()[w[0]][w[1]];
        }
        out.push((path.clone(), prob));
        // odometer increment
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            path[i] += 1;
            if path[i] < s {
                break;
            }
            path[i] = 0;
        }
    }
}

/// Count pmf on `{0..n}` by summing over all `Sⁿ` paths.
pub(crate) fn enumerate_counts(chain: &FiniteMarkov, y: f64, n: usize) -> Vec<f64> {
    let ind = chain.indicator(y);
    let mut pmf = vec![0.0; n + 1];
    for (path, prob) in enumerate_paths(chain, n) {
        pmf[path.iter().filter(|&&st| ind[st]).count()] += prob;
    }
    pmf
}
