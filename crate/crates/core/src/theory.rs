//! Executable lemma-level statements evaluated exactly on finite-state
//! chains: the Bernoulli characteristic-function modulus, the conditional
//! CF contraction bound, the cumulant Taylor residual of `log H_n(t)`, and
//! the modulus curve of `H_n(t)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::oracles::{c5_probability, cf_with, conditional_law, markov_cumulants, standardization};
use crate::processes::FiniteMarkov;

/// `|a e^{ιt} + 1 − a| = √(1 − 4a(1−a) sin²(t/2))`.
pub fn psi_modulus(a: f64, t: f64) -> f64 {
    let s = (0.5 * t).sin();
    (1.0 - 4.0 * a * (1.0 - a) * s * s).max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma33Report {
    pub p: f64,
    pub xi_p: f64,
    /// `g(ξ_p)`, which the hypothesis requires to be below `p`.
    pub g_xi: f64,
    pub epsilon: f64,
    /// `min_y P(ε < G₀(y) < 1 − ε)` over the window.
    pub delta_hat: f64,
    pub y_window: (f64, f64),
    /// State values inside the window at which the bound is evaluated.
    pub y_points: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// `margins[i][j]` at `(y_points[i], t_grid[j])`: the bound
    /// `1 − (1 − |Ψ_ε(t)|)·delta_hat` minus `E|E(exp(ιtI(X₀ ≤ y)) | C)|`.
    pub margins: Vec<Vec<f64>>,
}

impl Lemma33Report {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the conditional-CF contraction bound at every state value `y`
/// with `|y − ξ_p| ≤ window_halfwidth` and `F(y) < 1`. At `F(y) = 1` the
/// conditional probability is identically one, so no `ε`-interior mass can
/// exist there; such levels are excluded from the window.
pub fn lemma33_check(
    chain: &FiniteMarkov,
    p: f64,
    epsilon: f64,
    window_halfwidth: f64,
    t_grid: &[f64],
) -> Result<Lemma33Report> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return domain(format!("lemma33_check: epsilon={epsilon} outside (0, 1/2)"));
    }
    if !(window_halfwidth > 0.0) {
        return domain("lemma33_check: window_halfwidth must be positive");
    }
    let xi = chain.quantile(p)?;
    let c5 = c5_probability(chain, xi);
    if c5.g >= p {
        return Err(Error::Precondition(format!(
            "contraction bound hypothesis violated: g(ξp) = {} ≥ p = {p}",
            c5.g
        )));
    }
    let y_points: Vec<f64> = chain
        .values()
        .iter()
        .copied()
        .filter(|&v| (v - xi).abs() <= window_halfwidth && chain.cdf(v) < 1.0)
        .collect();
    if y_points.is_empty() {
        return Err(Error::Precondition(
            "lemma33_check: no state value with F < 1 inside the window".into(),
        ));
    }
    let law = conditional_law(chain);
    let delta_hat = y_points
        .iter()
        .map(|&y| law.interior_mass(y, epsilon))
        .fold(f64::INFINITY, f64::min);
    if !(delta_hat > 0.0) {
        return Err(Error::Precondition(format!(
            "lemma33_check: P(ε < G < 1 − ε) vanishes in the window for ε = {epsilon}; try a smaller ε"
        )));
    }
    let margins = y_points
        .iter()
        .map(|&y| {
            t_grid
                .iter()
                .map(|&t| {
                    let bound = 1.0 - (1.0 - psi_modulus(epsilon, t)) * delta_hat;
                    bound - law.cf_modulus(y, t)
                })
                .collect()
        })
        .collect();
    Ok(Lemma33Report {
        p,
        xi_p: xi,
        g_xi: c5.g,
        epsilon,
        delta_hat,
        y_window: (xi - window_halfwidth, xi + window_halfwidth),
        y_points,
        t_grid: t_grid.to_vec(),
        margins,
    })
}

/// `√(log n)·(log log(n+1))^{1/4}`, the half-width of the `t` window on
/// which the cumulant expansion is stated.
pub fn taylor_window(n: usize) -> f64 {
    let n = n as f64;
    n.ln().max(0.0).sqrt() * (n + 1.0).ln().ln().max(0.0).powf(0.25)
}

/// Values of `H_n(t)` below this modulus are not logged.
pub const LOG_FLOOR: f64 = 1e-8;
/// Largest continuation step in `t`.
const MAX_STEP: f64 = 0.05;
const MIN_STEP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantReport {
    pub n: usize,
    /// Grid points kept (those with `|H_n(t)| ≥ LOG_FLOOR` along the path).
    pub t_grid: Vec<f64>,
    pub log_h: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// `residual·√n`.
    pub scaled: Vec<f64>,
    /// Grid points dropped because `H_n` came too close to zero.
    pub dropped: Vec<f64>,
    /// `χ_{r,n}` for `r = 0..=5`.
    pub cumulants: Vec<f64>,
}

/// Residual of the order-5 cumulant expansion of `log H_n(t)`.
pub fn cumulant_polynomial(cumulants: &[f64], t: f64) -> Complex64 {
    let it = Complex64::new(0.0, t);
    let mut pow = it;
    let mut fact = 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, &chi) in cumulants.iter().enumerate().skip(1) {
        if r >= 2 {
            pow *= it;
            fact *= r as f64;
            acc += pow * (chi / fact);
        }
    }
    acc
}

pub fn taylor_residual(chain: &FiniteMarkov, y: f64, n_grid: &[usize], t_grid: &[f64]) -> Result<Vec<CumulantReport>> {
    let t_max = t_grid.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    n_grid
        .iter()
        .map(|&n| {
            if t_max > taylor_window(n) {
                return Err(Error::Precondition(format!(
                    "taylor_residual: |t| = {t_max} exceeds the window {} at n = {n}",
                    taylor_window(n)
                )));
            }
            let st = standardization(chain, y, n)?;
            let cumulants = markov_cumulants(chain, y, n, 5)?;
            let h = |t: f64| cf_with(chain, y, n, t, st);
            let logs = tracked_logs(&h, t_grid);
            let mut rep = CumulantReport {
                n,
                t_grid: Vec::new(),
                log_h: Vec::new(),
                residuals: Vec::new(),
                scaled: Vec::new(),
                dropped: Vec::new(),
                cumulants: cumulants.clone(),
            };
            for (&t, lg) in t_grid.iter().zip(logs) {
                match lg {
                    Some(lg) => {
                        let r = (lg - cumulant_polynomial(&cumulants, t)).norm();
                        rep.t_grid.push(t);
                        rep.log_h.push(lg);
                        rep.residuals.push(r);
                        rep.scaled.push(r * (n as f64).sqrt());
                    }
                    None => rep.dropped.push(t),
                }
            }
            Ok(rep)
        })
        .collect()
}

/// Logarithm of `h` continued from `log h(0) = 0` along each grid point.
/// Positive and negative grid points are reached by marching outward from
/// zero, halving the step whenever the phase moves by more than `π/2`.
pub(crate) fn tracked_logs(h: &impl Fn(f64) -> Complex64, t_grid: &[f64]) -> Vec<Option<Complex64>> {
    let mut out = vec![None; t_grid.len()];
    for sign in [1.0, -1.0] {
        let mut idx: Vec<usize> = (0..t_grid.len())
            .filter(|&i| if sign > 0.0 { t_grid[i] >= 0.0 } else { t_grid[i] < 0.0 })
            .collect();
        idx.sort_by(|&a, &b| t_grid[a].abs().total_cmp(&t_grid[b].abs()));
        let (mut t, mut val, mut phase) = (0.0f64, Complex64::new(1.0, 0.0), 0.0f64);
        let mut alive = true;
        for i in idx {
            let target = t_grid[i];
            if target == 0.0 {
                out[i] = Some(Complex64::new(0.0, 0.0));
                continue;
            }
            while alive && t != target {
                let mut step = (target - t).abs().min(MAX_STEP);
                loop {
                    let next_t = if step >= (target - t).abs() {
                        target
                    } else {
                        t + sign * step
                    };
                    let next = h(next_t);
                    if next.norm() < LOG_FLOOR {
                        alive = false;
                        break;
                    }
                    let d = (next / val).arg();
                    if d.abs() > 0.5 * std::f64::consts::PI && step > MIN_STEP {
                        step *= 0.5;
                        continue;
                    }
                    phase += d;
                    t = next_t;
                    val = next;
                    break;
                }
            }
            if alive {
                out[i] = Some(Complex64::new(val.norm().ln(), phase));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub t: f64,
    pub modulus: f64,
    /// `exp(−t²/2)`.
    pub gaussian: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub n: usize,
    pub y: f64,
    pub points: Vec<EnvelopePoint>,
}

/// Exact `|H_n(t)|` along `t_grid`, with its ratio to the Gaussian CF.
pub fn cf_envelope(chain: &FiniteMarkov, y: f64, n: usize, t_grid: &[f64]) -> Result<EnvelopeReport> {
    let st = standardization(chain, y, n)?;
    let points = t_grid
        .iter()
        .map(|&t| {
            let modulus = cf_with(chain, y, n, t, st).norm();
            let gaussian = (-0.5 * t * t).exp();
            EnvelopePoint {
                t,
                modulus,
                gaussian,
                ratio: modulus / gaussian,
            }
        })
        .collect();
    Ok(EnvelopeReport { n, y, points })
}
