use rand::distr::Open01;
use rand::Rng;
use rand_distr::StandardNormal;

use super::model::{ProcessModel, TimeSeries};
use crate::error::{domain, Result};
use crate::rng::{stream, StreamRng};

/// Draws a stationary sample of length `n` from stream 0 of `seed`.
pub fn simulate(model: &ProcessModel, n: usize, seed: u64) -> Result<TimeSeries> {
    simulate_stream(model, n, seed, 0)
}

/// Same as [`simulate`] on an explicit stream of `seed`.
pub fn simulate_stream(model: &ProcessModel, n: usize, seed: u64, stream_id: u64) -> Result<TimeSeries> {
    if n == 0 {
        return domain("simulate: n must be at least 1");
    }
    let mut rng = stream(seed, stream_id);
    let values = draw(model, n, &mut rng);
    Ok(TimeSeries {
        values,
        model_id: model.id().to_string(),
        seed,
    })
}

pub(crate) fn draw(model: &ProcessModel, n: usize, rng: &mut StreamRng) -> Vec<f64> {
    match model {
        ProcessModel::Iid { marginal } => (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                marginal.quantile(u).expect("open interval")
            })
            .collect(),
        ProcessModel::GaussianMa { theta, marginal } => {
            let m = theta.len() - 1;
            let eps: Vec<f64> = (0..n + m).map(|_| rng.sample(StandardNormal)).collect();
            (0..n)
                .map(|t| {
                    // y_t = Σ_j θ_j ε_{t−j}, with ε shifted by m
                    let y: f64 = theta.iter().enumerate().map(|(j, th)| th * eps[t + m - j]).sum();
                    marginal.from_latent(y)
                })
                .collect()
        }
        ProcessModel::DoeblinCopula {
            marginal,
            retain,
            latent_corr,
        } => {
            let innov = (1.0 - latent_corr * latent_corr).sqrt();
            let mut w: f64 = rng.sample(StandardNormal);
            let mut out = Vec::with_capacity(n);
            out.push(marginal.from_latent(w));
            for _ in 1..n {
                let u: f64 = rng.random();
                let z: f64 = rng.sample(StandardNormal);
                w = if u < *retain { latent_corr * w + innov * z } else { z };
                out.push(marginal.from_latent(w));
            }
            out
        }
        ProcessModel::FiniteMarkov(chain) => {
            let pick = |probs: &[f64], u: f64| -> usize {
                let mut acc = 0.0;
                for (i, &p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        return i;
                    }
                }
                // rounding: fall back to the last state with positive mass
                probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
            };
            let mut s = pick(chain.stationary(), rng.random());
            let mut out = Vec::with_capacity(n);
            out.push(chain.values()[s]);
            for _ in 1..n {
                s = pick(&chain.transition()[s], rng.random());
                out.push(chain.values()[s]);
            }
            out
        }
    }
}
