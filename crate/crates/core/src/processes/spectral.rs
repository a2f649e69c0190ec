use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub min_value: f64,
    pub argmin: f64,
    pub grid_size: usize,
    pub pass: bool,
}

/// Evaluates `f_lambda` on `λ_j = −π + 2πj/grid_size`, `j = 1..=grid_size`
/// (so `π` is always included and `0` is included for even sizes) and
/// passes iff the minimum is strictly positive.
pub fn spectral_density_positivity_check<F: Fn(f64) -> f64>(f_lambda: F, grid_size: usize) -> Result<SpectralReport> {
    use std::f64::consts::PI;
    if grid_size == 0 {
        return domain("spectral check: grid_size must be positive");
    }
    let mut min_value = f64::INFINITY;
    let mut argmin = PI;
    for j in 1..=grid_size {
        let lambda = if 2 * j == grid_size {
            0.0
        } else if j == grid_size {
            PI
        } else {
            -PI + 2.0 * PI * j as f64 / grid_size as f64
        };
        let v = f_lambda(lambda);
        if !v.is_finite() {
            return domain(format!("spectral check: non-finite density at λ={lambda}"));
        }
        if v < min_value {
            min_value = v;
            argmin = lambda;
        }
    }
    Ok(SpectralReport {
        min_value,
        argmin,
        grid_size,
        pass: min_value > 0.0,
    })
}

/// Spectral density `|Σ_j θ_j e^{−ijλ}|² / 2π` of the latent MA series.
pub fn ma_spectral_density(theta: &[f64]) -> impl Fn(f64) -> f64 + '_ {
    move |lambda: f64| {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, th) in theta.iter().enumerate() {
            let a = j as f64 * lambda;
            re += th * a.cos();
            im -= th * a.sin();
        }
        (re * re + im * im) / (2.0 * std::f64::consts::PI)
    }
}
