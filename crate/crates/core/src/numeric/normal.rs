//! Univariate standard normal distribution function, density and quantile.
//!
//! `Φ` is evaluated through `erfc`, which keeps full relative precision in
//! the lower tail. The quantile starts from a rational approximation and
//! polishes it with Halley steps against that same `Φ`, so the round trip
//! `Φ(Φ⁻¹(p)) = p` holds to a few ulps.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

#[inline]
pub(crate) fn phi_unchecked(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal distribution function `Φ(x)`.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("std_normal_cdf: non-finite input {x}"));
    }
    Ok(phi_unchecked(x))
}

/// Lower-tail quantile for `p ≤ 1/2`, always returns a value ≤ 0.
fn lower_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    // Hastings-type starting point, absolute error below 5e-4.
    let t = (-2.0 * p.ln()).sqrt();
    let num = 2.515_517 + t * (0.802_853 + t * 0.010_328);
    let den = 1.0 + t * (1.432_788 + t * (0.189_269 + t * 0.001_308));
    let mut x = -(t - num / den);
    for _ in 0..4 {
        let err = phi_unchecked(x) - p;
        let dens = std_normal_pdf(x);
        if dens == 0.0 {
            break;
        }
        let u = err / dens;
        // Halley: the second derivative of Φ is -x·φ(x).
        let step = u / (1.0 + 0.5 * x * u);
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Inverse of `Φ`.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("std_normal_quantile: p={p} outside (0,1)"));
    }
    Ok(quantile_unchecked(p))
}

pub(crate) fn quantile_unchecked(p: f64) -> f64 {
    if p <= 0.5 {
        lower_quantile(p)
    } else {
        -lower_quantile(1.0 - p)
    }
}

/// `Φ(-x)` without cancellation for large positive `x`.
#[inline]
pub(crate) fn upper_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

pub(crate) const TWO_PI: f64 = 2.0 * PI;
