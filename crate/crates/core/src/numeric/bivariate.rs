//! Standard bivariate normal distribution function.
//!
//! Uses the one-dimensional representation over the correlation,
//!
//! ```text
//! Φ₂(h, k; ρ) = Φ(h)Φ(k) + (1/2π) ∫₀^{asin ρ} exp(-(h² - 2hk·sinθ + k²) / (2cos²θ)) dθ
//! ```
//!
//! obtained from Plackett's identity `∂Φ₂/∂ρ = φ₂(h, k; ρ)` and the
//! substitution `r = sin θ`. The integrand is bounded by one and smooth on
//! the whole range, so adaptive Gauss–Kronrod converges quickly even for
//! `|ρ|` within 1e-12 of one.

use super::normal::{phi_unchecked, TWO_PI};
use crate::error::{domain, Result};

/// Largest admissible `|ρ|`; the comonotone limits are handled by callers.
pub const MAX_ABS_CORR: f64 = 1.0 - 1e-12;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One G7/K15 panel: returns (Kronrod estimate, |Kronrod - Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive G7–K15 quadrature: repeatedly bisects the interval
/// with the largest error estimate until the summed estimate is below
/// `tol` or the subdivision budget is spent.
pub(crate) fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    const MAX_INTERVALS: usize = 400;
    let (v, e) = gk15(f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        let total: f64 = parts.iter().map(|p| p.2).sum();
        if total_err <= tol.max(4.0 * f64::EPSILON * total.abs()) || parts.len() >= MAX_INTERVALS {
            return parts.iter().map(|p| p.2).collect::<super::CompensatedSum>().value();
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// `P(Z₁ ≤ h, Z₂ ≤ k)` for standard normals with correlation `rho`.
pub fn bivariate_normal_cdf(h: f64, k: f64, rho: f64) -> Result<f64> {
    if !h.is_finite() || !k.is_finite() {
        return domain(format!("bivariate_normal_cdf: non-finite limits ({h}, {k})"));
    }
    if !(rho.abs() <= MAX_ABS_CORR) {
        return domain(format!(
            "bivariate_normal_cdf: |rho|={} exceeds {MAX_ABS_CORR}",
            rho.abs()
        ));
    }
    let base = phi_unchecked(h) * phi_unchecked(k);
    if rho == 0.0 {
        return Ok(base);
    }
    let hh = 0.5 * (h * h + k * k);
    let hk = h * k;
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        ((hk * s - hh) / (c * c)).exp()
    };
    let upper = rho.asin();
    let (a, b) = if upper >= 0.0 { (0.0, upper) } else { (upper, 0.0) };
    let mut integral = adaptive_gk(&integrand, a, b, 1e-14);
    if upper < 0.0 {
        integral = -integral;
    }
    let v = base + integral / TWO_PI;
    // Clamp into the Fréchet bounds; only ever moves by rounding.
    let (ph, pk) = (phi_unchecked(h), phi_unchecked(k));
    let lo = (ph + pk - 1.0).max(0.0);
    let hi = ph.min(pk);
    Ok(v.clamp(lo, hi))
}
