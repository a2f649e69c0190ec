//! Plug-in inference for `ξ_p` from one observed series: Gaussian kernel
//! density at the sample quantile, a Bartlett lag-window estimate of the
//! indicator long-run variance, and normal-approximation intervals.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{quantile_unchecked, sample_quantile, std_normal_pdf, CompensatedSum, Edf};
use crate::processes::{ModelFacts, TimeSeries};

/// Kernel bandwidth choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    /// `0.9·min(sd, IQR/1.34)·n^{−1/5}`; the IQR term is skipped when it is zero.
    #[default]
    Auto,
    Fixed(f64),
}

/// Bartlett truncation lag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Lags {
    /// `⌈1.3·n^{1/3}⌉`.
    #[default]
    Auto,
    Fixed(usize),
}

/// Where the variance components of an interval come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VarianceSource {
    /// Kernel density and lag-window estimates from the sample itself.
    #[default]
    PlugIn,
    /// The model's exact `f(ξ_p)` and `σ²_∞(ξ_p)`.
    Analytic(ModelFacts),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct EstimateOptions {
    pub bandwidth: Bandwidth,
    pub lags: Lags,
    pub variance: VarianceSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileEstimate {
    pub p: f64,
    pub n: usize,
    pub level: f64,
    pub point: f64,
    pub f_hat: f64,
    pub sigma2_hat: f64,
    pub tau2_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// `"plug_in"` or `"analytic"`.
    pub source: String,
    /// Kernel bandwidth and Bartlett lag actually used (plug-in only).
    pub bandwidth: Option<f64>,
    pub lags: Option<usize>,
}

impl QuantileEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_hi - self.ci_lo)
    }

    pub fn covers(&self, x: f64) -> bool {
        self.ci_lo <= x && x <= self.ci_hi
    }
}

fn sample_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().copied().collect::<CompensatedSum>().value() / n;
    let ss = x
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .collect::<CompensatedSum>()
        .value();
    (ss / (n - 1.0)).sqrt()
}

/// Silverman's rule of thumb. Requires `n ≥ 2` and a non-constant sample.
pub fn silverman_bandwidth(sample: &[f64]) -> Result<f64> {
    if sample.len() < 2 {
        return domain("automatic bandwidth needs at least two observations");
    }
    let sd = sample_sd(sample);
    if !(sd > 0.0) {
        return domain("automatic bandwidth undefined: sample variance is zero");
    }
    let edf = Edf::new(sample)?;
    let iqr = sample_quantile(&edf, 0.75)? - sample_quantile(&edf, 0.25)?;
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (sample.len() as f64).powf(-0.2))
}

fn resolve_bandwidth(sample: &[f64], bandwidth: Bandwidth) -> Result<f64> {
    match bandwidth {
        Bandwidth::Auto => silverman_bandwidth(sample),
        Bandwidth::Fixed(h) if h > 0.0 && h.is_finite() => Ok(h),
        Bandwidth::Fixed(h) => domain(format!("bandwidth {h} must be positive")),
    }
}

/// `(nh)⁻¹ Σᵢ φ((y − Xᵢ)/h)`.
pub fn kde_at(sample: &TimeSeries, y: f64, bandwidth: Bandwidth) -> Result<f64> {
    if sample.is_empty() {
        return domain("kde_at: empty sample");
    }
    let h = resolve_bandwidth(&sample.values, bandwidth)?;
    Ok(kde_with(&sample.values, y, h))
}

fn kde_with(x: &[f64], y: f64, h: f64) -> f64 {
    let s: CompensatedSum = x.iter().map(|&v| std_normal_pdf((y - v) / h)).collect();
    s.value() / (x.len() as f64 * h)
}

/// Lag-window estimate together with its truncation lag and clipping flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LongRunVariance {
    /// `max(raw, 0)`.
    pub value: f64,
    pub raw: f64,
    pub lags: usize,
    pub clipped: bool,
}

pub fn auto_lags(n: usize) -> usize {
    (1.3 * (n as f64).cbrt()).ceil() as usize
}

/// `γ̂₀ + 2 Σ_{k=1}^{b} (1 − k/(b+1)) γ̂_k` from autocovariances `γ̂₀..γ̂_b`.
pub fn bartlett_from_autocovariances(gamma: &[f64]) -> LongRunVariance {
    let b = gamma.len().saturating_sub(1);
    let mut acc = CompensatedSum::new();
    if let Some(&g0) = gamma.first() {
        acc.add(g0);
    }
    for (k, &g) in gamma.iter().enumerate().skip(1) {
        acc.add(2.0 * (1.0 - k as f64 / (b + 1) as f64) * g);
    }
    let raw = acc.value();
    LongRunVariance {
        value: raw.max(0.0),
        raw,
        lags: b,
        clipped: raw < 0.0,
    }
}

/// Sample autocovariances `γ̂_k = n⁻¹ Σ_{i} cᵢ c_{i+k}` of the centred
/// series `c`, for `k = 0..=lags`.
pub fn autocovariances(c: &[f64], lags: usize) -> Vec<f64> {
    let n = c.len();
    (0..=lags.min(n.saturating_sub(1)))
        .map(|k| {
            let s: CompensatedSum = c.iter().zip(&c[k..]).map(|(a, b)| a * b).collect();
            s.value() / n as f64
        })
        .collect()
}

/// Bartlett estimate for an arbitrary 0/1 (or real) series, centred at its mean.
pub fn bartlett_longrun_variance(series: &[f64], lags: usize) -> LongRunVariance {
    let n = series.len() as f64;
    let mean = series.iter().copied().collect::<CompensatedSum>().value() / n;
    let c: Vec<f64> = series.iter().map(|v| v - mean).collect();
    bartlett_from_autocovariances(&autocovariances(&c, lags))
}

/// Lag-window estimate of `σ²_∞(y)` from the indicators `I(Xᵢ ≤ y)`,
/// centred at `F_n(y)`. The lag is capped at `n − 1`.
pub fn indicator_longrun_variance(sample: &TimeSeries, y: f64, lags: Lags) -> Result<LongRunVariance> {
    let n = sample.len();
    if n < 8 {
        return Err(Error::Precondition(format!(
            "indicator_longrun_variance needs n ≥ 8, got {n}"
        )));
    }
    let b = match lags {
        Lags::Auto => auto_lags(n),
        Lags::Fixed(b) => b,
    }
    .min(n - 1);
    let ind: Vec<f64> = sample.values.iter().map(|&v| if v <= y { 1.0 } else { 0.0 }).collect();
    Ok(bartlett_longrun_variance(&ind, b))
}

/// Sample quantile with a normal-approximation interval of nominal `level`.
pub fn estimate_quantile_ci(
    sample: &TimeSeries,
    p: f64,
    level: f64,
    options: &EstimateOptions,
) -> Result<QuantileEstimate> {
    if !(p > 0.0 && p < 1.0) || !(level > 0.0 && level < 1.0) {
        return domain(format!(
            "estimate_quantile_ci: p={p} and level={level} must lie in (0,1)"
        ));
    }
    let n = sample.len();
    if n < 16 {
        return Err(Error::Precondition(format!(
            "estimate_quantile_ci needs n ≥ 16, got {n}"
        )));
    }
    let point = sample_quantile(&Edf::new(&sample.values)?, p)?;
    let (f_hat, sigma2_hat, source, bandwidth, lags) = match &options.variance {
        VarianceSource::PlugIn => {
            let h = resolve_bandwidth(&sample.values, options.bandwidth)?;
            let f_hat = kde_with(&sample.values, point, h);
            let lrv = indicator_longrun_variance(sample, point, options.lags)?;
            if !(f_hat > 0.0) || lrv.clipped || !(lrv.value > 0.0) {
                return Err(Error::PlugIn {
                    f_hat,
                    sigma2_hat: lrv.raw,
                    clipped: lrv.clipped,
                });
            }
            (f_hat, lrv.value, "plug_in", Some(h), Some(lrv.lags))
        }
        VarianceSource::Analytic(facts) => {
            if facts.p != p {
                return Err(Error::Precondition(format!(
                    "analytic facts are for p={}, estimate requested at p={p}",
                    facts.p
                )));
            }
            let Some(f) = facts.density_at_xi else {
                return Err(Error::Precondition("analytic facts carry no density at ξ_p".into()));
            };
            (f, facts.sigma2_inf, "analytic", None, None)
        }
    };
    let tau2_hat = sigma2_hat / (f_hat * f_hat);
    let z = quantile_unchecked(0.5 * (1.0 + level));
    let half = z * (tau2_hat / n as f64).sqrt();
    Ok(QuantileEstimate {
        p,
        n,
        level,
        point,
        f_hat,
        sigma2_hat,
        tau2_hat,
        ci_lo: point - half,
        ci_hi: point + half,
        source: source.into(),
        bandwidth,
        lags,
    })
}

/// `√n(ξ̂_n − ξ_p)/τ_∞` with the model's exact `ξ_p` and `τ_∞`.
pub fn normalized_statistic(sample: &TimeSeries, facts: &ModelFacts, p: f64) -> Result<f64> {
    let tau = checked_tau(facts, p)?;
    let point = sample_quantile(&Edf::new(&sample.values)?, p)?;
    Ok((sample.len() as f64).sqrt() * (point - facts.xi_p) / tau)
}

pub(crate) fn checked_tau(facts: &ModelFacts, p: f64) -> Result<f64> {
    if facts.p != p {
        return Err(Error::Precondition(format!(
            "facts are for p={}, statistic requested at p={p}",
            facts.p
        )));
    }
    match facts.tau2_inf {
        Some(t) if t > 0.0 => Ok(t.sqrt()),
        _ => Err(Error::Precondition("τ²_∞ unavailable: (C.1) does not hold".into())),
    }
}
