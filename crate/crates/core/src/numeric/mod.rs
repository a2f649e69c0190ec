//! Deterministic numerical primitives. Everything here is a pure function.

mod binomial;
mod bivariate;
mod empirical;
mod normal;

pub use binomial::{binomial_upper_tail, CompensatedSum};
pub use bivariate::{bivariate_normal_cdf, MAX_ABS_CORR};
pub use empirical::{
    edf_eval, kolmogorov_distance, lattice_kolmogorov_distance, quantile_rank, sample_quantile, Edf, GridCdf,
};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile};

pub(crate) use normal::{phi_unchecked, quantile_unchecked, upper_tail};
