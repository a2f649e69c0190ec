//! Generative models with their analytic ground truth.

mod facts;
mod marginal;
mod markov;
mod model;
mod simulate;
mod spectral;

pub use facts::{ma_autocorrelations, model_facts, AlphaBound, ModelFacts, SERIES_CAP, SERIES_TOL};
pub use marginal::MarginalLaw;
pub use markov::{dobrushin_coefficient, stationary_distribution, FiniteMarkov, CDF_TIE_TOL, MAX_STATES};
pub use model::{ProcessModel, TimeSeries, SCHEMA_VERSION};
pub use simulate::{simulate, simulate_stream};
pub use spectral::{ma_spectral_density, spectral_density_positivity_check, SpectralReport};

pub(crate) use simulate::draw;
