//! Sample quantiles of weakly dependent stationary series: plug-in
//! inference, analytic ground truth for several generative models, exact
//! finite-`n` oracles for finite-state Markov chains, and experiments that
//! measure how fast the law of `√n(ξ̂_n − ξ_p)` approaches its normal limit.

pub mod error;
pub mod estimators;
pub mod experiments;
pub mod numeric;
pub mod oracles;
pub mod presets;
pub mod processes;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
