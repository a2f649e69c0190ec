use thiserror::Error;

/// Errors surfaced by the library.
///
/// The variants line up with the CLI exit codes: `Config` → 2,
/// `Domain`/`Precondition`/`PlugIn`/`Reducible` → 3, `Resource` → 4.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("chain is reducible; closed class {class:?} does not reach every state")]
    Reducible { class: Vec<usize> },

    #[error("variance plug-in failed: f_hat={f_hat}, sigma2_hat={sigma2_hat}, clipped={clipped}")]
    PlugIn { f_hat: f64, sigma2_hat: f64, clipped: bool },
}

impl Error {
    /// Process exit code for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Domain(_) | Error::Precondition(_) | Error::PlugIn { .. } | Error::Reducible { .. } => 3,
            Error::Resource(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
