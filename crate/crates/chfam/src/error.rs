use thiserror::Error;

/// Errors surfaced by the numerical kernels and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be an even integer >= 8, got {0}")]
    GridSize(usize),

    #[error("grid half-length must be positive, got {0}")]
    GridLength(f64),

    #[error("non-finite value encountered in {context} (first bad node {index})")]
    NonFinite { context: &'static str, index: usize },

    #[error(
        "boundary decay check failed: |f| = {value:.3e} at the domain edge exceeds {threshold:.3e}"
    )]
    BoundaryDecay { value: f64, threshold: f64 },

    #[error("tail fit needs at least {needed} usable nodes in the window, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("solution blew up at t = {time:.6} (step {step}): {reason}")]
    BlowUp {
        time: f64,
        step: u64,
        reason: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("expression error: {0}")]
    Expr(String),
}

pub type Result<T> = std::result::Result<T, Error>;
