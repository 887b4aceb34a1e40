use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two points of a configuration coincide, so the Coulomb sum diverges.
    #[error("points {i} and {j} coincide; energy is infinite")]
    CoincidentPoints { i: usize, j: usize },

    #[error("center L={l} a={a} b={b} is outside the sRGB gamut")]
    CenterOutOfGamut { l: f64, a: f64, b: f64 },

    #[error("n={n}: {source}")]
    AtCount {
        n: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
