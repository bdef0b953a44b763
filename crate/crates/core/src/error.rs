use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),

    #[error("invalid surface signature: {0}")]
    InvalidSignature(String),

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange { what: &'static str, index: usize, max: usize },

    #[error("length {got} does not match lattice rank {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("generator {0} has no inverse action; negative powers are unavailable")]
    NotInvertible(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("wrong alphabet: {0}")]
    WrongAlphabet(String),

    #[error("braid closure is not null-homologous: [b] is not in the image of a - phi_*(a)")]
    NotNullHomologous,

    #[error("supplied class a does not satisfy [b] = a - phi_*(a)")]
    InconsistentA,

    #[error("operation requires a planar surface, got genus {0}")]
    NonPlanar(u32),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("validation failed: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SignatureMismatch(..) => "signature_mismatch",
            Error::InvalidSignature(_) => "invalid_signature",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidGenerator(_) => "invalid_generator",
            Error::NotInvertible(_) => "not_invertible",
            Error::Overflow(_) => "overflow",
            Error::WrongAlphabet(_) => "wrong_alphabet",
            Error::NotNullHomologous => "not_null_homologous",
            Error::InconsistentA => "inconsistent_a",
            Error::NonPlanar(_) => "non_planar",
            Error::Parse { .. } => "parse",
            Error::Invalid(_) => "invalid",
            Error::Precondition(_) => "precondition",
            Error::Internal(_) => "internal",
        }
    }

    /// Parse and validation problems are the caller's input; everything else is a domain error.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Invalid(_)
                | Error::InvalidSignature(_)
                | Error::InvalidGenerator(_)
                | Error::LengthMismatch { .. }
                | Error::IndexOutOfRange { .. }
                | Error::WrongAlphabet(_)
                | Error::SignatureMismatch(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
