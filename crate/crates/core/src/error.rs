use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NftError {
    /// An argument lies outside the mathematical domain of the operation
    /// (negative coordinate, `k = 0` for an unhatted quantity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The spectral parameter lies outside the region where the requested
    /// quantity is bounded or defined.
    #[error("region error: {0}")]
    Region(String),

    /// The data cannot supply what the operation needs, usually derivatives
    /// of too high an order.
    #[error("capability error: {0}")]
    Capability(String),

    /// An integrator hit its step-size floor before meeting the tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A profile failed its tail check against the declared winding target.
    #[error("decay error: {0}")]
    Decay(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl NftError {
    /// Short machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            NftError::Domain(_) => "domain",
            NftError::Region(_) => "region",
            NftError::Capability(_) => "capability",
            NftError::Convergence(_) => "convergence",
            NftError::Decay(_) => "decay",
            NftError::Parse { .. } => "parse",
            NftError::Parameter(_) => "parameter",
            NftError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for NftError {
    fn from(e: std::io::Error) -> Self {
        NftError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, NftError>;
