use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported type tag {0:?}")]
    UnsupportedType(String),
    #[error("invalid diagram automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("not stable under the automorphism: {0}")]
    NotThetaStable(String),
    #[error("invalid parahoric: {0}")]
    InvalidParahoric(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("input is not invariant: {0}")]
    NotInvariant(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("support bound exceeded: {0}")]
    SupportBound(String),
    #[error("arithmetic: {0}")]
    Arithmetic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
