use crate::index::{Index, IndexError};
use crate::kernel::KernelError;
use crate::linalg::LinalgError;
use crate::rcpoly::RcError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("insufficient precision: need doubled trace {need}, have {have}")]
    InsufficientPrecision { need: i64, have: i64 },
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("divisor must have constant term 1")]
    NonUnitDivisor,
    #[error("not a square: recursion fails at {0}")]
    NotASquare(Index),
    #[error("not an eigenform: {0}")]
    NotEigenform(String),
    #[error("basis not T({0})-stable")]
    NotStable(u64),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("no representation in the generator basis")]
    NoRepresentation,
    #[error("cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Rc(#[from] RcError),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
