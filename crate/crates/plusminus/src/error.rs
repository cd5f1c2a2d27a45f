use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("p^N = {p}^{n} does not fit the 62-bit residue type")]
    PrecisionTooLarge { p: u64, n: u32 },
    #[error("{0} is not a unit")]
    NotUnit(String),
    #[error("level {level} exceeds tower height {max}")]
    LevelOverflow { level: i64, max: i64 },
    #[error("curve rejected: {0}")]
    BadCurve(String),
    #[error("Honda check failed: {0}")]
    HondaCheckFailed(String),
    #[error("degree bound {degree} too small: {detail}")]
    InsufficientDegree { degree: usize, detail: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("module is not finitely generated over Z_p within degree bound {0}")]
    NotZpFinite(usize),
    #[error("internal arithmetic failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
