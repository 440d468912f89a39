use thiserror::Error;

use crate::modmath::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("discriminant b^2 - 4c vanishes for b = {b}, c = {c}")]
    ZeroDiscriminant { b: i64, c: i64 },
    #[error("p = {p} divides the discriminant {d}")]
    DiscriminantDivisible { p: u64, d: i64 },
    #[error("window length {len} exceeds p = {p}")]
    WindowTooLong { len: usize, p: u64 },
    #[error("index {n} must be below p = {p}")]
    IndexTooLarge { n: u64, p: u64 },
    #[error("{what} = {value} is outside the supported range")]
    OutOfRange { what: &'static str, value: i64 },
    #[error("p = {p} divides {what}")]
    NotCoprime { p: u64, what: &'static str },
    #[error("case {requested} does not match parameters (actual case {actual})")]
    CaseMismatch { requested: &'static str, actual: &'static str },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
