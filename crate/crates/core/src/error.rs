use thiserror::Error;

use crate::packing::Witness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is zero")]
    ZeroElement,
    #[error("field size {p}^{k} exceeds 2^62")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element {0} does not belong to this field")]
    NotInField(u64),
    #[error("no prime found in [{lo}, {hi}] after {draws} draws")]
    NoPrimeFound { lo: u64, hi: u64, draws: u64 },
    #[error("step 2 exceeded its budget of {0} candidate draws")]
    StepBudgetExceeded(u64),
    #[error("enumeration of {count} vectors exceeds cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u64 },
    #[error("t = {t} exceeds L = {l}")]
    TExceedsL { t: u32, l: u32 },
    #[error("p = {0} is not congruent to 3 or 5 modulo 8")]
    WrongResidueClass(u64),
    #[error("packing set is not certified")]
    NotCertified,
    #[error("syndrome collision contradicts the packing certificate")]
    CertificationContradiction(Box<Witness>),
    #[error("malformed input: {0}")]
    Malformed(String),
}
