use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("budget exceeded: {what} needs {needed} steps, limit {limit}")]
    BudgetExceeded { what: &'static str, needed: u128, limit: u64 },
    #[error("x divides the modulus {0}")]
    DivisibleByX(String),
    #[error("valuation-one classification is undefined at p = 2")]
    ValuationOneAtTwo,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
