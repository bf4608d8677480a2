use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("kappa must be an integer >= 2 or a real > 1 (got {0})")]
    KappaOutOfRange(String),
    #[error("precision must be at least 64 bits (got {0})")]
    PrecisionTooLow(u32),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("cannot factor {0}")]
    NotFactorable(u64),
    #[error("comparison undecided for n = {n} after escalating to {max_bits} bits")]
    Undecided { n: u64, max_bits: u32 },
    #[error("bisection failed to converge: {0}")]
    NonConvergence(String),
    #[error("range guard exceeded: {0}")]
    RangeGuard(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
