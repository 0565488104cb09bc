use alloc::string::String;

/// Errors raised by the enumeration and asymptotics routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("series must have constant term 0 (got {0})")]
    NonzeroConstantTerm(String),
    #[error("series must have constant term 1 (got {0})")]
    ConstantTermNotOne(String),
    #[error("index {index} out of range (max {max})")]
    OutOfRange { index: usize, max: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cost guard: {what} = {value} exceeds cap {cap}")]
    CostGuard {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("singularity: {0}")]
    Singularity(String),
}

pub type Result<T> = core::result::Result<T, Error>;
