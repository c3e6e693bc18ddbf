use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("index sets do not match")]
    IndexMismatch,
    #[error("ambient parameters (n, k) do not match")]
    ParamMismatch,
    #[error("lattice set is not convex")]
    NotConvex,
    #[error("start class is not a member of the set")]
    StartNotMember,
    #[error("target class is not in the convex closure of the generators")]
    TargetNotInClosure,
    #[error("zero set of the exponent vector is not a principal down-set")]
    NotPrincipalDownSet,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
