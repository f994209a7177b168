use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec at position {position}: {message}")]
    InvalidSpec { position: usize, message: String },

    #[error("table is not a group: {0}")]
    NotAGroup(String),

    #[error("pq({p},{q}) is invalid: need primes p, q with p dividing q-1")]
    InvalidPQ { p: u64, q: u64 },

    #[error("group order {order} exceeds the table cap {cap}")]
    OrderCapExceeded { order: u128, cap: usize },

    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },

    #[error("cover too large: {0}")]
    CoverTooLarge(String),

    #[error("enumeration of {candidates} candidate tuples exceeds the cap {cap}")]
    EnumerationCapExceeded { candidates: u128, cap: u128 },

    #[error("subgroup lattice of a group of order {order} exceeds the cap {cap}")]
    LatticeCapExceeded { order: usize, cap: usize },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("{p} does not divide the group order {order}")]
    NotADivisor { p: u64, order: usize },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("group is not nonabelian simple: {0}")]
    NotSimple(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Clone for Error {
    fn clone(&self) -> Self {
        match self {
            Error::InvalidSpec { position, message } => Error::InvalidSpec {
                position: *position,
                message: message.clone(),
            },
            Error::NotAGroup(m) => Error::NotAGroup(m.clone()),
            Error::InvalidPQ { p, q } => Error::InvalidPQ { p: *p, q: *q },
            Error::OrderCapExceeded { order, cap } => Error::OrderCapExceeded {
                order: *order,
                cap: *cap,
            },
            Error::ClosureCapExceeded { cap } => Error::ClosureCapExceeded { cap: *cap },
            Error::CoverTooLarge(m) => Error::CoverTooLarge(m.clone()),
            Error::EnumerationCapExceeded { candidates, cap } => Error::EnumerationCapExceeded {
                candidates: *candidates,
                cap: *cap,
            },
            Error::LatticeCapExceeded { order, cap } => Error::LatticeCapExceeded {
                order: *order,
                cap: *cap,
            },
            Error::NotNormal => Error::NotNormal,
            Error::NotADivisor { p, order } => Error::NotADivisor { p: *p, order: *order },
            Error::IndexOutOfRange { index, len } => Error::IndexOutOfRange {
                index: *index,
                len: *len,
            },
            Error::NotSimple(m) => Error::NotSimple(m.clone()),
            Error::PreconditionViolated(m) => Error::PreconditionViolated(m.clone()),
            Error::Internal(m) => Error::Internal(m.clone()),
            Error::Io { path, source } => Error::Io {
                path: path.clone(),
                source: std::io::Error::new(source.kind(), source.to_string()),
            },
        }
    }
}

impl Error {
    /// Stable variant name, used when reporting errors in machine output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidSpec { .. } => "InvalidSpec",
            Error::NotAGroup(_) => "NotAGroup",
            Error::InvalidPQ { .. } => "InvalidPQ",
            Error::OrderCapExceeded { .. } => "OrderCapExceeded",
            Error::ClosureCapExceeded { .. } => "ClosureCapExceeded",
            Error::CoverTooLarge(_) => "CoverTooLarge",
            Error::EnumerationCapExceeded { .. } => "EnumerationCapExceeded",
            Error::LatticeCapExceeded { .. } => "LatticeCapExceeded",
            Error::NotNormal => "NotNormal",
            Error::NotADivisor { .. } => "NotADivisor",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotSimple(_) => "NotSimple",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::Internal(_) => "Internal",
            Error::Io { .. } => "Io",
        }
    }

    /// True for the errors raised when a configured size cap is hit.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::OrderCapExceeded { .. }
                | Error::ClosureCapExceeded { .. }
                | Error::CoverTooLarge(_)
                | Error::EnumerationCapExceeded { .. }
                | Error::LatticeCapExceeded { .. }
        )
    }
}
