//! Construction of finite solvable groups of a given order, up to isomorphism,
//! by induction along the F-central series.

pub mod algebra;
pub mod catalog;
pub mod cohom;
pub mod cover;
pub mod descend;
pub mod fclass1;
pub mod finite;
pub mod linalg;
pub mod matgrp;
pub mod pcgroup;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("orbit budget exceeded after {0} points")]
    OrbitBudgetExceeded(usize),
    #[error("stabilizer budget exceeded after {0} points")]
    StabilizerBudgetExceeded(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("tail vector is not a 2-cocycle")]
    InconsistentTail,
    #[error("element does not normalize the acting group")]
    NotNormalizing,
    #[error("order {0} is not of the form 2^a*3")]
    WrongOrderShape(u64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::CapExceeded(_) | Error::OrbitBudgetExceeded(_) | Error::StabilizerBudgetExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Caps on the exhaustive parts of the algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest orbit (or enumerated point set) before giving up.
    pub orbit: usize,
    /// Largest number of enumerated subspaces.
    pub subspaces: usize,
    /// Largest enumerated matrix group or stabilizer.
    pub elements: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { orbit: 1 << 22, subspaces: 1 << 22, elements: matgrp::ELEMENT_BUDGET }
    }
}
