use num_bigint::BigInt;
use thiserror::Error;

use crate::fan::FanViolation;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("the map does not send the source sublattice into the target sublattice")]
    IncompatibleSublattices,

    #[error("rank mismatch: domain rank {domain} != codomain rank {codomain}")]
    RankMismatch { domain: usize, codomain: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid fan: {0}")]
    InvalidFan(#[from] FanViolation),

    #[error("fan is not complete")]
    NotComplete,

    #[error("ray {0:?} lies outside the support of the fan")]
    RayOutsideSupport(Vec<BigInt>),

    #[error("ray {0:?} is already a ray of the fan")]
    DuplicateRay(Vec<BigInt>),

    #[error("{0:?} is not a ray of the fan")]
    NotARay(Vec<BigInt>),

    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<BigInt>),

    #[error("ambient dimension {0} unsupported here (maximum 3)")]
    DimensionUnsupported(usize),

    #[error("face index {index} out of range at level {level}")]
    IndexOutOfRange { level: usize, index: usize },

    #[error("induced map at level {level}, tuple {tuple:?} is not an isogeny")]
    NotIsogeny { level: usize, tuple: Vec<usize> },

    #[error("no rational fan isomorphism exists for the given fans")]
    NoRationalIsomorphism,

    #[error("no explicit chart generators are known for cone {0:?} in paper-list mode")]
    UnknownPaperChart(Vec<usize>),

    #[error("nerve mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("endomorphism is not injective")]
    NotInjective,

    #[error("witness vector does not lie in the top-term slice")]
    WitnessOutsideSlice,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
