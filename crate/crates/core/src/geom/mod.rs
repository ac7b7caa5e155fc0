//! Points of ℝⁿ ∪ {∞}, generalized spheres and the predicates on them.

pub mod linalg;
mod point;
mod predicates;
mod sphere;
mod subsphere;

use thiserror::Error;

use crate::exactnum::NumError;

pub use point::Point;
pub use predicates::{
    concyclic, cross_ratio, generic_lifted_det, lift, lifted_rank, power_condition, signed_norm,
    Complex, CrossRatio, OriginLine,
};
pub use sphere::{on_sphere, separated, side, sphere_through, Hypersphere, SideLabel};
pub use subsphere::{smallest_sphere, Flat, Sphere, SubSphere};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("duplicate points")]
    DuplicatePoints,
    #[error("expected {expected} points, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("at most one point may be infinity")]
    MultipleInfinity,
    #[error("degenerate sphere: {0}")]
    Degenerate(&'static str),
    #[error("point lies on the sphere")]
    PointOnSphere,
    #[error("need at least two distinct points")]
    TooFewPoints,
    #[error("the points span the whole space; no proper sphere contains them")]
    NoProperSphere,
    #[error("point is not on the line")]
    NotOnLine,
    #[error("line direction must be an exact unit vector in the plane")]
    NotUnitDirection,
    #[error("operation requires finite points")]
    InfinitePoint,
    #[error("operation requires dimension {0}")]
    UnsupportedDimension(usize),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), GeomError> {
    if expected == found {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch { expected, found })
    }
}
