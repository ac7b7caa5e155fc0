//! Polychromatic sphere search, separating spheres, and the multiplicative
//! structure of signed norms on two colored lines.

mod coset;
mod kernel;
mod search;
mod separation;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::colorings::{ColorIndex, ColoringError};
use crate::exactnum::NumError;
use crate::geom::{GeomError, Point, Sphere};
use crate::moebius::MoebiusError;

pub use coset::{coset_closure_check, transfer, CosetClass, CosetModel, CosetReport, CosetViolation, Transfer};
pub use search::{
    enumerate_spheres, find_polychromatic, flag_sharpness, generic_sharpness, max_polychromatic, scan_spheres,
    two_line_sample, two_line_sharpness, Exec, SharpnessReport,
};
pub(crate) use search::map_ordered;
pub use separation::{separating_circle_5pts, separating_sphere_bruteforce, SeparationWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChromaticError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("sphere dimension {d} is not below the ambient dimension {n}")]
    BadDimension { d: usize, n: usize },
    #[error("too few points to determine a sphere")]
    TooFewPoints,
    #[error("target {target} exceeds the number of colors {k}")]
    TargetTooLarge { target: u32, k: u32 },
    #[error("expected {expected} points, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("input colors must be pairwise distinct")]
    ColorsNotDistinct,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("transfer maps need nonzero arguments")]
    ZeroInput,
    #[error("coset model has no membership oracle")]
    MissingOracle,
}

/// A sphere with the colored points found on it.
///
/// `defining` lists the indices, within the searched point list, of the points
/// that determined the sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolychromaticWitness {
    pub sphere: Sphere,
    pub defining: Vec<usize>,
    pub on_points: Vec<(Point, ColorIndex)>,
    pub colors: BTreeSet<ColorIndex>,
}

impl PolychromaticWitness {
    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Re-checks incidence, distinctness and the color set.
    pub fn validate(&self) -> Result<bool, GeomError> {
        for (i, (p, _)) in self.on_points.iter().enumerate() {
            if !self.sphere.contains(p)? || self.on_points[..i].iter().any(|(q, _)| q == p) {
                return Ok(false);
            }
        }
        let colors: BTreeSet<ColorIndex> = self.on_points.iter().map(|(_, c)| *c).collect();
        Ok(colors == self.colors)
    }
}
