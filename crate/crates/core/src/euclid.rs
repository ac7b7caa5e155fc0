//! Great spheres of 𝕊ⁿ ⊂ ℝⁿ⁺¹, represented by linear subspaces.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use thiserror::Error;

use crate::chromatic::{map_ordered, Exec};
use crate::colorings::{sample_class, ColorIndex, ColoredConfig, ColoringError, ProceduralColoring};
use crate::exactnum::{NumError, Scalar};
use crate::geom::linalg::{dot, norm_sq, nullspace, rank, rref, scale};
use crate::geom::{GeomError, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EuclidError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("points span rank {rank}, more than {d}")]
    RankExceeds { rank: usize, d: usize },
    #[error("{0} is not on the unit sphere")]
    NotOnSphere(String),
    #[error("expected a subspace of dimension {expected}, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("too few points")]
    TooFewPoints,
}

/// A linear subspace of ℝ^{m}, stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GreatFlat {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl GreatFlat {
    /// The span of `vectors`, which must all have length `ambient`.
    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Result<GreatFlat, EuclidError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(GeomError::DimensionMismatch { expected: ambient, found: v.len() }.into());
        }
        let mut basis = vectors.to_vec();
        rref(&mut basis);
        Ok(GreatFlat { ambient, basis })
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows) == self.dim()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.coords().is_some_and(|x| self.contains_vector(x))
    }

    /// Normal vectors spanning the orthogonal complement.
    pub fn normals(&self) -> Vec<Vec<Scalar>> {
        nullspace(&self.basis, self.ambient)
    }
}

fn sphere_coords(p: &Point) -> Result<&[Scalar], EuclidError> {
    let x = p.coords().ok_or_else(|| EuclidError::NotOnSphere(p.to_string()))?;
    if !(norm_sq(x) - x[0].one_like()).is_zero() {
        return Err(EuclidError::NotOnSphere(p.to_string()));
    }
    Ok(x)
}

/// The span of `points` (on the unit sphere), padded to dimension `d` with
/// the first standard basis vectors that raise the rank.
pub fn great_flat_through(points: &[Point], d: usize) -> Result<GreatFlat, EuclidError> {
    let first = points.first().ok_or(EuclidError::TooFewPoints)?;
    let ambient = first.dim();
    if d > ambient {
        return Err(EuclidError::WrongDimension { expected: ambient, found: d });
    }
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        if p.dim() != ambient {
            return Err(GeomError::DimensionMismatch { expected: ambient, found: p.dim() }.into());
        }
        rows.push(sphere_coords(p)?.to_vec());
    }
    let r = rank(&rows);
    if r > d {
        return Err(EuclidError::RankExceeds { rank: r, d });
    }
    let mut flat = GreatFlat::span(ambient, &rows)?;
    for i in 0..ambient {
        if flat.dim() == d {
            break;
        }
        let mut e = vec![first.coords().unwrap()[0].zero_like(); ambient];
        e[i] = e[i].one_like();
        if !flat.contains_vector(&e) {
            let mut grown = flat.basis.clone();
            grown.push(e);
            flat = GreatFlat::span(ambient, &grown)?;
        }
    }
    Ok(flat)
}

/// A common direction of a great hypersphere and a great circle, with the two
/// antipodal sphere points along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreatIntersection {
    pub direction: Vec<Scalar>,
    /// `±direction/|direction|`; float-backed when `exact` is false.
    pub points: [Point; 2],
    pub exact: bool,
}

impl GreatIntersection {
    pub fn validate(&self, s: &GreatFlat, c: &GreatFlat) -> bool {
        self.direction.iter().any(|x| !x.is_zero())
            && s.contains_vector(&self.direction)
            && c.contains_vector(&self.direction)
            && (!self.exact || self.points.iter().all(|p| sphere_coords(p).is_ok() && s.contains(p) && c.contains(p)))
    }
}

/// Intersects a hyperplane subspace `s` with a 2-dimensional subspace `c`.
/// The intersection is never trivial; when `c ⊆ s` the first basis vector of
/// `c` is returned.
pub fn great_intersection(s: &GreatFlat, c: &GreatFlat) -> Result<GreatIntersection, EuclidError> {
    let m = s.ambient_dim();
    if c.ambient_dim() != m {
        return Err(GeomError::DimensionMismatch { expected: m, found: c.ambient_dim() }.into());
    }
    if s.dim() + 1 != m {
        return Err(EuclidError::WrongDimension { expected: m - 1, found: s.dim() });
    }
    if c.dim() != 2 {
        return Err(EuclidError::WrongDimension { expected: 2, found: c.dim() });
    }
    let nu = &s.normals()[0];
    let (c1, c2) = (&c.basis[0], &c.basis[1]);
    let (a, b) = (dot(nu, c1), dot(nu, c2));
    let direction = if a.is_zero() && b.is_zero() {
        c1.clone()
    } else {
        c1.iter().zip(c2).map(|(x, y)| &(&b * x) - &(&a * y)).collect()
    };
    let len_sq = norm_sq(&direction);
    let (unit, exact) = match len_sq.exact_sqrt() {
        Some(len) => (scale(&direction, &len.try_recip()?), true),
        None => {
            let len = len_sq.to_f64().sqrt();
            (direction.iter().map(|x| Scalar::float(x.to_f64() / len)).collect(), false)
        }
    };
    let neg: Vec<Scalar> = unit.iter().map(|x| -x).collect();
    Ok(GreatIntersection { direction, points: [Point::Finite(unit), Point::Finite(neg)], exact })
}

/// A great sphere with the colored points found on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreatWitness {
    pub flat: GreatFlat,
    pub defining: Vec<usize>,
    pub on_points: Vec<(Point, ColorIndex)>,
    pub colors: BTreeSet<ColorIndex>,
}

impl GreatWitness {
    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn validate(&self) -> bool {
        let on = self.on_points.iter().all(|(p, _)| self.flat.contains(p) && sphere_coords(p).is_ok());
        let colors: BTreeSet<ColorIndex> = self.on_points.iter().map(|(_, c)| *c).collect();
        on && colors == self.colors
    }
}

struct GreatScan<'a> {
    config: &'a ColoredConfig,
    flats: Vec<(Vec<usize>, GreatFlat, Vec<Scalar>)>,
}

impl<'a> GreatScan<'a> {
    /// Distinct great hyperspheres spanned by `n`-subsets, first subset kept.
    fn new(config: &'a ColoredConfig, exec: Exec) -> Result<Self, EuclidError> {
        let m = config.n();
        for (p, _) in config.points() {
            sphere_coords(p)?;
        }
        let d = m - 1;
        let subsets: Vec<Vec<usize>> = (0..config.len()).combinations(d).collect();
        let normals = map_ordered(&subsets, exec, |idx| {
            let rows: Vec<Vec<Scalar>> =
                idx.iter().map(|&i| config.points()[i].0.coords().unwrap().to_vec()).collect();
            let ns = nullspace(&rows, m);
            (ns.len() == 1).then(|| canonical(&ns[0]))
        });
        let mut seen = HashSet::new();
        let mut flats = Vec::new();
        for (idx, normal) in subsets.into_iter().zip(normals) {
            if let Some(nu) = normal {
                if seen.insert(nu.clone()) {
                    let rows: Vec<Vec<Scalar>> =
                        idx.iter().map(|&i| config.points()[i].0.coords().unwrap().to_vec()).collect();
                    flats.push((idx, GreatFlat::span(m, &rows)?, nu));
                }
            }
        }
        Ok(GreatScan { config, flats })
    }

    fn on(&self, normal: &[Scalar]) -> Vec<usize> {
        (0..self.config.len())
            .filter(|&i| dot(normal, self.config.points()[i].0.coords().unwrap()).is_zero())
            .collect()
    }

    fn witness(&self, flat: GreatFlat, defining: Vec<usize>, on: &[usize]) -> GreatWitness {
        let on_points: Vec<(Point, ColorIndex)> = on.iter().map(|&i| self.config.points()[i].clone()).collect();
        let colors = on_points.iter().map(|(_, c)| *c).collect();
        GreatWitness { flat, defining, on_points, colors }
    }

    fn color_count(&self, on: &[usize]) -> usize {
        on.iter().map(|&i| self.config.points()[i].1).collect::<BTreeSet<_>>().len()
    }
}

fn canonical(v: &[Scalar]) -> Vec<Scalar> {
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero normal");
    let inv = lead.try_recip().expect("nonzero");
    scale(v, &inv)
}

/// The great hypersphere through `n` config points carrying the most colors;
/// ties go to the lexicographically first spanning subset. If no `n` points
/// are independent, the deterministic completion of their span is used.
pub fn max_colors_great(config: &ColoredConfig, exec: Exec) -> Result<GreatWitness, EuclidError> {
    if config.is_empty() {
        return Err(EuclidError::TooFewPoints);
    }
    let scan = GreatScan::new(config, exec)?;
    let counts = map_ordered(&scan.flats, exec, |(_, _, nu)| scan.color_count(&scan.on(nu)));
    let best = counts.iter().enumerate().fold(None, |best: Option<usize>, (i, c)| match best {
        Some(b) if counts[b] >= *c => Some(b),
        _ => Some(i),
    });
    match best {
        Some(b) => {
            let (idx, flat, nu) = scan.flats[b].clone();
            Ok(scan.witness(flat, idx, &scan.on(&nu)))
        }
        None => {
            let points: Vec<Point> = config.points().iter().map(|(p, _)| p.clone()).collect();
            let flat = great_flat_through(&points, config.n() - 1)?;
            let on: Vec<usize> = (0..config.len()).collect();
            Ok(scan.witness(flat, on.clone(), &on))
        }
    }
}

/// Outcome of checking that no great hypersphere reaches `threshold` colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreatSharpnessReport {
    pub spheres_checked: usize,
    pub max_colors: usize,
    pub threshold: usize,
    pub violation_count: usize,
    /// The first violations in enumeration order (at most 100).
    pub violations: Vec<GreatWitness>,
}

/// Scans every great hypersphere spanned by config points for `threshold`
/// or more colors.
pub fn scan_great(config: &ColoredConfig, threshold: usize, exec: Exec) -> Result<GreatSharpnessReport, EuclidError> {
    let scan = GreatScan::new(config, exec)?;
    let hits = map_ordered(&scan.flats, exec, |(_, _, nu)| scan.on(nu));
    let mut report = GreatSharpnessReport {
        spheres_checked: scan.flats.len(),
        max_colors: 0,
        threshold,
        violation_count: 0,
        violations: Vec::new(),
    };
    for ((idx, flat, _), on) in scan.flats.iter().zip(hits) {
        let count = scan.color_count(&on);
        report.max_colors = report.max_colors.max(count);
        if count >= threshold {
            report.violation_count += 1;
            if report.violations.len() < 100 {
                report.violations.push(scan.witness(flat.clone(), idx.clone(), &on));
            }
        }
    }
    Ok(report)
}

/// Samples the Euclidean flag coloring of 𝕊ⁿ (both points of class 1 and
/// `per_class` points of every other class) and checks that no great
/// hypersphere has `n + 1` colors.
pub fn flag_euclidean_sharpness(n: usize, per_class: usize, seed: u64, exec: Exec) -> Result<GreatSharpnessReport, EuclidError> {
    let coloring = ProceduralColoring::FlagEuclidean { n };
    let mut points = sample_class(&coloring, ColorIndex(1), 2, seed)?;
    for i in 2..=coloring.k() {
        points.extend(sample_class(&coloring, ColorIndex(i), per_class, seed)?);
    }
    let config = ColoredConfig::from_coloring(&coloring, &points)?;
    scan_great(&config, n + 1, exec)
}
