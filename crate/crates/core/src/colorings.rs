//! Full colorings of ℝⁿ ∪ {∞} (or of 𝕊ⁿ ⊂ ℝⁿ⁺¹) given by rules, and seeded
//! sampling of their color classes.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{norm_class_of, Backend, NormClass, Scalar};
use crate::geom::linalg::{norm_sq, rank};
use crate::geom::{generic_lifted_det, GeomError, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("point {0} is outside the coloring's domain")]
    OutOfDomain(String),
    #[error("coloring needs exact coordinates")]
    NotExact,
    #[error("color {0} is not in 1..={1}")]
    InvalidColor(u32, u32),
    #[error("color class {class} has {size} points, {requested} requested")]
    ClassTooSmall { class: u32, size: usize, requested: usize },
    #[error("invalid coloring: {0}")]
    Invalid(String),
    #[error("sampling gave up after {0} attempts")]
    SamplingExhausted(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A color in `1..=k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorIndex(pub u32);

impl fmt::Display for ColorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coloring rules.
///
/// * `FlagInversive`: 0 ↦ 1, ∞ ↦ 2, otherwise 2 + index of the last nonzero
///   coordinate; `k = n + 2`.
/// * `GenericPoints`: the i-th listed point gets color i, everything else `k`.
/// * `TwoLine`: on the X-axis norms in `√2·Q*` get 4 and in `Q*` get 5; on the
///   Y-axis norms in `θ·Q*` get 2 and in `θ³·Q*` get 3; the rest of the axes
///   get 1. With `extended`, points off the axes get 1 too.
/// * `FlagEuclidean`: on 𝕊ⁿ ⊂ ℝⁿ⁺¹, the index of the last nonzero coordinate;
///   `k = n + 1`.
/// * `PointListBackground`: listed points with listed colors, else `background`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProceduralColoring {
    FlagInversive { n: usize },
    GenericPoints { n: usize, k: u32, points: Vec<Point> },
    TwoLine { extended: bool },
    FlagEuclidean { n: usize },
    PointListBackground { points: Vec<Point>, colors: Vec<ColorIndex>, background: ColorIndex },
}

impl ProceduralColoring {
    pub fn validate(&self) -> Result<(), ColoringError> {
        let distinct = |pts: &[Point]| pts.iter().all_unique();
        match self {
            ProceduralColoring::FlagInversive { n } | ProceduralColoring::FlagEuclidean { n } if *n == 0 => {
                Err(ColoringError::Invalid("dimension must be positive".into()))
            }
            ProceduralColoring::GenericPoints { n, k, points } => {
                if points.len() + 1 != *k as usize {
                    return Err(ColoringError::Invalid(format!("expected {} points for k = {k}", k - 1)));
                }
                if points.iter().any(|p| p.dim() != *n) || !distinct(points) {
                    return Err(ColoringError::Invalid("points must be distinct and of dimension n".into()));
                }
                Ok(())
            }
            ProceduralColoring::PointListBackground { points, colors, background } => {
                if points.len() != colors.len() {
                    return Err(ColoringError::Invalid("points and colors differ in length".into()));
                }
                let n = points.first().map_or(0, Point::dim);
                if points.iter().any(|p| p.dim() != n) || !distinct(points) {
                    return Err(ColoringError::Invalid("points must be distinct and of one dimension".into()));
                }
                if colors.iter().chain([background]).any(|c| c.0 == 0) {
                    return Err(ColoringError::Invalid("colors start at 1".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Number of colors.
    pub fn k(&self) -> u32 {
        match self {
            ProceduralColoring::FlagInversive { n } => *n as u32 + 2,
            ProceduralColoring::GenericPoints { k, .. } => *k,
            ProceduralColoring::TwoLine { .. } => 5,
            ProceduralColoring::FlagEuclidean { n } => *n as u32 + 1,
            ProceduralColoring::PointListBackground { colors, background, .. } => {
                colors.iter().chain([background]).map(|c| c.0).max().unwrap_or(1)
            }
        }
    }

    /// Dimension of the coordinates of points in the domain.
    pub fn ambient_dim(&self) -> usize {
        match self {
            ProceduralColoring::FlagInversive { n } | ProceduralColoring::GenericPoints { n, .. } => *n,
            ProceduralColoring::TwoLine { .. } => 2,
            ProceduralColoring::FlagEuclidean { n } => n + 1,
            ProceduralColoring::PointListBackground { points, .. } => points.first().map_or(0, Point::dim),
        }
    }

    pub fn color_of(&self, p: &Point) -> Result<ColorIndex, ColoringError> {
        if p.dim() != self.ambient_dim() {
            return Err(GeomError::DimensionMismatch { expected: self.ambient_dim(), found: p.dim() }.into());
        }
        let c = match self {
            ProceduralColoring::FlagInversive { .. } => match p.coords() {
                None => 2,
                Some(x) => match x.iter().rposition(|s| !s.is_zero()) {
                    None => 1,
                    Some(i) => 3 + i as u32,
                },
            },
            ProceduralColoring::GenericPoints { k, points, .. } => {
                points.iter().position(|m| m == p).map_or(*k, |i| i as u32 + 1)
            }
            ProceduralColoring::TwoLine { extended } => two_line_color(p, *extended)?,
            ProceduralColoring::FlagEuclidean { .. } => {
                let x = p.coords().ok_or_else(|| ColoringError::OutOfDomain(p.to_string()))?;
                if !(norm_sq(x) - x[0].one_like()).is_zero() {
                    return Err(ColoringError::OutOfDomain(p.to_string()));
                }
                1 + x.iter().rposition(|s| !s.is_zero()).expect("unit vector") as u32
            }
            ProceduralColoring::PointListBackground { points, colors, background } => {
                points.iter().position(|m| m == p).map_or(background.0, |i| colors[i].0)
            }
        };
        Ok(ColorIndex(c))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProceduralColoring::FlagInversive { .. } => "flag",
            ProceduralColoring::GenericPoints { .. } => "generic",
            ProceduralColoring::TwoLine { extended: false } => "two-line",
            ProceduralColoring::TwoLine { extended: true } => "two-line-extended",
            ProceduralColoring::FlagEuclidean { .. } => "flag-euclidean",
            ProceduralColoring::PointListBackground { .. } => "point-list",
        }
    }
}

fn two_line_color(p: &Point, extended: bool) -> Result<u32, ColoringError> {
    let Some(x) = p.coords() else {
        return Ok(1);
    };
    if x.iter().any(|s| s.backend() == Backend::Float64) {
        return Err(ColoringError::NotExact);
    }
    let (u, v) = (&x[0], &x[1]);
    let class = |s: &Scalar| norm_class_of(s).map_err(|_| ColoringError::NotExact);
    Ok(match (u.is_zero(), v.is_zero()) {
        (true, true) => 1,
        (false, true) => match class(u)? {
            Some(NormClass::Root2QStar) => 4,
            Some(NormClass::QStar) => 5,
            _ => 1,
        },
        (true, false) => match class(v)? {
            Some(NormClass::QuarticQStar) => 2,
            Some(NormClass::InvQuarticQStar) => 3,
            _ => 1,
        },
        (false, false) if extended => 1,
        (false, false) => return Err(ColoringError::OutOfDomain(p.to_string())),
    })
}

/// Finite colored point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredConfig {
    n: usize,
    k: u32,
    points: Vec<(Point, ColorIndex)>,
}

impl ColoredConfig {
    pub fn new(n: usize, k: u32, points: Vec<(Point, ColorIndex)>) -> Result<Self, ColoringError> {
        for (i, (p, c)) in points.iter().enumerate() {
            if p.dim() != n {
                return Err(GeomError::DimensionMismatch { expected: n, found: p.dim() }.into());
            }
            if c.0 == 0 || c.0 > k {
                return Err(ColoringError::InvalidColor(c.0, k));
            }
            if points[..i].iter().any(|(q, _)| q == p) {
                return Err(GeomError::DuplicatePoints.into());
            }
        }
        Ok(ColoredConfig { n, k, points })
    }

    /// Colors `points` by `coloring`, dropping repeats.
    pub fn from_coloring(coloring: &ProceduralColoring, points: &[Point]) -> Result<Self, ColoringError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in points {
            if seen.insert(p.clone()) {
                out.push((p.clone(), coloring.color_of(p)?));
            }
        }
        ColoredConfig::new(coloring.ambient_dim(), coloring.k(), out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn points(&self) -> &[(Point, ColorIndex)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Scalar {
    Scalar::rational(BigRational::new(
        BigInt::from(rng.gen_range(-num..=num)),
        BigInt::from(rng.gen_range(1..=den)),
    ))
}

pub(crate) fn random_nonzero_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Scalar {
    loop {
        let q = random_rational(rng, num, den);
        if !q.is_zero() {
            return q;
        }
    }
}

const MAX_ATTEMPTS: usize = 100_000;

/// Draws distinct points from `gen` until `count` are collected.
fn distinct_samples(
    count: usize,
    rng: &mut ChaCha8Rng,
    mut gen: impl FnMut(&mut ChaCha8Rng) -> Point,
) -> Result<Vec<Point>, ColoringError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(ColoringError::SamplingExhausted(MAX_ATTEMPTS));
        }
        let p = gen(rng);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

fn finite_class(class: u32, available: Vec<Point>, count: usize) -> Result<Vec<Point>, ColoringError> {
    if count > available.len() {
        return Err(ColoringError::ClassTooSmall { class, size: available.len(), requested: count });
    }
    Ok(available.into_iter().take(count).collect())
}

/// `count` distinct points of color `i`, deterministic in `seed`.
pub fn sample_class(
    coloring: &ProceduralColoring,
    i: ColorIndex,
    count: usize,
    seed: u64,
) -> Result<Vec<Point>, ColoringError> {
    let k = coloring.k();
    if i.0 == 0 || i.0 > k {
        return Err(ColoringError::InvalidColor(i.0, k));
    }
    let mut rng = rng(seed ^ (u64::from(i.0) << 32));
    let pts = match coloring {
        ProceduralColoring::FlagInversive { n } => match i.0 {
            1 => finite_class(1, vec![Point::origin(*n)], count)?,
            2 => finite_class(2, vec![Point::infinity(*n)], count)?,
            c => {
                let j = c as usize - 2;
                distinct_samples(count, &mut rng, |r| {
                    let mut x = vec![Scalar::zero(); *n];
                    for s in x.iter_mut().take(j - 1) {
                        *s = random_rational(r, 12, 6);
                    }
                    x[j - 1] = random_nonzero_rational(r, 12, 6);
                    Point::Finite(x)
                })?
            }
        },
        ProceduralColoring::GenericPoints { n, k, points } => {
            if i.0 < *k {
                finite_class(i.0, vec![points[i.0 as usize - 1].clone()], count)?
            } else {
                let avoid: HashSet<&Point> = points.iter().collect();
                distinct_samples(count, &mut rng, |r| loop {
                    let p = Point::Finite((0..*n).map(|_| random_rational(r, 20, 8)).collect());
                    if !avoid.contains(&p) {
                        return p;
                    }
                })?
            }
        }
        ProceduralColoring::TwoLine { extended } => {
            let axis = |q: Scalar, on_x: bool| {
                if on_x {
                    Point::xy(q, Scalar::zero())
                } else {
                    Point::xy(Scalar::zero(), q)
                }
            };
            let mono = |r: &mut ChaCha8Rng, power: usize| Scalar::theta_pow(random_nonzero_rational(r, 40, 20), power);
            distinct_samples(count, &mut rng, |r| match i.0 {
                2 => axis(mono(r, 1), false),
                3 => axis(mono(r, 3), false),
                4 => axis(mono(r, 2), true),
                5 => axis(mono(r, 0), true),
                _ => {
                    let kinds = if *extended { 5 } else { 4 };
                    match r.gen_range(0..kinds) {
                        0 => axis(mono(r, 0), false),
                        1 => axis(mono(r, 2), false),
                        2 => axis(mono(r, 1), true),
                        3 => {
                            // Mixed coefficients lie in no class.
                            let q = random_nonzero_rational(r, 40, 20);
                            let s = &q + &Scalar::theta_pow(q.clone(), 1);
                            axis(s, r.gen_bool(0.5))
                        }
                        _ => Point::xy(random_nonzero_rational(r, 20, 8), random_nonzero_rational(r, 20, 8)),
                    }
                }
            })?
        }
        ProceduralColoring::FlagEuclidean { n } => {
            if i.0 == 1 {
                let mut e = vec![Scalar::zero(); n + 1];
                e[0] = Scalar::one();
                let mut f = e.clone();
                f[0] = Scalar::int(-1);
                finite_class(1, vec![Point::Finite(e), Point::Finite(f)], count)?
            } else {
                let j = i.0 as usize;
                distinct_samples(count, &mut rng, |r| loop {
                    let t: Vec<Scalar> = (0..j - 1).map(|_| random_rational(r, 12, 6)).collect();
                    let x = stereographic(&t);
                    if !x[j - 1].is_zero() {
                        let mut full = x;
                        full.resize(n + 1, Scalar::zero());
                        return Point::Finite(full);
                    }
                })?
            }
        }
        ProceduralColoring::PointListBackground { points, colors, background } => {
            let listed: Vec<Point> = points
                .iter()
                .zip(colors)
                .filter(|(_, c)| **c == i)
                .map(|(p, _)| p.clone())
                .collect();
            if i != *background {
                finite_class(i.0, listed, count)?
            } else {
                let n = points.first().map_or(0, Point::dim);
                let avoid: HashSet<&Point> = points.iter().collect();
                distinct_samples(count, &mut rng, |r| loop {
                    let p = Point::Finite((0..n).map(|_| random_rational(r, 20, 8)).collect());
                    if !avoid.contains(&p) {
                        return p;
                    }
                })?
            }
        }
    };
    debug_assert!(pts.iter().all(|p| coloring.color_of(p).ok() == Some(i)));
    Ok(pts)
}

/// Inverse stereographic projection `t ↦ (2t, ⟨t,t⟩ − 1)/(⟨t,t⟩ + 1)`.
pub fn stereographic(t: &[Scalar]) -> Vec<Scalar> {
    let tt = norm_sq(t);
    let one = Scalar::one();
    let d = &tt + &one;
    let mut x: Vec<Scalar> = t.iter().map(|s| s * &Scalar::int(2) / &d).collect();
    x.push((&tt - &one) / &d);
    x
}

/// `count` distinct rational points of 𝕊ⁿ ⊂ ℝⁿ⁺¹.
pub fn rational_sphere_points(n: usize, count: usize, seed: u64) -> Result<Vec<Point>, ColoringError> {
    let mut rng = rng(seed);
    distinct_samples(count, &mut rng, |r| {
        let t: Vec<Scalar> = (0..n).map(|_| random_rational(r, 12, 6)).collect();
        Point::Finite(stereographic(&t))
    })
}

/// Which notion of general position to enforce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenericMode {
    /// Points of ℝⁿ, no `n + 2` on a common generalized `(n−1)`-sphere.
    Inversive,
    /// Points of 𝕊ⁿ ⊂ ℝⁿ⁺¹, every `n + 1` linearly independent.
    Euclidean,
}

/// Seeded points in general position, built one at a time by rejection.
pub fn generic_position_points(
    n: usize,
    count: usize,
    seed: u64,
    mode: GenericMode,
) -> Result<Vec<Point>, ColoringError> {
    let mut rng = rng(seed);
    let mut out: Vec<Point> = Vec::with_capacity(count);
    while out.len() < count {
        let mut attempts = 0;
        let accepted = loop {
            attempts += 1;
            if attempts > 10_000 {
                return Err(ColoringError::SamplingExhausted(10_000));
            }
            let cand = match mode {
                GenericMode::Inversive => Point::Finite((0..n).map(|_| random_rational(&mut rng, 16, 4)).collect()),
                GenericMode::Euclidean => {
                    Point::Finite(stereographic(&(0..n).map(|_| random_rational(&mut rng, 8, 4)).collect::<Vec<_>>()))
                }
            };
            if out.contains(&cand) {
                continue;
            }
            let ok = match mode {
                GenericMode::Inversive => out.iter().combinations(n + 1).all(|sub| {
                    let mut pts = sub;
                    pts.push(&cand);
                    !generic_lifted_det(&pts).expect("same dimension").is_zero()
                }),
                GenericMode::Euclidean => out.iter().combinations(n).all(|sub| {
                    let mut rows: Vec<Vec<Scalar>> = sub.iter().map(|p| p.coords().unwrap().to_vec()).collect();
                    rows.push(cand.coords().unwrap().to_vec());
                    rank(&rows) == n + 1
                }),
            };
            if ok {
                break cand;
            }
        };
        out.push(accepted);
    }
    Ok(out)
}
