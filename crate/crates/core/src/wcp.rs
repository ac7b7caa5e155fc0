//! Weakly circle-preserving maps checked on finite samples.
//!
//! Image points are given in the chart ℝ^m ∪ {∞} of 𝕊^m; four of them are
//! concyclic exactly when their lifts have rank at most 3.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::Rng;
use thiserror::Error;

use crate::chromatic::{find_polychromatic, map_ordered, ChromaticError, Exec};
use crate::colorings::{rng, random_nonzero_rational, random_rational, ColorIndex, ColoringError, ProceduralColoring};
use crate::exactnum::Scalar;
use crate::geom::{concyclic, smallest_sphere, sphere_through, GeomError, Hypersphere, Point, Sphere, SubSphere};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WcpError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Chromatic(#[from] ChromaticError),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("expected {expected} image points, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("the image points are concyclic")]
    Concyclic,
    #[error("the image is not in circular general position; use wcp_check instead")]
    NotInGeneralPosition,
    #[error("sample point {point} of circle {index} is not on it")]
    OffCircle { index: usize, point: String },
    #[error("no 4-colored circle found within a budget of {0} circles")]
    BudgetExhausted(usize),
}

/// `x ↦ image[table[Γ(x)]]` for a procedural coloring `Γ` of ℝ²_∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteImageMap {
    image: Vec<Point>,
    coloring: ProceduralColoring,
    table: BTreeMap<u32, usize>,
}

impl FiniteImageMap {
    /// The table must send every color `1..=k` to an index of `image`, and
    /// the image points must be pairwise distinct.
    pub fn new(image: Vec<Point>, coloring: ProceduralColoring, table: BTreeMap<u32, usize>) -> Result<Self, WcpError> {
        coloring.validate()?;
        if coloring.ambient_dim() != 2 {
            return Err(WcpError::InvalidMap("the domain must be the plane".into()));
        }
        if image.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Err(WcpError::InvalidMap("image points must be distinct".into()));
        }
        if let Some(p) = image.iter().find(|p| p.dim() != image[0].dim()) {
            return Err(GeomError::DimensionMismatch { expected: image[0].dim(), found: p.dim() }.into());
        }
        for c in 1..=coloring.k() {
            match table.get(&c) {
                Some(&i) if i < image.len() => {}
                _ => return Err(WcpError::InvalidMap(format!("color {c} has no image"))),
            }
        }
        if table.keys().any(|&c| c == 0 || c > coloring.k()) {
            return Err(WcpError::InvalidMap("table names a color outside the coloring".into()));
        }
        Ok(FiniteImageMap { image, coloring, table })
    }

    /// Color `i` goes to `image[i - 1]`.
    pub fn in_order(image: Vec<Point>, coloring: ProceduralColoring) -> Result<Self, WcpError> {
        let table = (1..=coloring.k()).map(|c| (c, c as usize - 1)).collect();
        Self::new(image, coloring, table)
    }

    pub fn image(&self) -> &[Point] {
        &self.image
    }

    pub fn coloring(&self) -> &ProceduralColoring {
        &self.coloring
    }

    pub fn table(&self) -> &BTreeMap<u32, usize> {
        &self.table
    }

    pub fn apply(&self, p: &Point) -> Result<&Point, WcpError> {
        let c = self.coloring.color_of(p)?;
        Ok(&self.image[self.table[&c.0]])
    }
}

/// Result of the circular general position test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgpReport {
    pub verdict: bool,
    /// A circle containing all but at most one point of the set.
    pub circle: Option<SubSphere>,
    /// Indices of the set's points on `circle`.
    pub on: Vec<usize>,
}

fn check_points(points: &[Point]) -> Result<(), WcpError> {
    let first = points.first().ok_or(WcpError::WrongCount { expected: 1, found: 0 })?;
    if let Some(p) = points.iter().find(|p| p.dim() != first.dim()) {
        return Err(GeomError::DimensionMismatch { expected: first.dim(), found: p.dim() }.into());
    }
    if first.dim() < 2 {
        return Err(GeomError::UnsupportedDimension(first.dim()).into());
    }
    if points.iter().tuple_combinations().any(|(a, b)| a == b) {
        return Err(GeomError::DuplicatePoints.into());
    }
    Ok(())
}

/// Whether every circle misses at least two points of `m`. Sets of at most
/// four points never qualify; larger sets are checked against the circle
/// through every triple.
pub fn circular_general_position(m: &[Point]) -> Result<CgpReport, WcpError> {
    check_points(m)?;
    let incidences = |c: &SubSphere| -> Result<Vec<usize>, WcpError> {
        let mut on = Vec::new();
        for (i, p) in m.iter().enumerate() {
            if c.contains(p)? {
                on.push(i);
            }
        }
        Ok(on)
    };
    if m.len() <= 4 {
        let circle = smallest_sphere(&pad_to_three(m))?;
        let on = incidences(&circle)?;
        return Ok(CgpReport { verdict: false, circle: Some(circle), on });
    }
    for t in m.iter().cloned().combinations(3) {
        let circle = smallest_sphere(&t)?;
        let on = incidences(&circle)?;
        if on.len() + 1 >= m.len() {
            return Ok(CgpReport { verdict: false, circle: Some(circle), on });
        }
    }
    Ok(CgpReport { verdict: true, circle: None, on: Vec::new() })
}

/// The first three points of `m`, completed with fixed points not in `m`.
fn pad_to_three(m: &[Point]) -> Vec<Point> {
    let n = m[0].dim();
    let mut out: Vec<Point> = m.iter().take(3).cloned().collect();
    let mut extras = (0..).map(|k: i64| {
        let mut v = vec![0; n];
        v[0] = k;
        Point::ints(&v)
    });
    while out.len() < 3 {
        let p = extras.next().unwrap();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Four domain points on one circle whose images are four distinct,
/// non-concyclic points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WcpViolation {
    pub circle: Hypersphere,
    pub domain: Vec<(Point, ColorIndex)>,
    pub images: Vec<Point>,
}

impl WcpViolation {
    pub fn validate(&self, map: &FiniteImageMap) -> Result<bool, WcpError> {
        if self.domain.len() != 4 || self.images.len() != 4 {
            return Ok(false);
        }
        for ((p, c), img) in self.domain.iter().zip(&self.images) {
            if !self.circle.contains(p)? || map.coloring.color_of(p)? != *c || map.apply(p)? != img {
                return Ok(false);
            }
        }
        if self.images.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Ok(false);
        }
        let i = &self.images;
        Ok(!concyclic(&i[0], &i[1], &i[2], &i[3])?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WcpVerdict {
    /// No sampled circle was sent off a circle.
    PassOnSample { circles_checked: usize },
    Violation { sample_index: usize, violation: WcpViolation },
}

/// A circle of the domain with points on it.
pub type CircleSample = (Hypersphere, Vec<Point>);

/// Checks, for each sampled circle, that the images of its points lie on a
/// common circle. Reports the first failing sample.
pub fn wcp_check(map: &FiniteImageMap, samples: &[CircleSample], exec: Exec) -> Result<WcpVerdict, WcpError> {
    for (index, (circle, pts)) in samples.iter().enumerate() {
        for p in pts {
            if !circle.contains(p)? {
                return Err(WcpError::OffCircle { index, point: p.to_string() });
            }
        }
    }
    let results = map_ordered(samples, exec, |(circle, pts)| check_one(map, circle, pts));
    for (sample_index, r) in results.into_iter().enumerate() {
        if let Some(violation) = r? {
            return Ok(WcpVerdict::Violation { sample_index, violation });
        }
    }
    Ok(WcpVerdict::PassOnSample { circles_checked: samples.len() })
}

fn check_one(map: &FiniteImageMap, circle: &Hypersphere, pts: &[Point]) -> Result<Option<WcpViolation>, WcpError> {
    // First domain point for each distinct image, in sample order.
    let mut reps: Vec<(&Point, &Point)> = Vec::new();
    for p in pts {
        let img = map.apply(p)?;
        if !reps.iter().any(|(_, q)| *q == img) {
            reps.push((p, img));
        }
    }
    if reps.len() <= 3 {
        return Ok(None);
    }
    // Distinct points all lie on one circle iff each lies on the circle
    // through the first three, i.e. iff every 4-subset is concyclic.
    for j in 3..reps.len() {
        if !concyclic(reps[0].1, reps[1].1, reps[2].1, reps[j].1)? {
            let chosen = [reps[0], reps[1], reps[2], reps[j]];
            let mut domain = Vec::with_capacity(4);
            for (p, _) in chosen {
                domain.push((p.clone(), map.coloring.color_of(p)?));
            }
            let images = chosen.iter().map(|(_, q)| (*q).clone()).collect();
            return Ok(Some(WcpViolation { circle: circle.clone(), domain, images }));
        }
    }
    Ok(None)
}

/// Refutes the weak circle-preserving property for a map onto five points
/// in circular general position, by finding a domain circle with four colors.
pub fn five_point_refute(map: &FiniteImageMap, budget: usize, seed: u64) -> Result<WcpViolation, WcpError> {
    if map.image.len() != 5 {
        return Err(WcpError::WrongCount { expected: 5, found: map.image.len() });
    }
    let mut hit: Vec<usize> = map.table.values().copied().collect();
    hit.sort_unstable();
    hit.dedup();
    if map.coloring.k() != 5 || hit.len() != 5 {
        return Err(WcpError::InvalidMap("the coloring must realize all five image points".into()));
    }
    if !circular_general_position(&map.image)?.verdict {
        return Err(WcpError::NotInGeneralPosition);
    }
    let w = find_polychromatic(&map.coloring, 4, budget, seed)?.ok_or(WcpError::BudgetExhausted(budget))?;
    let circle = match &w.sphere {
        Sphere::Hyper(h) => h.clone(),
        Sphere::Sub(s) => s.as_hypersphere().cloned().ok_or_else(|| {
            WcpError::Chromatic(ChromaticError::Degenerate("witness is not a circle".into()))
        })?,
    };
    let mut domain: Vec<(Point, ColorIndex)> = Vec::new();
    for (p, c) in &w.on_points {
        if domain.len() < 4 && !domain.iter().any(|(_, d)| d == c) {
            domain.push((p.clone(), *c));
        }
    }
    let images = domain.iter().map(|(_, c)| map.image[map.table[&c.0]].clone()).collect();
    let violation = WcpViolation { circle, domain, images };
    if !violation.validate(map)? {
        return Err(WcpError::Chromatic(ChromaticError::Degenerate("witness did not revalidate".into())));
    }
    Ok(violation)
}

/// The map sending the four flag-coloring classes of ℝ²_∞ (0, ∞, the rest of
/// the x-axis, everything else) to `m` in order.
pub fn build_sharp_map(m: &[Point]) -> Result<FiniteImageMap, WcpError> {
    if m.len() != 4 {
        return Err(WcpError::WrongCount { expected: 4, found: m.len() });
    }
    check_points(m)?;
    if concyclic(&m[0], &m[1], &m[2], &m[3])? {
        return Err(WcpError::Concyclic);
    }
    FiniteImageMap::in_order(m.to_vec(), ProceduralColoring::FlagInversive { n: 2 })
}

/// Seeded circles of ℝ²_∞, each with six rational points on it. The mix
/// includes lines through the origin, circles through the origin, circles
/// centered on the x-axis, the x-axis itself, and generic circles and lines.
pub fn sample_circles(count: usize, seed: u64) -> Result<Vec<CircleSample>, WcpError> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    let unit = |t: &Scalar| {
        let d = t * t + Scalar::one();
        ((Scalar::one() - t * t) / &d, Scalar::int(2) * t / &d)
    };
    while out.len() < count {
        let kind = out.len() % 6;
        let (circle, pts) = match kind {
            0 | 2 | 3 => {
                // Center and rational radius; kind 2 passes through 0, kind 3
                // is centered on the x-axis.
                let (cx, cy, rad) = match kind {
                    0 => (random_rational(&mut r, 12, 4), random_rational(&mut r, 12, 4), random_nonzero_rational(&mut r, 8, 4).abs()),
                    2 => {
                        let rad = random_nonzero_rational(&mut r, 8, 4).abs();
                        let (u, v) = unit(&random_rational(&mut r, 10, 5));
                        (&rad * &u, &rad * &v, rad)
                    }
                    _ => (random_rational(&mut r, 12, 4), Scalar::zero(), random_nonzero_rational(&mut r, 8, 4).abs()),
                };
                let circle = Hypersphere::from_center(&[cx.clone(), cy.clone()], &rad * &rad)?;
                let mut pts: Vec<Point> = Vec::new();
                if kind == 2 {
                    pts.push(Point::origin(2));
                }
                if kind == 3 {
                    pts.push(Point::xy(&cx + &rad, Scalar::zero()));
                    pts.push(Point::xy(&cx - &rad, Scalar::zero()));
                }
                while pts.len() < 6 {
                    let (u, v) = unit(&random_rational(&mut r, 10, 5));
                    let p = Point::xy(&cx + &(&rad * &u), &cy + &(&rad * &v));
                    if !pts.contains(&p) {
                        pts.push(p);
                    }
                }
                (circle, pts)
            }
            1 | 4 | 5 => {
                // Lines: through the origin, the x-axis, or generic.
                let (base, dir) = match kind {
                    1 => (vec![Scalar::zero(), Scalar::zero()], vec![random_rational(&mut r, 6, 3), random_nonzero_rational(&mut r, 6, 3)]),
                    4 => (vec![Scalar::zero(), Scalar::zero()], vec![Scalar::one(), Scalar::zero()]),
                    _ => (
                        vec![random_rational(&mut r, 12, 4), random_rational(&mut r, 12, 4)],
                        vec![random_rational(&mut r, 6, 3), random_nonzero_rational(&mut r, 6, 3)],
                    ),
                };
                let mut pts = vec![Point::infinity(2)];
                if kind != 5 || r.gen_bool(0.5) {
                    pts.push(Point::finite(base.clone()));
                }
                while pts.len() < 6 {
                    let t = random_nonzero_rational(&mut r, 12, 4);
                    let p = Point::xy(&base[0] + &(&t * &dir[0]), &base[1] + &(&t * &dir[1]));
                    if !pts.contains(&p) {
                        pts.push(p);
                    }
                }
                let circle = sphere_through(&pts[..3])?;
                (circle, pts)
            }
            _ => unreachable!(),
        };
        out.push((circle, pts));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> Point {
        Point::ints(&[re, im])
    }

    fn inf() -> Point {
        Point::infinity(2)
    }

    #[test]
    fn general_position_examples() {
        assert!(!circular_general_position(&[c(0, 0), c(1, 0), inf(), c(0, 1)]).unwrap().verdict);
        let r = circular_general_position(&[c(0, 0), c(0, 1), c(0, 2), inf(), c(1, 0)]).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.on, vec![0, 1, 2, 3]);
        assert!(r.circle.unwrap().carrier().dim() == 2);
        let good = circular_general_position(&[c(0, 0), c(1, 0), inf(), c(0, 1), c(1, 2)]).unwrap();
        assert!(good.verdict && good.circle.is_none());
        let single = circular_general_position(&[c(3, 3)]).unwrap();
        assert!(!single.verdict);
        assert_eq!(single.on, vec![0]);
    }

    #[test]
    fn sharp_map_passes_on_sampled_circles() {
        let map = build_sharp_map(&[c(0, 0), c(1, 0), inf(), c(0, 1)]).unwrap();
        let samples = sample_circles(120, 5).unwrap();
        assert_eq!(wcp_check(&map, &samples, Exec::Serial).unwrap(), WcpVerdict::PassOnSample { circles_checked: 120 });
    }

    #[test]
    fn sharp_map_preconditions() {
        let circle = [c(1, 0), c(0, 1), c(-1, 0), c(0, -1)];
        assert_eq!(build_sharp_map(&circle), Err(WcpError::Concyclic));
        assert_eq!(build_sharp_map(&circle[..3]), Err(WcpError::WrongCount { expected: 4, found: 3 }));
    }

    #[test]
    fn constant_map_passes() {
        let map = FiniteImageMap::new(
            vec![c(7, 7)],
            ProceduralColoring::FlagInversive { n: 2 },
            (1..=4).map(|k| (k, 0)).collect(),
        )
        .unwrap();
        let samples = sample_circles(12, 1).unwrap();
        assert!(matches!(wcp_check(&map, &samples, Exec::Serial).unwrap(), WcpVerdict::PassOnSample { .. }));
    }

    #[test]
    fn four_images_off_a_circle_are_reported() {
        // Points on the unit circle take four colors of this point-list
        // coloring, and their images {0, 1, ∞, i} are not concyclic.
        let on = vec![c(1, 0), c(0, 1), c(-1, 0), c(0, -1)];
        let coloring = ProceduralColoring::PointListBackground {
            points: on[..3].to_vec(),
            colors: vec![ColorIndex(1), ColorIndex(2), ColorIndex(3)],
            background: ColorIndex(4),
        };
        let map = FiniteImageMap::in_order(vec![c(0, 0), c(1, 0), inf(), c(0, 1)], coloring).unwrap();
        let circle = Hypersphere::from_center(&[Scalar::zero(), Scalar::zero()], Scalar::one()).unwrap();
        let verdict = wcp_check(&map, &[(circle, on)], Exec::Serial).unwrap();
        let WcpVerdict::Violation { sample_index, violation } = verdict else { panic!("expected a violation") };
        assert_eq!(sample_index, 0);
        assert!(violation.validate(&map).unwrap());
    }

    #[test]
    fn off_circle_sample_is_rejected() {
        let map = build_sharp_map(&[c(0, 0), c(1, 0), inf(), c(0, 1)]).unwrap();
        let circle = Hypersphere::from_center(&[Scalar::zero(), Scalar::zero()], Scalar::one()).unwrap();
        assert!(matches!(
            wcp_check(&map, &[(circle, vec![c(1, 0), c(2, 0)])], Exec::Serial),
            Err(WcpError::OffCircle { index: 0, .. })
        ));
    }

    #[test]
    fn five_point_map_is_refuted() {
        let map = FiniteImageMap::in_order(
            vec![c(0, 0), c(1, 0), inf(), c(0, 1), c(1, 2)],
            ProceduralColoring::TwoLine { extended: true },
        )
        .unwrap();
        let v = five_point_refute(&map, 1000, 0).unwrap();
        assert!(v.validate(&map).unwrap());
        let images: std::collections::HashSet<Point> = v.images.iter().cloned().collect();
        assert_eq!(images, [c(0, 0), c(1, 0), inf(), c(0, 1)].into_iter().collect());
    }

    #[test]
    fn five_point_preconditions() {
        let flag = build_sharp_map(&[c(0, 0), c(1, 0), inf(), c(0, 1)]).unwrap();
        assert_eq!(five_point_refute(&flag, 10, 0), Err(WcpError::WrongCount { expected: 5, found: 4 }));
        let collinear = FiniteImageMap::in_order(
            vec![c(0, 0), c(0, 1), c(0, 2), inf(), c(1, 0)],
            ProceduralColoring::TwoLine { extended: true },
        )
        .unwrap();
        assert_eq!(five_point_refute(&collinear, 10, 0), Err(WcpError::NotInGeneralPosition));
    }
}
