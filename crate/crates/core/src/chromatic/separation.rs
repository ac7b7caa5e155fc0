use itertools::Itertools;

use crate::colorings::ColorIndex;
use crate::exactnum::Scalar;
use crate::geom::linalg::{dot, norm_sq, sub};
use crate::geom::{concyclic, generic_lifted_det, separated, side, sphere_through, Hypersphere, Point, SideLabel};
use crate::moebius::normalize;

use super::ChromaticError;

/// A sphere through `n + 1` differently colored points that separates two
/// further points of two more colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationWitness {
    pub sphere: Hypersphere,
    pub defining: Vec<(Point, ColorIndex)>,
    pub separated_pair: [(Point, ColorIndex); 2],
}

impl SeparationWitness {
    pub fn validate(&self) -> Result<bool, ChromaticError> {
        for (p, _) in &self.defining {
            if !self.sphere.contains(p)? {
                return Ok(false);
            }
        }
        let [(x, _), (y, _)] = &self.separated_pair;
        if !separated(x, y, &self.sphere)? {
            return Ok(false);
        }
        let colors: Vec<ColorIndex> =
            self.defining.iter().chain(&self.separated_pair).map(|(_, c)| *c).collect();
        Ok(colors.iter().all_unique())
    }
}

fn check_input(points: &[(Point, ColorIndex)], n: usize) -> Result<(), ChromaticError> {
    if points.len() != n + 3 {
        return Err(ChromaticError::WrongCount { expected: n + 3, found: points.len() });
    }
    if !points.iter().map(|(_, c)| c).all_unique() {
        return Err(ChromaticError::ColorsNotDistinct);
    }
    for (p, _) in points {
        if p.dim() != n {
            return Err(crate::geom::GeomError::DimensionMismatch { expected: n, found: p.dim() }.into());
        }
    }
    if !points.iter().map(|(p, _)| p).all_unique() {
        return Err(crate::geom::GeomError::DuplicatePoints.into());
    }
    if points.iter().filter(|(p, _)| p.is_infinity()).count() > 1 {
        return Err(crate::geom::GeomError::MultipleInfinity.into());
    }
    Ok(())
}

fn witness(sphere: Hypersphere, pts: &[&(Point, ColorIndex)], defining: [usize; 3], pair: [usize; 2]) -> SeparationWitness {
    SeparationWitness {
        sphere,
        defining: defining.iter().map(|&i| pts[i].clone()).collect(),
        separated_pair: [pts[pair[0]].clone(), pts[pair[1]].clone()],
    }
}

/// A point of the circle through `x1, x4, x5` on the arc from `x4` to `x5`
/// that avoids `x1`.
fn opposite_arc_point(x1: &Point, x4: &Point, x5: &Point, circle: &Hypersphere) -> Option<Point> {
    if circle.is_hyperplane() {
        let (a, b) = match (x4.coords(), x5.coords()) {
            (Some(a), Some(b)) => (a, b),
            // One end is ∞: reflect x1 through the finite end.
            (Some(f), None) | (None, Some(f)) => {
                let x = x1.coords()?;
                return Some(Point::Finite(f.iter().zip(x).map(|(f, x)| f * &Scalar::int(2) - x).collect()));
            }
            (None, None) => return None,
        };
        let mid: Vec<Scalar> = a.iter().zip(b).map(|(a, b)| (a + b) / Scalar::int(2)).collect();
        let between = x1.coords().is_some_and(|x| dot(&sub(a, x), &sub(b, x)).is_negative());
        return Some(if between { Point::infinity(x1.dim()) } else { Point::Finite(mid) });
    }
    // Chord from x1 through the midpoint of x4x5 crosses that chord inside
    // the circle, so its far end is on the other arc.
    let (x, a, b) = (x1.coords()?, x4.coords()?, x5.coords()?);
    let mid: Vec<Scalar> = a.iter().zip(b).map(|(a, b)| (a + b) / Scalar::int(2)).collect();
    let d = sub(&mid, x);
    let two = Scalar::int(2);
    let t = -(&two * circle.c() * &dot(x, &d) + dot(circle.b(), &d)) / (circle.c() * &norm_sq(&d));
    Some(Point::Finite(x.iter().zip(&d).map(|(x, d)| x + &(&t * d)).collect()))
}

/// The constructive separating circle for five differently colored points of
/// the plane, no four concyclic.
///
/// Roles `x1..x5` follow input order, falling back to other orders only if
/// the construction fails. `x1` is moved between `x4` and `x5` on the line
/// `(x1x4x5)` by a Möbius map; then either that line separates `x2` from `x3`,
/// or one of the circles `(x3x4x5)`, `(x2x4x5)` separates `x1` from the other.
pub fn separating_circle_5pts(points: &[(Point, ColorIndex)]) -> Result<SeparationWitness, ChromaticError> {
    check_input(points, 2)?;
    for q in points.iter().map(|(p, _)| p).combinations(4) {
        if concyclic(q[0], q[1], q[2], q[3])? {
            return Err(ChromaticError::Degenerate("four of the points are concyclic".into()));
        }
    }
    for perm in (0..5).permutations(5) {
        let pts: Vec<&(Point, ColorIndex)> = perm.iter().map(|&i| &points[i]).collect();
        let [x1, x2, x3, x4, x5] = [0, 1, 2, 3, 4].map(|i| &pts[i].0);
        let circle = sphere_through(&[x1.clone(), x4.clone(), x5.clone()])?;
        let Some(q) = opposite_arc_point(x1, x4, x5, &circle) else {
            continue;
        };
        let Ok(t) = normalize(x1, &q, None, 2) else {
            continue;
        };
        let (t4, t5) = (t.apply(x4)?, t.apply(x5)?);
        let between = match (t4.coords(), t5.coords()) {
            (Some(a), Some(b)) => dot(a, b).is_negative(),
            _ => false,
        };
        if !between {
            continue;
        }
        if separated(x2, x3, &circle)? {
            return Ok(witness(circle, &pts, [0, 3, 4], [1, 2]));
        }
        let c345 = sphere_through(&[x3.clone(), x4.clone(), x5.clone()])?;
        if side(x2, &c345)? != SideLabel::On && separated(x1, x2, &c345)? {
            return Ok(witness(c345, &pts, [2, 3, 4], [0, 1]));
        }
        let c245 = sphere_through(&[x2.clone(), x4.clone(), x5.clone()])?;
        if separated(x1, x3, &c245)? {
            return Ok(witness(c245, &pts, [1, 3, 4], [0, 2]));
        }
    }
    Err(ChromaticError::Degenerate("no role assignment yields a separating circle".into()))
}

/// First `(n+1)`-subset, in lexicographic order, whose sphere separates the
/// remaining two points.
pub fn separating_sphere_bruteforce(
    points: &[(Point, ColorIndex)],
) -> Result<Option<SeparationWitness>, ChromaticError> {
    let n = points.first().map_or(0, |(p, _)| p.dim());
    if n < 2 {
        return Err(ChromaticError::BadDimension { d: 1, n });
    }
    check_input(points, n)?;
    for sub in points.iter().map(|(p, _)| p).combinations(n + 2) {
        if generic_lifted_det(&sub)?.is_zero() {
            return Err(ChromaticError::Degenerate(format!("{} points lie on a common sphere", n + 2)));
        }
    }
    for idx in (0..n + 3).combinations(n + 1) {
        let rest: Vec<usize> = (0..n + 3).filter(|i| !idx.contains(i)).collect();
        let defining: Vec<Point> = idx.iter().map(|&i| points[i].0.clone()).collect();
        let sphere = sphere_through(&defining)?;
        if separated(&points[rest[0]].0, &points[rest[1]].0, &sphere)? {
            return Ok(Some(SeparationWitness {
                sphere,
                defining: idx.iter().map(|&i| points[i].clone()).collect(),
                separated_pair: [points[rest[0]].clone(), points[rest[1]].clone()],
            }));
        }
    }
    Ok(None)
}
