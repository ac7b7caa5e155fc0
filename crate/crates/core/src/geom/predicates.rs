use crate::exactnum::Scalar;

use super::linalg::{det, dot, norm_sq, rank};
use super::{check_dim, GeomError, Point};

/// `x ↦ (1, x, ⟨x,x⟩)`, `∞ ↦ (0, 0, 1)`. Points on a common generalized sphere
/// have lifts orthogonal to its coefficient vector `(a, b, c)`.
pub fn lift(p: &Point) -> Vec<Scalar> {
    match p.coords() {
        Some(x) => {
            let one = x.first().map_or_else(Scalar::one, Scalar::one_like);
            let mut v = vec![one];
            v.extend(x.iter().cloned());
            v.push(norm_sq(x));
            v
        }
        None => {
            let mut v = vec![Scalar::zero(); p.dim() + 2];
            v[p.dim() + 1] = Scalar::one();
            v
        }
    }
}

fn lifted_rows(points: &[&Point]) -> Result<Vec<Vec<Scalar>>, GeomError> {
    let n = points.first().map_or(0, |p| p.dim());
    let float = points.iter().any(|p| p.is_float());
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        check_dim(n, p.dim())?;
        p.check_backend(float)?;
        let mut row = lift(p);
        if float && p.is_infinity() {
            row = row.iter().map(Scalar::to_float).collect();
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn lifted_rank(points: &[&Point]) -> Result<usize, GeomError> {
    Ok(rank(&lifted_rows(points)?))
}

/// Determinant of the `(n+2)×(n+2)` lifted matrix; zero iff the `n + 2`
/// points lie on a common generalized `(n−1)`-sphere.
pub fn generic_lifted_det(points: &[&Point]) -> Result<Scalar, GeomError> {
    let n = points.first().map_or(0, |p| p.dim());
    if points.len() != n + 2 {
        return Err(GeomError::WrongCount { expected: n + 2, found: points.len() });
    }
    Ok(det(&lifted_rows(points)?))
}

fn check_distinct(points: &[&Point]) -> Result<(), GeomError> {
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(GeomError::DuplicatePoints);
        }
    }
    Ok(())
}

/// Whether four distinct points lie on one circle or extended line.
pub fn concyclic(p1: &Point, p2: &Point, p3: &Point, p4: &Point) -> Result<bool, GeomError> {
    let pts = [p1, p2, p3, p4];
    check_distinct(&pts)?;
    Ok(lifted_rank(&pts)? <= 3)
}

/// A complex number with scalar parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex {
    pub re: Scalar,
    pub im: Scalar,
}

impl Complex {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        Complex { re, im }
    }

    fn of(p: &Point) -> Complex {
        let c = p.coords().expect("finite point");
        Complex::new(c[0].clone(), c[1].clone())
    }

    fn sub(&self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn div(&self, o: &Complex) -> Option<Complex> {
        let d = &o.re * &o.re + &o.im * &o.im;
        if d.is_zero() {
            return None;
        }
        let num = self.mul(&Complex::new(o.re.clone(), -&o.im));
        Some(Complex::new(&num.re / &d, &num.im / &d))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CrossRatio {
    Finite(Complex),
    Infinity,
}

/// `[z1,z2:z3,z4] = (z1−z3)(z2−z4) / ((z2−z3)(z1−z4))` in the plane; factors
/// containing ∞ cancel.
pub fn cross_ratio(z1: &Point, z2: &Point, z3: &Point, z4: &Point) -> Result<CrossRatio, GeomError> {
    let pts = [z1, z2, z3, z4];
    for p in pts {
        check_dim(2, p.dim()).map_err(|_| GeomError::UnsupportedDimension(2))?;
    }
    check_distinct(&pts)?;
    if pts.iter().filter(|p| p.is_infinity()).count() > 1 {
        return Err(GeomError::MultipleInfinity);
    }
    let d = |a: &Point, b: &Point| -> Option<Complex> {
        if a.is_infinity() || b.is_infinity() {
            None
        } else {
            Some(Complex::of(a).sub(&Complex::of(b)))
        }
    };
    let product = |factors: [Option<Complex>; 2]| {
        factors
            .into_iter()
            .flatten()
            .reduce(|x, y| x.mul(&y))
            .unwrap_or_else(|| Complex::new(Scalar::one(), Scalar::zero()))
    };
    let num = product([d(z1, z3), d(z2, z4)]);
    let den = product([d(z2, z3), d(z1, z4)]);
    Ok(match num.div(&den) {
        Some(c) => CrossRatio::Finite(c),
        None => CrossRatio::Infinity,
    })
}

/// A line through the origin of the plane with an exact unit direction,
/// oriented so the direction itself has sign +1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OriginLine {
    direction: [Scalar; 2],
}

impl OriginLine {
    pub fn new(v: Scalar, w: Scalar) -> Result<Self, GeomError> {
        if v.backend() == crate::exactnum::Backend::Float64 || !(&v * &v + &w * &w).is_one() {
            return Err(GeomError::NotUnitDirection);
        }
        let positive = w.is_positive() || (w.is_zero() && v.is_positive());
        let direction = if positive { [v, w] } else { [-v, -w] };
        Ok(OriginLine { direction })
    }

    pub fn x_axis() -> Self {
        OriginLine { direction: [Scalar::one(), Scalar::zero()] }
    }

    pub fn y_axis() -> Self {
        OriginLine { direction: [Scalar::zero(), Scalar::one()] }
    }

    pub fn direction(&self) -> &[Scalar; 2] {
        &self.direction
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p.coords() {
            Some([x, y]) => (x * &self.direction[1] - y * &self.direction[0]).is_zero(),
            _ => p.is_infinity() && p.dim() == 2,
        }
    }

    /// The point with signed norm `t`.
    pub fn point_at(&self, t: &Scalar) -> Point {
        Point::xy(t * &self.direction[0], t * &self.direction[1])
    }
}

/// `sign(v,w)·‖(v,w)‖`, where the sign is +1 exactly on the open upper half
/// plane and the nonnegative X-axis. The origin has signed norm 0.
pub fn signed_norm(p: &Point, line: &OriginLine) -> Result<Scalar, GeomError> {
    check_dim(2, p.dim())?;
    let x = p.coords().ok_or(GeomError::InfinitePoint)?;
    if !line.contains(p) {
        return Err(GeomError::NotOnLine);
    }
    Ok(dot(x, &line.direction))
}

/// `x·x' = y·y'`: the concyclicity criterion for two points with signed norms
/// `x, x'` on one line through the origin and `y, y'` on another.
pub fn power_condition(x: &Scalar, x2: &Scalar, y: &Scalar, y2: &Scalar) -> bool {
    x * x2 == y * y2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> Point {
        Point::ints(&[re, im])
    }

    #[test]
    fn concyclic_examples() {
        assert!(concyclic(&c(1, 0), &c(0, 1), &c(-1, 0), &c(0, -1)).unwrap());
        assert!(concyclic(&c(0, 0), &c(1, 0), &c(2, 0), &Point::infinity(2)).unwrap());
        assert!(!concyclic(&c(0, 0), &c(1, 0), &c(0, 1), &c(1, 2)).unwrap());
        assert_eq!(concyclic(&c(0, 0), &c(0, 0), &c(0, 1), &c(1, 2)), Err(GeomError::DuplicatePoints));
    }

    #[test]
    fn cross_ratio_examples() {
        let real = |x: i64| c(x, 0);
        let r = cross_ratio(&real(1), &real(2), &real(3), &real(4)).unwrap();
        assert_eq!(r, CrossRatio::Finite(Complex::new(Scalar::ratio(4, 3), Scalar::zero())));
        let r = cross_ratio(&real(0), &real(1), &real(2), &Point::infinity(2)).unwrap();
        assert_eq!(r, CrossRatio::Finite(Complex::new(Scalar::int(2), Scalar::zero())));
        let CrossRatio::Finite(r) = cross_ratio(&c(0, 0), &c(1, 0), &c(0, 1), &c(1, 2)).unwrap() else {
            panic!("finite expected");
        };
        assert!(!r.is_real());
    }

    #[test]
    fn cross_ratio_limit_matches_moved_point() {
        // Replacing ∞ by a far point approaches the limit value.
        let far = Point::xy(Scalar::int(1_000_000), Scalar::zero());
        let CrossRatio::Finite(r) = cross_ratio(&c(0, 0), &c(1, 0), &c(2, 0), &far).unwrap() else {
            panic!();
        };
        assert!((r.re.to_f64() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn signed_norm_examples() {
        let diag = OriginLine::new(Scalar::ratio(3, 5), Scalar::ratio(4, 5)).unwrap();
        assert_eq!(signed_norm(&c(3, 4), &diag).unwrap(), Scalar::int(5));
        assert_eq!(signed_norm(&c(0, -2), &OriginLine::y_axis()).unwrap(), Scalar::int(-2));
        assert_eq!(signed_norm(&c(-1, 0), &OriginLine::x_axis()).unwrap(), Scalar::int(-1));
        assert_eq!(signed_norm(&c(1, 1), &OriginLine::x_axis()), Err(GeomError::NotOnLine));
        assert!(OriginLine::new(Scalar::one(), Scalar::one()).is_err());
        // Orientation is normalized: (−3/5, −4/5) gives the same line and signs.
        let flipped = OriginLine::new(Scalar::ratio(-3, 5), Scalar::ratio(-4, 5)).unwrap();
        assert_eq!(flipped, diag);
    }

    #[test]
    fn power_condition_examples() {
        let s = Scalar::int;
        assert!(power_condition(&s(2), &s(3), &s(1), &s(6)));
        assert!(concyclic(&c(2, 0), &c(3, 0), &c(0, 1), &c(0, 6)).unwrap());
        assert!(power_condition(&s(1), &s(1), &s(1), &s(1)));
        assert!(!power_condition(&s(2), &s(3), &s(1), &s(5)));
    }

    #[test]
    fn lifted_determinant_detects_cospherical() {
        let pts = [c(1, 0), c(0, 1), c(-1, 0), c(0, -1)];
        let refs: Vec<&Point> = pts.iter().collect();
        assert!(generic_lifted_det(&refs).unwrap().is_zero());
        let pts = [c(1, 0), c(0, 1), c(-1, 0), c(0, -2)];
        let refs: Vec<&Point> = pts.iter().collect();
        assert!(!generic_lifted_det(&refs).unwrap().is_zero());
    }
}
