use std::fmt;

use crate::exactnum::{Backend, NumError, Scalar};

use super::linalg::{dot, norm_sq, nullspace, scale};
use super::{check_dim, GeomError, Point};

/// Zero set of `c⟨x,x⟩ + ⟨b,x⟩ + a` in ℝⁿ ∪ {∞}; `c = 0` is an extended
/// hyperplane. Always stored in canonical form, so `==` is sphere equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypersphere {
    c: Scalar,
    b: Vec<Scalar>,
    a: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SideLabel {
    Inside,
    On,
    Outside,
    Positive,
    Negative,
}

impl Hypersphere {
    pub fn new(c: Scalar, b: Vec<Scalar>, a: Scalar) -> Result<Self, GeomError> {
        let float = c.backend() == Backend::Float64;
        for s in b.iter().chain([&a]) {
            if (s.backend() == Backend::Float64) != float {
                return Err(NumError::BackendMismatch(c.backend(), s.backend()).into());
            }
        }
        let disc = norm_sq(&b) - Scalar::int_like(&c, 4) * &c * &a;
        if !disc.is_positive() {
            return Err(GeomError::Degenerate("⟨b,b⟩ − 4ca must be positive"));
        }
        Ok(Hypersphere { c, b, a }.canonical())
    }

    /// Sphere with the given center and squared radius.
    pub fn from_center(center: &[Scalar], radius_sq: Scalar) -> Result<Self, GeomError> {
        let one = radius_sq.one_like();
        let b = scale(center, &radius_sq.int_like(-2));
        let a = norm_sq(center) - radius_sq;
        Hypersphere::new(one, b, a)
    }

    /// Extended hyperplane `⟨normal, x⟩ = offset`.
    pub fn hyperplane(normal: Vec<Scalar>, offset: Scalar) -> Result<Self, GeomError> {
        Hypersphere::new(offset.zero_like(), normal, -offset)
    }

    fn canonical(self) -> Self {
        let Hypersphere { c, b, a } = self;
        let lead = std::iter::once(&c)
            .chain(&b)
            .chain([&a])
            .find(|s| !s.is_zero())
            .expect("nondegenerate sphere has a nonzero coefficient")
            .clone();
        let k = if lead.backend() == Backend::Float64 {
            let norm = (c.to_f64().powi(2)
                + b.iter().map(|x| x.to_f64().powi(2)).sum::<f64>()
                + a.to_f64().powi(2))
            .sqrt();
            Scalar::float(lead.signum() as f64 / norm)
        } else {
            lead.try_recip().expect("nonzero")
        };
        let fix = |s: &Scalar| {
            let v = s * &k;
            if v.is_zero() {
                v.zero_like()
            } else {
                v
            }
        };
        Hypersphere { c: fix(&c), b: b.iter().map(fix).collect(), a: fix(&a) }
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn b(&self) -> &[Scalar] {
        &self.b
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn is_hyperplane(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_float(&self) -> bool {
        self.c.backend() == Backend::Float64
    }

    /// Center of a proper sphere.
    pub fn center(&self) -> Option<Vec<Scalar>> {
        if self.is_hyperplane() {
            return None;
        }
        let k = -(self.c.int_like(2) * &self.c);
        Some(self.b.iter().map(|x| x / &k).collect())
    }

    pub fn radius_sq(&self) -> Option<Scalar> {
        let center = self.center()?;
        Some(norm_sq(&center) - &self.a / &self.c)
    }

    /// The defining quadratic at a finite point.
    pub fn value(&self, x: &[Scalar]) -> Scalar {
        let mut v = dot(&self.b, x) + &self.a;
        if !self.c.is_zero() {
            v = v + &self.c * &norm_sq(x);
        }
        v
    }

    fn check(&self, p: &Point) -> Result<(), GeomError> {
        check_dim(self.dim(), p.dim())?;
        p.check_backend(self.is_float())?;
        Ok(())
    }
}

impl fmt::Debug for Hypersphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypersphere {{ c: {}, b: {:?}, a: {} }}", self.c, self.b, self.a)
    }
}

pub fn on_sphere(p: &Point, s: &Hypersphere) -> Result<bool, GeomError> {
    Ok(side(p, s)? == SideLabel::On)
}

impl Hypersphere {
    pub fn contains(&self, p: &Point) -> Result<bool, GeomError> {
        on_sphere(p, self)
    }
}

/// Which component of the complement `p` lies in, or `On`.
pub fn side(p: &Point, s: &Hypersphere) -> Result<SideLabel, GeomError> {
    s.check(p)?;
    let Some(x) = p.coords() else {
        return Ok(if s.is_hyperplane() { SideLabel::On } else { SideLabel::Outside });
    };
    let sign = s.value(x).signum();
    Ok(match (sign, s.is_hyperplane()) {
        (0, _) => SideLabel::On,
        (1, false) => SideLabel::Outside,
        (_, false) => SideLabel::Inside,
        (1, true) => SideLabel::Positive,
        (_, true) => SideLabel::Negative,
    })
}

/// Whether `x` and `y` lie in different components of the complement of `s`.
pub fn separated(x: &Point, y: &Point, s: &Hypersphere) -> Result<bool, GeomError> {
    let sx = side(x, s)?;
    let sy = side(y, s)?;
    if sx == SideLabel::On || sy == SideLabel::On {
        return Err(GeomError::PointOnSphere);
    }
    Ok(sx != sy)
}

/// The generalized sphere through `n + 1` points of ℝⁿ ∪ {∞}.
pub fn sphere_through(points: &[Point]) -> Result<Hypersphere, GeomError> {
    let n = points.first().map_or(0, Point::dim);
    if points.len() != n + 1 {
        return Err(GeomError::WrongCount { expected: n + 1, found: points.len() });
    }
    let float = points.iter().any(Point::is_float);
    for p in points {
        check_dim(n, p.dim())?;
        p.check_backend(float)?;
    }
    if points.iter().filter(|p| p.is_infinity()).count() > 1 {
        return Err(GeomError::MultipleInfinity);
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(GeomError::DuplicatePoints);
        }
    }
    let (zero, one) = if float {
        (Scalar::float(0.0), Scalar::float(1.0))
    } else {
        (Scalar::zero(), Scalar::one())
    };
    // Unknowns ordered (c, b₁..bₙ, a).
    let rows: Vec<Vec<Scalar>> = points
        .iter()
        .map(|p| match p.coords() {
            Some(x) => {
                let mut row = vec![norm_sq(x)];
                row.extend(x.iter().cloned());
                row.push(one.clone());
                row
            }
            None => {
                let mut row = vec![zero.clone(); n + 2];
                row[0] = one.clone();
                row
            }
        })
        .collect();
    let ns = nullspace(&rows, n + 2);
    if ns.len() != 1 {
        return Err(GeomError::Degenerate("points do not determine a unique sphere"));
    }
    let v = &ns[0];
    Hypersphere::new(v[0].clone(), v[1..=n].to_vec(), v[n + 1].clone())
}
