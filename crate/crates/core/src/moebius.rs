//! Möbius maps as finite compositions of inversions and reflections.

use thiserror::Error;

use crate::exactnum::Scalar;
use crate::geom::linalg::{axpy, dot, norm_sq, scale, sub};
use crate::geom::{GeomError, Hypersphere, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoebiusError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("inversion radius squared must be positive")]
    NonPositiveRadius,
    #[error("reflection normal must be nonzero")]
    ZeroNormal,
    #[error("inversion center must be a finite point")]
    InfiniteCenter,
    #[error("normalization points must be distinct")]
    CoincidentPoints,
    #[error("normalization needs an irrational scale factor")]
    IrrationalNormalization,
}

/// Inversion in a sphere, or reflection in the hyperplane `⟨normal, x⟩ = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimitiveMap {
    Inversion { center: Vec<Scalar>, radius_sq: Scalar },
    Reflection { normal: Vec<Scalar>, offset: Scalar },
}

impl PrimitiveMap {
    pub fn inversion(center: Vec<Scalar>, radius_sq: Scalar) -> Result<Self, MoebiusError> {
        if !radius_sq.is_positive() {
            return Err(MoebiusError::NonPositiveRadius);
        }
        Ok(PrimitiveMap::Inversion { center, radius_sq })
    }

    pub fn reflection(normal: Vec<Scalar>, offset: Scalar) -> Result<Self, MoebiusError> {
        if normal.iter().all(Scalar::is_zero) {
            return Err(MoebiusError::ZeroNormal);
        }
        Ok(PrimitiveMap::Reflection { normal, offset })
    }

    pub fn dim(&self) -> usize {
        match self {
            PrimitiveMap::Inversion { center, .. } => center.len(),
            PrimitiveMap::Reflection { normal, .. } => normal.len(),
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        match self {
            PrimitiveMap::Inversion { center, radius_sq } => match p.coords() {
                None => Point::Finite(center.clone()),
                Some(x) => {
                    let d = sub(x, center);
                    let dd = norm_sq(&d);
                    if dd.is_zero() {
                        Point::infinity(center.len())
                    } else {
                        Point::Finite(axpy(center, &(radius_sq / &dd), &d))
                    }
                }
            },
            PrimitiveMap::Reflection { normal, offset } => match p.coords() {
                None => p.clone(),
                Some(x) => {
                    let k = (dot(normal, x) - offset) * offset.int_like(-2) / norm_sq(normal);
                    Point::Finite(axpy(x, &k, normal))
                }
            },
        }
    }

    pub fn image_sphere(&self, s: &Hypersphere) -> Result<Hypersphere, GeomError> {
        let (c, b, a) = (s.c(), s.b(), s.a());
        match self {
            PrimitiveMap::Inversion { center, radius_sq } => {
                // Move the center to the origin, invert there, move back.
                let two = c.int_like(2);
                let b1 = axpy(b, &(&two * c), center);
                let a1 = s.value(center);
                let c2 = a1;
                let b2 = scale(&b1, radius_sq);
                let a2 = c * &(radius_sq * radius_sq);
                let b3 = axpy(&b2, &-(&two * &c2), center);
                let a3 = &c2 * &norm_sq(center) - dot(&b2, center) + a2;
                Hypersphere::new(c2, b3, a3)
            }
            PrimitiveMap::Reflection { normal, offset } => {
                let nn = norm_sq(normal);
                let t = scale(normal, &(offset.int_like(2) * offset / &nn));
                let mb = axpy(b, &(dot(normal, b) * offset.int_like(-2) / &nn), normal);
                let b1 = axpy(&mb, &(c * &c.int_like(-2)), &t);
                let a1 = c * &norm_sq(&t) + dot(b, &t) + a;
                Hypersphere::new(c.clone(), b1, a1)
            }
        }
    }
}

/// Composition of primitives, applied first to last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    dim: usize,
    factors: Vec<PrimitiveMap>,
}

impl MoebiusMap {
    pub fn identity(dim: usize) -> Self {
        MoebiusMap { dim, factors: Vec::new() }
    }

    pub fn new(dim: usize, factors: Vec<PrimitiveMap>) -> Result<Self, MoebiusError> {
        for f in &factors {
            if f.dim() != dim {
                return Err(GeomError::DimensionMismatch { expected: dim, found: f.dim() }.into());
            }
        }
        Ok(MoebiusMap { dim, factors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[PrimitiveMap] {
        &self.factors
    }

    pub fn then(mut self, f: PrimitiveMap) -> Self {
        debug_assert_eq!(f.dim(), self.dim);
        self.factors.push(f);
        self
    }

    pub fn apply(&self, p: &Point) -> Result<Point, GeomError> {
        if p.dim() != self.dim {
            return Err(GeomError::DimensionMismatch { expected: self.dim, found: p.dim() });
        }
        Ok(self.factors.iter().fold(p.clone(), |q, f| f.apply(&q)))
    }

    pub fn image_sphere(&self, s: &Hypersphere) -> Result<Hypersphere, GeomError> {
        if s.dim() != self.dim {
            return Err(GeomError::DimensionMismatch { expected: self.dim, found: s.dim() });
        }
        self.factors.iter().try_fold(s.clone(), |t, f| f.image_sphere(&t))
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { dim: self.dim, factors: self.factors.iter().rev().cloned().collect() }
    }
}

/// `f ∘ g`: apply `g`, then `f`.
pub fn compose(f: &MoebiusMap, g: &MoebiusMap) -> Result<MoebiusMap, MoebiusError> {
    if f.dim != g.dim {
        return Err(GeomError::DimensionMismatch { expected: g.dim, found: f.dim }.into());
    }
    let mut factors = g.factors.clone();
    factors.extend(f.factors.iter().cloned());
    Ok(MoebiusMap { dim: f.dim, factors })
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|j| Scalar::int((i == j) as i64)).collect()
}

/// Translation by `v` as two parallel reflections.
fn translation(v: &[Scalar]) -> [PrimitiveMap; 2] {
    let half = norm_sq(v) / Scalar::int(2);
    [
        PrimitiveMap::Reflection { normal: v.to_vec(), offset: half.zero_like() },
        PrimitiveMap::Reflection { normal: v.to_vec(), offset: half },
    ]
}

/// A map sending `p ↦ 0` and `q ↦ ∞`, and `r ↦ (1, 0, …, 0)` when `r` is
/// given. With `r` given the map preserves orientation, so in the plane it is
/// the holomorphic map `z ↦ ((z−p)/(z−q))·((r−q)/(r−p))`.
///
/// Fails if the scale factor `|r'|` at the dilation step lies outside Q(θ):
/// the required map then has no description with exact data.
pub fn normalize(p: &Point, q: &Point, r: Option<&Point>, n: usize) -> Result<MoebiusMap, MoebiusError> {
    for x in [Some(p), Some(q), r].into_iter().flatten() {
        if x.dim() != n {
            return Err(GeomError::DimensionMismatch { expected: n, found: x.dim() }.into());
        }
    }
    if p == q || r.is_some_and(|r| r == p || r == q) {
        return Err(MoebiusError::CoincidentPoints);
    }
    let mut map = MoebiusMap::identity(n);
    if let Some(qc) = q.coords() {
        map = map.then(PrimitiveMap::Inversion { center: qc.to_vec(), radius_sq: Scalar::one() });
    }
    let p1 = map.apply(p)?;
    let p1 = p1.coords().expect("p is not sent to infinity").to_vec();
    if p1.iter().any(|x| !x.is_zero()) {
        let v: Vec<Scalar> = p1.iter().map(|x| -x).collect();
        for f in translation(&v) {
            map = map.then(f);
        }
    }
    let Some(r) = r else {
        return Ok(map);
    };
    let r1 = map.apply(r)?;
    let r1 = r1.coords().expect("r is finite after the inversion").to_vec();
    let len = norm_sq(&r1).exact_sqrt().ok_or(MoebiusError::IrrationalNormalization)?;
    let k = len.try_recip().map_err(GeomError::from)?;
    if !k.is_one() {
        map = map
            .then(PrimitiveMap::Inversion { center: vec![Scalar::zero(); n], radius_sq: Scalar::one() })
            .then(PrimitiveMap::Inversion { center: vec![Scalar::zero(); n], radius_sq: k.clone() });
    }
    let u = scale(&r1, &k);
    let e1 = unit(n, 0);
    let w = sub(&u, &e1);
    if w.iter().any(|x| !x.is_zero()) {
        map = map.then(PrimitiveMap::Reflection { normal: w, offset: Scalar::zero() });
    }
    if map.factors.len() % 2 == 1 {
        if n < 2 {
            return Err(GeomError::UnsupportedDimension(2).into());
        }
        map = map.then(PrimitiveMap::Reflection { normal: unit(n, n - 1), offset: Scalar::zero() });
    }
    Ok(map)
}
