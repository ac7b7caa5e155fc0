use crate::exactnum::Scalar;

use super::linalg::{dot, norm_sq, orthogonalize, reject, rref, sub};
use super::{check_dim, GeomError, Hypersphere, Point};

/// Affine flat `base + span(basis)` with an orthogonal basis.
///
/// Built canonically (RREF of the direction space, then Gram–Schmidt, with
/// the base point the foot of the perpendicular from the origin), so two
/// descriptions of the same flat compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    base: Vec<Scalar>,
    basis: Vec<Vec<Scalar>>,
}

impl Flat {
    /// Affine hull of finite points.
    pub fn through(points: &[&[Scalar]]) -> Flat {
        let p0 = points[0];
        let mut dirs: Vec<Vec<Scalar>> = points[1..].iter().map(|p| sub(p, p0)).collect();
        if !dirs.is_empty() {
            rref(&mut dirs);
        }
        Flat::from_parts(p0, orthogonalize(&dirs))
    }

    /// The whole of ℝⁿ.
    pub fn full(n: usize) -> Flat {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| Scalar::int((i == j) as i64)).collect())
            .collect();
        Flat { base: vec![Scalar::zero(); n], basis }
    }

    /// `point + span(directions)`, in canonical form.
    pub fn spanned(point: &[Scalar], directions: &[Vec<Scalar>]) -> Flat {
        let mut dirs = directions.to_vec();
        if !dirs.is_empty() {
            rref(&mut dirs);
        }
        Flat::from_parts(point, orthogonalize(&dirs))
    }

    fn from_parts(point: &[Scalar], basis: Vec<Vec<Scalar>>) -> Flat {
        Flat { base: reject(point, &basis), basis }
    }

    pub fn base(&self) -> &[Scalar] {
        &self.base
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        reject(&sub(x, &self.base), &self.basis).iter().all(Scalar::is_zero)
    }

    /// First coordinate direction outside the flat, made orthogonal to it.
    fn completion(&self) -> Option<Vec<Scalar>> {
        let n = self.ambient_dim();
        let zero = self.base.first().map_or_else(Scalar::zero, Scalar::zero_like);
        (0..n).find_map(|j| {
            let mut e = vec![zero.clone(); n];
            e[j] = zero.one_like();
            let w = reject(&e, &self.basis);
            w.iter().any(|x| !x.is_zero()).then_some(w)
        })
    }
}

/// The `dim`-sphere `carrier ∩ surface`, where the carrier has dimension
/// `dim + 1` and ∞ belongs to it exactly when the surface is a hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubSphere {
    carrier: Flat,
    surface: Hypersphere,
    dim: usize,
}

impl SubSphere {
    pub fn carrier(&self) -> &Flat {
        &self.carrier
    }

    pub fn surface(&self) -> &Hypersphere {
        &self.surface
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains_infinity(&self) -> bool {
        self.surface.is_hyperplane()
    }

    pub fn contains(&self, p: &Point) -> Result<bool, GeomError> {
        check_dim(self.carrier.ambient_dim(), p.dim())?;
        p.check_backend(self.surface.is_float())?;
        Ok(match p.coords() {
            None => self.contains_infinity(),
            Some(x) => self.carrier.contains(x) && self.surface.value(x).is_zero(),
        })
    }

    /// The sphere `carrier ∩ surface`; the carrier must have dimension at
    /// least 1 and the two must share an ambient space.
    pub fn new(carrier: Flat, surface: Hypersphere) -> Result<SubSphere, GeomError> {
        check_dim(carrier.ambient_dim(), surface.dim())?;
        if carrier.dim() == 0 {
            return Err(GeomError::Degenerate("a sphere needs a carrier of dimension at least 1"));
        }
        let dim = carrier.dim() - 1;
        Ok(SubSphere { carrier, surface, dim })
    }

    pub fn from_hypersphere(s: Hypersphere) -> SubSphere {
        let n = s.dim();
        SubSphere { carrier: Flat::full(n), surface: s, dim: n - 1 }
    }

    /// The hypersphere itself when the carrier is all of ℝⁿ.
    pub fn as_hypersphere(&self) -> Option<&Hypersphere> {
        (self.carrier.dim() == self.carrier.ambient_dim()).then_some(&self.surface)
    }
}

/// A full-codimension-one sphere or a lower-dimensional one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sphere {
    Hyper(Hypersphere),
    Sub(SubSphere),
}

impl Sphere {
    pub fn contains(&self, p: &Point) -> Result<bool, GeomError> {
        match self {
            Sphere::Hyper(s) => s.contains(p),
            Sphere::Sub(s) => s.contains(p),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Sphere::Hyper(s) => s.dim() - 1,
            Sphere::Sub(s) => s.dim(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Sphere::Hyper(s) => s.dim(),
            Sphere::Sub(s) => s.carrier.ambient_dim(),
        }
    }
}

/// Smallest-dimensional generalized sphere containing `points`.
pub fn smallest_sphere(points: &[Point]) -> Result<SubSphere, GeomError> {
    let n = points.first().map_or(0, Point::dim);
    let float = points.iter().any(Point::is_float);
    let mut distinct: Vec<&Point> = Vec::new();
    for p in points {
        check_dim(n, p.dim())?;
        p.check_backend(float)?;
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    if distinct.len() < 2 {
        return Err(GeomError::TooFewPoints);
    }
    let has_infinity = distinct.iter().any(|p| p.is_infinity());
    let finite: Vec<&[Scalar]> = distinct.iter().filter_map(|p| p.coords()).collect();
    let hull = Flat::through(&finite);
    let m = hull.dim();

    if !has_infinity {
        if let Some(center) = circumcenter_in(&hull, &finite) {
            let r2 = norm_sq(&sub(finite[0], &center));
            let surface = Hypersphere::from_center(&center, r2)?;
            return Ok(SubSphere { carrier: hull, surface, dim: m - 1 });
        }
    }
    if m == n {
        return Err(GeomError::NoProperSphere);
    }
    let w = hull.completion().expect("flat is proper");
    let a = -dot(&w, hull.base());
    let c = a.zero_like();
    let surface = Hypersphere::new(c, w.clone(), a)?;
    let mut basis = hull.basis.clone();
    basis.push(w);
    let carrier = Flat { base: hull.base.clone(), basis };
    Ok(SubSphere { carrier, surface, dim: m })
}

/// Center, inside the flat, of the sphere through all points, if one exists.
fn circumcenter_in(hull: &Flat, points: &[&[Scalar]]) -> Option<Vec<Scalar>> {
    let m = hull.dim();
    let p0 = points[0];
    // center = p0 + Σ tᵢeᵢ; 2⟨pⱼ − p0, center − p0⟩ = |pⱼ − p0|².
    let mut rows: Vec<Vec<Scalar>> = points[1..]
        .iter()
        .map(|p| {
            let d = sub(p, p0);
            let mut row: Vec<Scalar> = hull
                .basis
                .iter()
                .map(|e| dot(&d, e) * d.first().map_or_else(Scalar::one, |x| x.int_like(2)))
                .collect();
            row.push(norm_sq(&d));
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&m) {
        return None;
    }
    let mut center = p0.to_vec();
    for (row, &pc) in rows.iter().zip(&pivots) {
        let t = &row[m];
        center = center
            .iter()
            .zip(&hull.basis[pc])
            .map(|(c, e)| c + &(t * e))
            .collect();
    }
    Some(center)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_is_a_zero_sphere() {
        let s = smallest_sphere(&[Point::ints(&[1, 0]), Point::ints(&[-1, 0])]).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.carrier().dim(), 1);
        assert_eq!(s.surface().center().unwrap(), vec![Scalar::zero(), Scalar::zero()]);
        assert_eq!(s.surface().radius_sq().unwrap(), Scalar::one());
        assert!(s.contains(&Point::ints(&[1, 0])).unwrap());
        assert!(!s.contains(&Point::ints(&[0, 1])).unwrap());
    }

    #[test]
    fn collinear_triple_is_an_extended_line() {
        let s = smallest_sphere(&[Point::ints(&[0, 0]), Point::ints(&[1, 0]), Point::ints(&[2, 0])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains_infinity());
        assert!(s.contains(&Point::ints(&[7, 0])).unwrap());
        assert!(!s.contains(&Point::ints(&[7, 1])).unwrap());
        assert_eq!(s.carrier().dim(), 2);
    }

    #[test]
    fn circle_in_three_space() {
        let pts = [
            Point::ints(&[1, 0, 0]),
            Point::ints(&[0, 1, 0]),
            Point::ints(&[-1, 0, 0]),
            Point::ints(&[0, -1, 0]),
        ];
        let s = smallest_sphere(&pts).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.surface().center().unwrap(), vec![Scalar::zero(); 3]);
        assert!(!s.contains(&Point::ints(&[0, 0, 1])).unwrap());
        assert!(!s.contains_infinity());
    }

    #[test]
    fn equal_spheres_compare_equal() {
        let a = smallest_sphere(&[Point::ints(&[1, 0, 0]), Point::ints(&[0, 1, 0]), Point::ints(&[-1, 0, 0])]);
        let b = smallest_sphere(&[Point::ints(&[0, -1, 0]), Point::ints(&[-1, 0, 0]), Point::ints(&[0, 1, 0])]);
        assert_eq!(a.unwrap(), b.unwrap());
    }

    #[test]
    fn infinity_extends_the_hull() {
        let s = smallest_sphere(&[Point::ints(&[1, 1]), Point::infinity(2)]).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(s.contains(&Point::infinity(2)).unwrap());
        assert!(s.contains(&Point::ints(&[1, 1])).unwrap());
        assert!(!s.contains(&Point::ints(&[1, 2])).unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(smallest_sphere(&[Point::ints(&[1, 1]), Point::ints(&[1, 1])]), Err(GeomError::TooFewPoints));
        let plane = [Point::ints(&[0, 0]), Point::ints(&[1, 0]), Point::ints(&[0, 1]), Point::ints(&[5, 5])];
        assert_eq!(smallest_sphere(&plane), Err(GeomError::NoProperSphere));
    }
}
