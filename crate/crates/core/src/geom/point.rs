use std::fmt;

use crate::exactnum::{Backend, NumError, Scalar};

use super::GeomError;

/// A point of ℝⁿ or the point at infinity of ℝⁿ ∪ {∞}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(Vec<Scalar>),
    Infinity { dim: usize },
}

impl Point {
    /// Finite point; all coordinates must be exact or all float.
    pub fn new(coords: Vec<Scalar>) -> Result<Self, GeomError> {
        let mut backend: Option<Backend> = None;
        for c in &coords {
            backend = Some(match backend {
                None => c.backend(),
                Some(b) => b.join(c.backend()).map_err(GeomError::Num)?,
            });
        }
        Ok(Point::Finite(coords))
    }

    pub fn finite(coords: Vec<Scalar>) -> Self {
        Point::new(coords).expect("coordinates share a backend")
    }

    pub fn infinity(dim: usize) -> Self {
        Point::Infinity { dim }
    }

    pub fn origin(dim: usize) -> Self {
        Point::Finite(vec![Scalar::zero(); dim])
    }

    pub fn ints(coords: &[i64]) -> Self {
        Point::Finite(coords.iter().map(|&x| Scalar::int(x)).collect())
    }

    pub fn xy(x: Scalar, y: Scalar) -> Self {
        Point::finite(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::Finite(c) => c.len(),
            Point::Infinity { dim } => *dim,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity { .. })
    }

    pub fn coords(&self) -> Option<&[Scalar]> {
        match self {
            Point::Finite(c) => Some(c),
            Point::Infinity { .. } => None,
        }
    }

    pub fn is_float(&self) -> bool {
        self.coords()
            .is_some_and(|c| c.iter().any(|s| s.backend() == Backend::Float64))
    }

    /// Exact/float compatibility check against another point.
    pub fn check_backend(&self, other_is_float: bool) -> Result<(), NumError> {
        let mine = self.is_float();
        match (self.coords(), mine == other_is_float) {
            (None, _) | (_, true) => Ok(()),
            (Some(_), false) if mine => Err(NumError::BackendMismatch(Backend::Float64, Backend::Rational)),
            _ => Err(NumError::BackendMismatch(Backend::Rational, Backend::Float64)),
        }
    }

    pub fn to_f64(&self) -> Option<Vec<f64>> {
        self.coords().map(|c| c.iter().map(Scalar::to_f64).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity { .. } => write!(f, "∞"),
            Point::Finite(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_backends_rejected() {
        assert!(Point::new(vec![Scalar::int(1), Scalar::float(1.0)]).is_err());
        assert!(Point::new(vec![Scalar::int(1), Scalar::theta()]).is_ok());
    }

    #[test]
    fn infinity_equality_by_dimension() {
        assert_eq!(Point::infinity(2), Point::infinity(2));
        assert_ne!(Point::infinity(2), Point::infinity(3));
        assert_eq!(Point::origin(2), Point::ints(&[0, 0]));
    }
}
