//! Exact scalar arithmetic over Q and Q(θ) (θ⁴ = 2), plus a float backend.

mod quartic;
mod scalar;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use quartic::Quartic;
pub use scalar::{
    float_epsilon, format_rational, parse_rational, set_float_epsilon, Backend, Scalar,
    DEFAULT_EPSILON,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("backend mismatch: {0:?} vs {1:?}")]
    BackendMismatch(Backend, Backend),
    #[error("zero has no norm class")]
    ZeroNormClass,
    #[error("norm classes are only defined for exact scalars")]
    Inexact,
    #[error("malformed scalar literal `{0}`")]
    Parse(String),
}

/// The multiplicative classes Q*, 2^{1/2}Q*, 2^{1/4}Q*, 2^{-1/4}Q* of Q(θ)*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormClass {
    QStar,
    Root2QStar,
    QuarticQStar,
    InvQuarticQStar,
}

impl NormClass {
    /// Exponent `j` with the class equal to `θ^j·Q*`. 2^{-1/4} = θ³/2, so the
    /// inverse-quartic class is `θ³·Q*`.
    pub fn theta_power(self) -> usize {
        match self {
            NormClass::QStar => 0,
            NormClass::QuarticQStar => 1,
            NormClass::Root2QStar => 2,
            NormClass::InvQuarticQStar => 3,
        }
    }

    pub fn from_theta_power(j: usize) -> NormClass {
        match j % 4 {
            0 => NormClass::QStar,
            1 => NormClass::QuarticQStar,
            2 => NormClass::Root2QStar,
            _ => NormClass::InvQuarticQStar,
        }
    }

    /// A representative `q·θ^j` of the class.
    pub fn element(self, q: Scalar) -> Scalar {
        Scalar::theta_pow(q, self.theta_power())
    }
}

/// Which of the four classes `a` lies in, if any.
pub fn norm_class_of(a: &Scalar) -> Result<Option<NormClass>, NumError> {
    match a {
        Scalar::Float(_) => Err(NumError::Inexact),
        _ if a.is_zero() => Err(NumError::ZeroNormClass),
        Scalar::Rational(_) => Ok(Some(NormClass::QStar)),
        Scalar::Quartic(q) => Ok(q.as_monomial().map(|(j, _)| NormClass::from_theta_power(j))),
    }
}

/// Sign of an exact Q(θ) element (rationals included).
pub fn quartic_sign(a: &Scalar) -> Result<i8, NumError> {
    match a {
        Scalar::Float(_) => Err(NumError::Inexact),
        _ => Ok(a.signum()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Cmp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldValue {
    Scalar(Scalar),
    Ordering(Ordering),
}

/// Single entry point over the field operations; `Neg` ignores `b`.
pub fn field_op(a: &Scalar, b: &Scalar, op: FieldOp) -> Result<FieldValue, NumError> {
    a.backend().join(b.backend())?;
    Ok(match op {
        FieldOp::Add => FieldValue::Scalar(a.try_add(b)?),
        FieldOp::Sub => FieldValue::Scalar(a.try_sub(b)?),
        FieldOp::Mul => FieldValue::Scalar(a.try_mul(b)?),
        FieldOp::Div => FieldValue::Scalar(a.try_div(b)?),
        FieldOp::Neg => FieldValue::Scalar(-a),
        FieldOp::Cmp => FieldValue::Ordering(a.try_cmp(b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn quartic(c: [(i64, i64); 4]) -> Scalar {
        Scalar::quartic(Quartic::new(
            c.map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d))),
        ))
    }

    #[test]
    fn default_epsilon_bits() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_EPSILON);
    }

    #[test]
    fn field_op_examples() {
        let t = quartic([(0, 1), (1, 1), (0, 1), (0, 1)]);
        let t3 = quartic([(0, 1), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(field_op(&t, &t3, FieldOp::Mul).unwrap(), FieldValue::Scalar(Scalar::int(2)));
        assert_eq!(
            field_op(&Scalar::one(), &t, FieldOp::Div).unwrap(),
            FieldValue::Scalar(quartic([(0, 1), (0, 1), (0, 1), (1, 2)]))
        );
        assert_eq!(
            field_op(&t, &Scalar::one(), FieldOp::Cmp).unwrap(),
            FieldValue::Ordering(Ordering::Greater)
        );
        assert!(field_op(&t, &Scalar::zero(), FieldOp::Div).is_err());
        assert!(field_op(&t, &Scalar::float(1.0), FieldOp::Add).is_err());
    }

    #[test]
    fn norm_class_examples() {
        assert_eq!(
            norm_class_of(&quartic([(0, 1), (3, 1), (0, 1), (0, 1)])).unwrap(),
            Some(NormClass::QuarticQStar)
        );
        assert_eq!(norm_class_of(&Scalar::int(5)).unwrap(), Some(NormClass::QStar));
        assert_eq!(norm_class_of(&quartic([(1, 1), (1, 1), (0, 1), (0, 1)])).unwrap(), None);
        assert_eq!(norm_class_of(&Scalar::zero()), Err(NumError::ZeroNormClass));
        assert_eq!(norm_class_of(&Scalar::float(2.0)), Err(NumError::Inexact));
    }

    #[test]
    fn inverse_quartic_class_is_theta_cubed() {
        let inv = Scalar::one() / Scalar::theta();
        assert_eq!(norm_class_of(&inv).unwrap(), Some(NormClass::InvQuarticQStar));
    }

    #[test]
    fn quartic_sign_examples() {
        assert_eq!(quartic_sign(&Scalar::zero()).unwrap(), 0);
        assert_eq!(quartic_sign(&quartic([(-1, 1), (1, 1), (0, 1), (0, 1)])).unwrap(), 1);
        assert_eq!(quartic_sign(&quartic([(3, 1), (0, 1), (-2, 1), (0, 1)])).unwrap(), 1);
    }
}
