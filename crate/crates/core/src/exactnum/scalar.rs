use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::quartic::{rational_to_f64, Quartic};
use super::NumError;

pub const DEFAULT_EPSILON: f64 = 1e-9;

static EPSILON_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Tolerance used by predicates on the `Float64` backend. Exact backends never
/// read it.
pub fn float_epsilon() -> f64 {
    f64::from_bits(EPSILON_BITS.load(AtomicOrdering::Relaxed))
}

pub fn set_float_epsilon(eps: f64) {
    assert!(eps.is_finite() && eps >= 0.0, "epsilon must be a finite non-negative number");
    EPSILON_BITS.store(eps.to_bits(), AtomicOrdering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Rational,
    Quartic2,
    Float64,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        self != Backend::Float64
    }

    /// The backend both operands can be evaluated in. Q embeds in Q(θ), so the
    /// two exact backends mix; floats only mix with floats.
    pub fn join(self, other: Backend) -> Result<Backend, NumError> {
        use Backend::*;
        match (self, other) {
            (a, b) if a == b => Ok(a),
            (Rational, Quartic2) | (Quartic2, Rational) => Ok(Quartic2),
            (a, b) => Err(NumError::BackendMismatch(a, b)),
        }
    }
}

/// An element of an exact ordered field (Q or Q(2^{1/4})) or a binary64 value.
///
/// A `Quartic` payload is never a rational number: field results that fall
/// back into Q are stored as `Rational`, so structural equality is value
/// equality within the exact backends.
#[derive(Clone)]
pub enum Scalar {
    Rational(BigRational),
    Quartic(Quartic),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`, reduced. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Zero in this scalar's backend family (float zero for floats).
    pub fn zero_like(&self) -> Self {
        self.int_like(0)
    }

    pub fn one_like(&self) -> Self {
        self.int_like(1)
    }

    pub fn int_like(&self, n: i64) -> Self {
        match self {
            Scalar::Float(_) => Scalar::Float(n as f64),
            _ => Scalar::int(n),
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Scalar::Rational(q)
    }

    pub fn float(x: f64) -> Self {
        assert!(x.is_finite(), "float scalars must be finite");
        Scalar::Float(x)
    }

    /// Canonicalizing constructor for quartic values.
    pub fn quartic(q: Quartic) -> Self {
        match q.as_rational() {
            Some(r) => Scalar::Rational(r.clone()),
            None => Scalar::Quartic(q),
        }
    }

    /// θ = 2^{1/4}.
    pub fn theta() -> Self {
        Scalar::Quartic(Quartic::theta())
    }

    /// `q·θ^power`.
    pub fn theta_pow(q: Scalar, power: usize) -> Self {
        &q * &Scalar::quartic(Quartic::monomial(BigRational::one(), power % 4))
            * Scalar::int(if power >= 4 { 1 << (power / 4) } else { 1 })
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Quartic(_) => Backend::Quartic2,
            Scalar::Float(_) => Backend::Float64,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Exact value in Q(θ), if this is an exact scalar.
    pub fn to_quartic(&self) -> Option<Quartic> {
        match self {
            Scalar::Rational(q) => Some(Quartic::from_rational(q.clone())),
            Scalar::Quartic(q) => Some(q.clone()),
            Scalar::Float(_) => None,
        }
    }

    /// Converts an exact scalar to the float backend.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(q) => rational_to_f64(q),
            Scalar::Quartic(q) => q.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    /// Zero test; floats compare against the module epsilon.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Quartic(q) => q.is_zero(),
            Scalar::Float(x) => x.abs() <= float_epsilon(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    /// -1, 0 or +1; floats within epsilon of zero report 0.
    pub fn signum(&self) -> i8 {
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Quartic(q) => q.signum(),
            Scalar::Float(x) => {
                if x.abs() <= float_epsilon() {
                    0
                } else if *x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        use Scalar::*;
        Ok(match (self, rhs) {
            (Rational(a), Rational(b)) => Rational(a + b),
            (Float(a), Float(b)) => Float(a + b),
            _ => {
                let (a, b) = self.exact_pair(rhs)?;
                Scalar::quartic(a.add(&b))
            }
        })
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        use Scalar::*;
        Ok(match (self, rhs) {
            (Rational(a), Rational(b)) => Rational(a - b),
            (Float(a), Float(b)) => Float(a - b),
            _ => {
                let (a, b) = self.exact_pair(rhs)?;
                Scalar::quartic(a.sub(&b))
            }
        })
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        use Scalar::*;
        Ok(match (self, rhs) {
            (Rational(a), Rational(b)) => Rational(a * b),
            (Float(a), Float(b)) => Float(a * b),
            (Quartic(a), Rational(b)) | (Rational(b), Quartic(a)) => {
                if b.is_zero() {
                    Scalar::zero()
                } else {
                    Quartic(a.scale(b))
                }
            }
            _ => {
                let (a, b) = self.exact_pair(rhs)?;
                Scalar::quartic(a.mul(&b))
            }
        })
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, NumError> {
        use Scalar::*;
        if rhs.is_exact_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(match (self, rhs) {
            (Rational(a), Rational(b)) => Rational(a / b),
            (Quartic(a), Rational(b)) => Quartic(a.scale(&b.recip())),
            (Float(a), Float(b)) => {
                if *b == 0.0 {
                    return Err(NumError::DivisionByZero);
                }
                Float(a / b)
            }
            _ => {
                let (a, b) = self.exact_pair(rhs)?;
                Scalar::quartic(a.div(&b).ok_or(NumError::DivisionByZero)?)
            }
        })
    }

    pub fn try_recip(&self) -> Result<Scalar, NumError> {
        Scalar::one().try_div(self)
    }

    /// Total order consistent with the real embedding.
    pub fn try_cmp(&self, rhs: &Scalar) -> Result<Ordering, NumError> {
        use Scalar::*;
        Ok(match (self, rhs) {
            (Rational(a), Rational(b)) => a.cmp(b),
            (Float(a), Float(b)) => a.total_cmp(b),
            _ => {
                let (a, b) = self.exact_pair(rhs)?;
                a.cmp_real(&b)
            }
        })
    }

    fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Float(x) => *x == 0.0,
            other => other.is_zero(),
        }
    }

    fn exact_pair(&self, rhs: &Scalar) -> Result<(Quartic, Quartic), NumError> {
        self.backend().join(rhs.backend())?;
        match (self.to_quartic(), rhs.to_quartic()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(NumError::BackendMismatch(self.backend(), rhs.backend())),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Square root when it exists in the same exact field (or always, for
    /// floats). Exact results are nonnegative.
    pub fn exact_sqrt(&self) -> Option<Scalar> {
        if self.is_negative() {
            return None;
        }
        match self {
            Scalar::Float(x) => Some(Scalar::Float(x.max(0.0).sqrt())),
            _ => self.to_quartic()?.sqrt().map(Scalar::quartic),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        use Scalar::*;
        match (self, other) {
            (Rational(a), Rational(b)) => a == b,
            (Quartic(a), Quartic(b)) => a == b,
            (Float(a), Float(b)) => a.to_bits() == b.to_bits() || (*a == 0.0 && *b == 0.0),
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Rational(q) => {
                0u8.hash(state);
                q.hash(state);
            }
            Scalar::Quartic(q) => {
                1u8.hash(state);
                q.hash(state);
            }
            Scalar::Float(x) => {
                2u8.hash(state);
                let x = if *x == 0.0 { 0.0f64 } else { *x };
                x.to_bits().hash(state);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("scalar {}: {}", stringify!($method), e))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Quartic(q) => Scalar::Quartic(q.neg()),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<Quartic> for Scalar {
    fn from(q: Quartic) -> Self {
        Scalar::quartic(q)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", q),
            Scalar::Quartic(q) => write!(f, "{}", q),
            Scalar::Float(x) => write!(f, "{:?}", x),
        }
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational, NumError> {
    let bad = || NumError::Parse(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_results_demote_to_rational() {
        let t = Scalar::theta();
        let t4 = t.pow(4);
        assert_eq!(t4, Scalar::int(2));
        assert_eq!(t4.backend(), Backend::Rational);
    }

    #[test]
    fn rational_and_quartic_mix() {
        let x = Scalar::theta() + Scalar::int(1);
        assert_eq!(x.backend(), Backend::Quartic2);
        assert_eq!(x - Scalar::theta(), Scalar::one());
    }

    #[test]
    fn float_and_exact_do_not_mix() {
        let err = Scalar::float(1.0).try_add(&Scalar::one()).unwrap_err();
        assert_eq!(err, NumError::BackendMismatch(Backend::Float64, Backend::Rational));
        assert!(Scalar::float(1.0).try_cmp(&Scalar::theta()).is_err());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().try_div(&Scalar::zero()), Err(NumError::DivisionByZero));
        assert_eq!(Scalar::theta().try_div(&Scalar::zero()), Err(NumError::DivisionByZero));
        assert_eq!(Scalar::float(1.0).try_div(&Scalar::float(0.0)), Err(NumError::DivisionByZero));
    }

    #[test]
    fn float_zero_uses_epsilon() {
        assert!(Scalar::float(1e-12).is_zero());
        assert!(!Scalar::float(1e-6).is_zero());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Scalar::ratio(9, 4).exact_sqrt(), Some(Scalar::ratio(3, 2)));
        assert_eq!(Scalar::int(2).exact_sqrt(), Some(Scalar::theta_pow(Scalar::one(), 2)));
        assert_eq!(Scalar::int(3).exact_sqrt(), None);
        let sqrt2 = Scalar::theta_pow(Scalar::one(), 2);
        assert_eq!(sqrt2.exact_sqrt(), Some(Scalar::theta()));
        let r = Scalar::theta_pow(Scalar::int(2), 2).exact_sqrt().unwrap();
        assert_eq!(&r * &r, Scalar::theta_pow(Scalar::int(2), 2));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("6/4").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-7").unwrap(), BigRational::from_integer((-7).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&BigRational::new((-3).into(), 6.into())), "-1/2");
    }
}
