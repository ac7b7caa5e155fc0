//! The quartic field Q(θ) with θ⁴ = 2, θ = 2^{1/4} > 0.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `c0 + c1·θ + c2·θ² + c3·θ³` with rational coefficients.
///
/// The power basis is a basis of Q(θ) over Q, so coefficient-wise equality is
/// field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quartic {
    coeffs: [BigRational; 4],
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Quartic {
    pub fn new(coeffs: [BigRational; 4]) -> Self {
        Quartic { coeffs }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Quartic::new(c.map(rat))
    }

    pub fn zero() -> Self {
        Quartic::from_ints([0, 0, 0, 0])
    }

    pub fn one() -> Self {
        Quartic::from_ints([1, 0, 0, 0])
    }

    /// θ = 2^{1/4}.
    pub fn theta() -> Self {
        Quartic::from_ints([0, 1, 0, 0])
    }

    pub fn from_rational(q: BigRational) -> Self {
        let z = BigRational::zero();
        Quartic::new([q, z.clone(), z.clone(), z])
    }

    /// `q·θ^power` for `power` in 0..4.
    pub fn monomial(q: BigRational, power: usize) -> Self {
        assert!(power < 4, "power basis index out of range");
        let mut c = Quartic::zero().coeffs;
        c[power] = q;
        Quartic::new(c)
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element is the rational `q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// `Some((j, q))` when the element is `q·θ^j` with `q ≠ 0`.
    pub fn as_monomial(&self) -> Option<(usize, &BigRational)> {
        let mut found = None;
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((j, c));
            }
        }
        found
    }

    pub fn add(&self, other: &Quartic) -> Quartic {
        let mut c = self.coeffs.clone();
        for (x, y) in c.iter_mut().zip(&other.coeffs) {
            if !y.is_zero() {
                *x = &*x + y;
            }
        }
        Quartic::new(c)
    }

    pub fn sub(&self, other: &Quartic) -> Quartic {
        let mut c = self.coeffs.clone();
        for (x, y) in c.iter_mut().zip(&other.coeffs) {
            if !y.is_zero() {
                *x = &*x - y;
            }
        }
        Quartic::new(c)
    }

    pub fn neg(&self) -> Quartic {
        Quartic::new(self.coeffs.clone().map(|c| -c))
    }

    pub fn scale(&self, q: &BigRational) -> Quartic {
        Quartic::new(self.coeffs.clone().map(|c| c * q))
    }

    fn mul_monomial(&self, power: usize, q: &BigRational) -> Quartic {
        let mut c = Quartic::zero().coeffs;
        let two = rat(2);
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let k = i + power;
            let v = x * q;
            if k >= 4 {
                c[k - 4] = v * &two;
            } else {
                c[k] = v;
            }
        }
        Quartic::new(c)
    }

    pub fn mul(&self, other: &Quartic) -> Quartic {
        if let Some((j, q)) = other.as_monomial() {
            return self.mul_monomial(j, q);
        }
        if let Some((j, q)) = self.as_monomial() {
            return other.mul_monomial(j, q);
        }
        let mut prod: [BigRational; 7] = std::array::from_fn(|_| BigRational::zero());
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let two = rat(2);
        let [p0, p1, p2, p3, p4, p5, p6] = prod;
        // θ⁴ = 2
        Quartic::new([p0 + p4 * &two, p1 + p5 * &two, p2 + p6 * &two, p3])
    }

    /// Multiplicative inverse, `None` for zero.
    ///
    /// Uses the tower Q ⊂ Q(√2) ⊂ Q(θ) with √2 = θ²: writing the element as
    /// `u + vθ` with `u, v ∈ Q(√2)`, multiply by `u − vθ` to land in Q(√2), then
    /// by the Q(√2)-conjugate to land in Q.
    pub fn inv(&self) -> Option<Quartic> {
        if self.is_zero() {
            return None;
        }
        if let Some((j, q)) = self.as_monomial() {
            // (qθ^j)⁻¹ = θ^{4-j} / (2q)
            return Some(if j == 0 {
                Quartic::from_rational(q.recip())
            } else {
                Quartic::monomial((q * rat(2)).recip(), 4 - j)
            });
        }
        let [c0, c1, c2, c3] = &self.coeffs;
        let two = rat(2);
        // u = c0 + c2·√2, v = c1 + c3·√2
        // u² − √2·v² = s + t·√2
        let u2 = (c0 * c0 + c2 * c2 * &two, c0 * c2 * &two);
        let v2 = (c1 * c1 + c3 * c3 * &two, c1 * c3 * &two);
        let s = &u2.0 - &v2.1 * &two;
        let t = &u2.1 - &v2.0;
        // (s + t√2)⁻¹ = (s − t√2) / (s² − 2t²)
        let norm = &s * &s - &t * &t * &two;
        let w0 = &s / &norm;
        let w1 = -(&t / &norm);
        // inverse = (u − vθ)·(w0 + w1√2)
        let conj = Quartic::new([c0.clone(), -c1.clone(), c2.clone(), -c3.clone()]);
        let w = Quartic::new([w0, BigRational::zero(), w1, BigRational::zero()]);
        Some(conj.mul(&w))
    }

    pub fn div(&self, other: &Quartic) -> Option<Quartic> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Sign of the real number this element denotes.
    ///
    /// Exact zero test on the coefficients, then certified interval
    /// refinement of θ: on `[lo, hi] ∋ θ` every term `cᵢθⁱ` is monotone, so
    /// the polynomial is bracketed; the bracket is refined until it excludes
    /// zero, which happens because the value is nonzero.
    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some((_, q)) = self.as_monomial() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut bits = 48u32;
        loop {
            let lo = theta_floor(bits);
            let hi = &lo + 1u32;
            let (low, high) = bracket(&nums, &lo, &hi, bits);
            if low.sign() == Sign::Plus {
                return 1;
            }
            if high.sign() == Sign::Minus {
                return -1;
            }
            bits *= 2;
        }
    }

    /// The nonnegative square root, when it lies in Q(θ).
    ///
    /// Writes the element as `u + vθ` over Q(√2) and solves
    /// `(s + tθ)² = u + vθ`, i.e. `s² + √2·t² = u`, `2st = v`.
    pub fn sqrt(&self) -> Option<Quartic> {
        if self.signum() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(Quartic::zero());
        }
        let [c0, c1, c2, c3] = &self.coeffs;
        let u = Root2(c0.clone(), c2.clone());
        let v = Root2(c1.clone(), c3.clone());
        let mut candidates: Vec<(Root2, Root2)> = Vec::new();
        if v.is_zero() {
            if let Some(s) = u.sqrt() {
                candidates.push((s, Root2::zero()));
            }
            if let Some(t) = u.div(&Root2(rat(0), rat(1))).sqrt() {
                candidates.push((Root2::zero(), t));
            }
        } else if let Some(r) = u.mul(&u).sub(&Root2(rat(0), rat(1)).mul(&v).mul(&v)).sqrt() {
            for sq in [u.add(&r), u.sub(&r)] {
                if let Some(s) = sq.scale(&BigRational::new(1.into(), 2.into())).sqrt().filter(|s| !s.is_zero()) {
                    let t = v.div(&s.scale(&rat(2)));
                    candidates.push((s, t));
                }
            }
        }
        candidates.into_iter().find_map(|(s, t)| {
            let root = Quartic::new([s.0, t.0, s.1, t.1]);
            if &root.mul(&root) != self {
                return None;
            }
            Some(if root.signum() < 0 { root.neg() } else { root })
        })
    }

    pub fn cmp_real(&self, other: &Quartic) -> Ordering {
        match self.sub(other).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let t = 2f64.powf(0.25);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| rational_to_f64(c) * t.powi(i as i32))
            .sum()
    }
}

/// `a + b·√2` with rational `a, b`.
#[derive(Clone)]
struct Root2(BigRational, BigRational);

impl Root2 {
    fn zero() -> Root2 {
        Root2(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }

    fn add(&self, o: &Root2) -> Root2 {
        Root2(&self.0 + &o.0, &self.1 + &o.1)
    }

    fn sub(&self, o: &Root2) -> Root2 {
        Root2(&self.0 - &o.0, &self.1 - &o.1)
    }

    fn scale(&self, k: &BigRational) -> Root2 {
        Root2(&self.0 * k, &self.1 * k)
    }

    fn mul(&self, o: &Root2) -> Root2 {
        Root2(&self.0 * &o.0 + &self.1 * &o.1 * rat(2), &self.0 * &o.1 + &self.1 * &o.0)
    }

    /// Panics on a zero divisor; callers divide by nonzero values only.
    fn div(&self, o: &Root2) -> Root2 {
        let norm = &o.0 * &o.0 - &o.1 * &o.1 * rat(2);
        let conj = Root2(o.0.clone(), -o.1.clone());
        self.mul(&conj).scale(&norm.recip())
    }

    /// Some square root in Q(√2), if one exists.
    fn sqrt(&self) -> Option<Root2> {
        let (p, q) = (&self.0, &self.1);
        if q.is_zero() {
            if let Some(a) = rational_sqrt(p) {
                return Some(Root2(a, BigRational::zero()));
            }
            return rational_sqrt(&(p / rat(2))).map(|b| Root2(BigRational::zero(), b));
        }
        // (a + b√2)² = p + q√2 with b = q/(2a): a⁴ − p·a² + q²/2 = 0
        let r = rational_sqrt(&(p * p - q * q * rat(2)))?;
        [(p + &r) / rat(2), (p - &r) / rat(2)].iter().find_map(|a2| {
            let a = rational_sqrt(a2).filter(|a| !a.is_zero())?;
            let b = q / (&a * rat(2));
            Some(Root2(a, b))
        })
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&(&n * &n) == q.numer() && &(&d * &d) == q.denom()).then(|| BigRational::new(n, d))
}

/// `floor(2^bits · θ)`, i.e. the integer fourth root of `2^{4·bits+1}`.
fn theta_floor(bits: u32) -> BigInt {
    static BASE: OnceLock<BigInt> = OnceLock::new();
    if bits == 48 {
        return BASE.get_or_init(|| theta_floor_uncached(48)).clone();
    }
    theta_floor_uncached(bits)
}

fn theta_floor_uncached(bits: u32) -> BigInt {
    (BigInt::one() << (4 * bits as usize + 1)).nth_root(4)
}

/// Bounds on `2^{3k}·Σ nᵢθⁱ` for θ ∈ [lo/2^k, hi/2^k].
fn bracket(nums: &[BigInt], lo: &BigInt, hi: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let mut low = BigInt::zero();
    let mut high = BigInt::zero();
    let mut lo_pow = BigInt::one();
    let mut hi_pow = BigInt::one();
    for (i, n) in nums.iter().enumerate() {
        if !n.is_zero() {
            let shift = (bits as usize) * (3 - i);
            let a = (n * &lo_pow) << shift;
            let b = (n * &hi_pow) << shift;
            if n.is_positive() {
                low += a;
                high += b;
            } else {
                low += b;
                high += a;
            }
        }
        lo_pow *= lo;
        hi_pow *= hi;
    }
    (low, high)
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale both down first
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl fmt::Debug for Quartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Quartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "θ", "θ²", "θ³"];
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", name)?;
            } else {
                write!(f, "({})·{}", c, name)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn theta_times_theta_cubed_is_two() {
        let p = Quartic::theta().mul(&Quartic::from_ints([0, 0, 0, 1]));
        assert_eq!(p, Quartic::from_ints([2, 0, 0, 0]));
    }

    #[test]
    fn inverse_of_theta() {
        let inv = Quartic::theta().inv().unwrap();
        assert_eq!(inv, Quartic::new([q(0, 1), q(0, 1), q(0, 1), q(1, 2)]));
        assert_eq!(inv.mul(&Quartic::theta()), Quartic::one());
    }

    #[test]
    fn general_inverse_round_trips() {
        let a = Quartic::new([q(3, 2), q(-1, 1), q(5, 7), q(2, 3)]);
        assert_eq!(a.mul(&a.inv().unwrap()), Quartic::one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Quartic::zero().inv().is_none());
    }

    #[test]
    fn theta_floor_brackets_theta() {
        for bits in [48u32, 96, 192] {
            let lo = theta_floor(bits);
            let two_scaled = BigInt::from(2) << (4 * bits as usize);
            assert!(lo.pow(4) < two_scaled);
            assert!((&lo + 1u32).pow(4) > two_scaled);
        }
    }

    #[test]
    fn signs_of_small_elements() {
        assert_eq!(Quartic::zero().signum(), 0);
        assert_eq!(Quartic::from_ints([-1, 1, 0, 0]).signum(), 1);
        assert_eq!(Quartic::from_ints([3, 0, -2, 0]).signum(), 1);
        assert_eq!(Quartic::from_ints([-3, 0, 2, 0]).signum(), -1);
    }

    #[test]
    fn sign_needs_refinement_near_zero() {
        // 1 - θ·c with c a close rational approximation of 1/θ
        let c = q(840_896_415_253, 1_000_000_000_000);
        let a = Quartic::new([q(1, 1), -c, q(0, 1), q(0, 1)]);
        assert_eq!(a.signum(), if a.to_f64() > 0.0 { 1 } else { -1 });
    }
}
