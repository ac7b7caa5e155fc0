//! Machine-integer incidence for hypersphere scans over rational points.
//!
//! Each lift is scaled to a primitive `i128` vector, and the coefficient
//! vector of the hypersphere through `n + 1` lifts is their generalized cross
//! product (signed maximal minors). Every operation is checked; `None` means
//! "overflowed, use exact rationals instead", never a wrong answer.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::geom::{lift, Point};

pub(crate) type Lift = Vec<i128>;

/// The lift of `p` as a primitive integer vector, if it is rational and fits.
pub(crate) fn int_lift(p: &Point) -> Option<Lift> {
    let l = lift(p);
    let mut den = num_bigint::BigInt::one();
    for s in &l {
        den = den.lcm(s.as_rational()?.denom());
    }
    let mut out = Vec::with_capacity(l.len());
    for s in &l {
        let q = s.as_rational()?;
        out.push((q.numer() * (&den / q.denom())).to_i128()?);
    }
    Some(out)
}

pub(crate) fn int_lifts(points: &[(Point, impl Sized)]) -> Option<Vec<Lift>> {
    points.iter().map(|(p, _)| int_lift(p)).collect()
}

/// Determinant by fraction-free (Bareiss) elimination; `None` on overflow.
fn det(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Some(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    sign.checked_mul(m[n - 1][n - 1])
}

/// Coefficient vector (up to scale) of the hypersphere through the given
/// `n + 1` lifts of length `n + 2`: zero when they are dependent.
pub(crate) fn normal(lifts: &[&Lift]) -> Option<Vec<i128>> {
    let cols = lifts[0].len();
    let mut out = Vec::with_capacity(cols);
    for j in 0..cols {
        let minor: Vec<Vec<i128>> = lifts
            .iter()
            .map(|l| l.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let d = det(minor)?;
        out.push(if j % 2 == 0 { d } else { d.checked_neg()? });
    }
    let g = out.iter().fold(0i128, |g, &x| g.gcd(&x));
    if !g.is_zero() {
        for x in out.iter_mut() {
            *x /= g;
        }
    }
    Some(out)
}

/// Integer row echelon form grown one vector at a time.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the rows so far; reports whether it
    /// was added. `None` on overflow.
    pub(crate) fn insert(&mut self, v: &[i128]) -> Option<bool> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p] != 0 {
                let (a, b) = (row[*p], v[*p]);
                for (x, r) in v.iter_mut().zip(row) {
                    *x = x.checked_mul(a)?.checked_sub(r.checked_mul(b)?)?;
                }
                let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    v.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, v));
                Some(true)
            }
            None => Some(false),
        }
    }
}

pub(crate) fn incident(normal: &[i128], lift: &Lift) -> Option<bool> {
    let mut acc = 0i128;
    for (a, b) in normal.iter().zip(lift) {
        acc = acc.checked_add(a.checked_mul(*b)?)?;
    }
    Some(acc == 0)
}
