//! Dense Gaussian elimination over [`Scalar`].
//!
//! Exact backends pivot on the first nonzero entry. Floats pivot on the
//! largest magnitude and treat entries within epsilon as zero.

use crate::exactnum::{Backend, Scalar};


pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc: Option<Scalar> = None;
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let t = x * y;
        acc = Some(match acc {
            Some(s) => s + t,
            None => t,
        });
    }
    acc.unwrap_or_else(|| match a.iter().chain(b).next() {
        Some(s) => s.zero_like(),
        None => Scalar::zero(),
    })
}

pub fn norm_sq(a: &[Scalar]) -> Scalar {
    dot(a, a)
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Scalar], k: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * k).collect()
}

/// `a + k·b`
pub fn axpy(a: &[Scalar], k: &Scalar, b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

fn is_float(rows: &[Vec<Scalar>]) -> bool {
    rows.iter()
        .flatten()
        .any(|s| s.backend() == Backend::Float64)
}

/// Reduces `rows` in place to reduced row echelon form; returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let float = is_float(rows);
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let pick = if float {
            (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .max_by(|&i, &j| rows[i][col].to_f64().abs().total_cmp(&rows[j][col].to_f64().abs()))
        } else {
            (r..rows.len()).find(|&i| !rows[i][col].is_zero())
        };
        let Some(p) = pick else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].try_recip().expect("pivot is nonzero");
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let k = -&rows[i][col];
                let reduced = axpy(&rows[i], &k, &rows[r]);
                rows[i] = reduced;
                if float {
                    rows[i][col] = Scalar::float(0.0);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : rows·x = 0}`, one vector per free column, in column order.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let float = is_float(rows);
    let zero = if float { Scalar::float(0.0) } else { Scalar::zero() };
    let one = if float { Scalar::float(1.0) } else { Scalar::one() };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[free] = one.clone();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -&row[free];
        }
        basis.push(v);
    }
    basis
}

/// Determinant of a square matrix.
pub fn det(rows: &[Vec<Scalar>]) -> Scalar {
    let n = rows.len();
    let float = is_float(rows);
    let mut m = rows.to_vec();
    let mut d = if float { Scalar::float(1.0) } else { Scalar::one() };
    for col in 0..n {
        let pick = if float {
            (col..n)
                .filter(|&i| !m[i][col].is_zero())
                .max_by(|&i, &j| m[i][col].to_f64().abs().total_cmp(&m[j][col].to_f64().abs()))
        } else {
            (col..n).find(|&i| !m[i][col].is_zero())
        };
        let Some(p) = pick else {
            return if float { Scalar::float(0.0) } else { Scalar::zero() };
        };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        d = &d * &m[col][col];
        let inv = m[col][col].try_recip().expect("pivot is nonzero");
        for i in col + 1..n {
            if !m[i][col].is_zero() {
                let k = -(&m[i][col] * &inv);
                m[i] = axpy(&m[i], &k, &m[col]);
            }
        }
    }
    d
}

/// Solves `a·x = b` for square, nonsingular `a`.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Orthogonalizes `vectors` (Gram–Schmidt without normalization, so exact
/// inputs stay exact). Dependent vectors are dropped.
pub fn orthogonalize(vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for e in &out {
            let k = dot(&w, e) / norm_sq(e);
            if !k.is_zero() {
                w = axpy(&w, &-k, e);
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            out.push(w);
        }
    }
    out
}

/// Component of `v` orthogonal to the span of the orthogonal basis `basis`.
pub fn reject(v: &[Scalar], basis: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut w = v.to_vec();
    for e in basis {
        let k = dot(v, e) / norm_sq(e);
        if !k.is_zero() {
            w = axpy(&w, &-k, e);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Scalar::int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            assert!(dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 3]])), Scalar::int(5));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), Scalar::int(-1));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), Scalar::zero());
    }

    #[test]
    fn linear_solve() {
        let x = solve(&m(&[&[2, 1], &[1, 3]]), &[Scalar::int(3), Scalar::int(5)]).unwrap();
        assert_eq!(x, vec![Scalar::ratio(4, 5), Scalar::ratio(7, 5)]);
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[Scalar::one(), Scalar::one()]).is_none());
    }

    #[test]
    fn gram_schmidt_is_orthogonal() {
        let basis = orthogonalize(&m(&[&[1, 1, 0], &[1, 0, 1], &[2, 1, 1]]));
        assert_eq!(basis.len(), 2);
        assert!(dot(&basis[0], &basis[1]).is_zero());
    }
}
