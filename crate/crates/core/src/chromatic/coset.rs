use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::colorings::{random_nonzero_rational, rng};
use crate::exactnum::{norm_class_of, NormClass, Scalar};

use super::ChromaticError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transfer {
    /// `h(r₁|r₂r₃) = r₂r₃/r₁`: with signed norms `r₂, r₃` on one line and `r₁`
    /// on the other, the fourth point of the circle through all three.
    H,
    /// `m(r₁|r₂r₃) = (r₃/r₂)·r₁`.
    M,
}

pub fn transfer(kind: Transfer, r1: &Scalar, r2: &Scalar, r3: &Scalar) -> Result<Scalar, ChromaticError> {
    if r1.is_zero() || r2.is_zero() || r3.is_zero() {
        return Err(ChromaticError::ZeroInput);
    }
    Ok(match kind {
        Transfer::H => r2.try_mul(r3)?.try_div(r1)?,
        Transfer::M => r3.try_div(r2)?.try_mul(r1)?,
    })
}

/// Signed-norm classes on the two lines: `X₄, X₅` on the line of colors
/// 1, 4, 5 and `Y₂, Y₃` on the line of colors 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CosetClass {
    X4,
    X5,
    Y2,
    Y3,
}

pub type ClassOracle = Arc<dyn Fn(CosetClass, &Scalar) -> bool + Send + Sync>;

/// Sampled signed-norm classes with a membership rule for each class.
#[derive(Clone)]
pub struct CosetModel {
    pub x4: Vec<Scalar>,
    pub x5: Vec<Scalar>,
    pub y2: Vec<Scalar>,
    pub y3: Vec<Scalar>,
    /// Coset representatives of `Y₂, Y₃, X₄`.
    pub reps: [(CosetClass, Scalar); 3],
    pub oracle: Option<ClassOracle>,
}

impl fmt::Debug for CosetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetModel")
            .field("x4", &self.x4.len())
            .field("x5", &self.x5.len())
            .field("y2", &self.y2.len())
            .field("y3", &self.y3.len())
            .field("reps", &self.reps)
            .field("oracle", &self.oracle.is_some())
            .finish()
    }
}

impl CosetModel {
    /// The two-line coloring's classes: `X₅ = Q*`, `X₄ = θ²Q*`, `Y₂ = θQ*`,
    /// `Y₃ = θ³Q*` (= 2^{-1/4}Q*). `X₅` samples start with 1.
    pub fn two_line(per_class: usize, seed: u64) -> CosetModel {
        let mut r = rng(seed);
        let mut class = |power: usize| -> Vec<Scalar> {
            let mut out: Vec<Scalar> = Vec::with_capacity(per_class);
            if power == 0 {
                out.push(Scalar::one());
            }
            while out.len() < per_class {
                let s = Scalar::theta_pow(random_nonzero_rational(&mut r, 60, 30), power);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            out
        };
        let x5 = class(0);
        let x4 = class(2);
        let y2 = class(1);
        let y3 = class(3);
        let oracle: ClassOracle = Arc::new(|c: CosetClass, s: &Scalar| {
            let expected = match c {
                CosetClass::X5 => NormClass::QStar,
                CosetClass::X4 => NormClass::Root2QStar,
                CosetClass::Y2 => NormClass::QuarticQStar,
                CosetClass::Y3 => NormClass::InvQuarticQStar,
            };
            matches!(norm_class_of(s), Ok(Some(k)) if k == expected)
        });
        CosetModel {
            x4,
            x5,
            y2,
            y3,
            reps: [
                (CosetClass::Y2, Scalar::theta()),
                (CosetClass::Y3, Scalar::theta_pow(Scalar::ratio(1, 2), 3)),
                (CosetClass::X4, Scalar::theta_pow(Scalar::one(), 2)),
            ],
            oracle: Some(oracle),
        }
    }

    pub fn samples(&self, c: CosetClass) -> &[Scalar] {
        match c {
            CosetClass::X4 => &self.x4,
            CosetClass::X5 => &self.x5,
            CosetClass::Y2 => &self.y2,
            CosetClass::Y3 => &self.y3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetViolation {
    pub rule: String,
    pub inputs: Vec<String>,
    pub value: String,
    pub expected: CosetClass,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CosetReport {
    pub checks: usize,
    pub violation_count: usize,
    /// The first violations found (at most 100).
    pub violations: Vec<CosetViolation>,
}

impl CosetReport {
    fn record(&mut self, ok: bool, rule: &str, inputs: &[&Scalar], value: &Scalar, expected: CosetClass) {
        self.checks += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < 100 {
                self.violations.push(CosetViolation {
                    rule: rule.to_string(),
                    inputs: inputs.iter().map(|s| s.to_string()).collect(),
                    value: value.to_string(),
                    expected,
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks the closure rules the signed-norm classes satisfy when no circle
/// carries four colors:
///
/// * every sample belongs to its own class, and `1 ∈ X₅`;
/// * `h(xᵢ|y₂y₃) ∈ Xᵢ` and `h(yⱼ|x₄x₅) ∈ Yⱼ`;
/// * `m(xᵢ|yⱼyⱼ') ∈ Xᵢ` and `m(yⱼ|xᵢxᵢ') ∈ Yⱼ`;
/// * quotients of two samples of one class lie in `X₅`;
/// * fourth powers of the coset representatives lie in `X₅`.
pub fn coset_closure_check(model: &CosetModel) -> Result<CosetReport, ChromaticError> {
    use CosetClass::*;
    let oracle = model.oracle.as_ref().ok_or(ChromaticError::MissingOracle)?;
    for c in [X4, X5, Y2, Y3] {
        if model.samples(c).is_empty() {
            return Err(ChromaticError::Degenerate(format!("no samples for {c:?}")));
        }
    }
    let mut report = CosetReport::default();
    let member = |c, s: &Scalar| oracle(c, s);

    for c in [X4, X5, Y2, Y3] {
        for s in model.samples(c) {
            report.record(member(c, s), "sample in class", &[s], s, c);
        }
    }
    let one = Scalar::one();
    report.record(member(X5, &one), "1 in X5", &[], &one, X5);

    // h(r|a a') = (a·a')·r⁻¹ and m(r|a a') = (a'/a)·r; the inner factor is
    // computed once per pair.
    let recips = |c: CosetClass| -> Result<Vec<Scalar>, ChromaticError> {
        Ok(model.samples(c).iter().map(Scalar::try_recip).collect::<Result<_, _>>()?)
    };
    let products = |a: &[Scalar], b: &[Scalar]| -> Result<Vec<(usize, usize, Scalar)>, ChromaticError> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out.push((i, j, x.try_mul(y)?));
            }
        }
        Ok(out)
    };
    let y_products = products(&model.y2, &model.y3)?;
    for xc in [X4, X5] {
        let inv = recips(xc)?;
        for (xi, xr) in model.samples(xc).iter().zip(&inv) {
            for (i, j, p) in &y_products {
                let v = p.try_mul(xr)?;
                report.record(member(xc, &v), "h(x|y2 y3)", &[xi, &model.y2[*i], &model.y3[*j]], &v, xc);
            }
        }
    }
    let x_products = products(&model.x4, &model.x5)?;
    for yc in [Y2, Y3] {
        let inv = recips(yc)?;
        for (yj, yr) in model.samples(yc).iter().zip(&inv) {
            for (i, j, p) in &x_products {
                let v = p.try_mul(yr)?;
                report.record(member(yc, &v), "h(y|x4 x5)", &[yj, &model.x4[*i], &model.x5[*j]], &v, yc);
            }
        }
    }
    for (outer, inner) in [(X4, Y2), (X4, Y3), (X5, Y2), (X5, Y3), (Y2, X4), (Y2, X5), (Y3, X4), (Y3, X5)] {
        let mut quotients: Vec<(&Scalar, &Scalar, Scalar)> = Vec::new();
        for (a, b) in model.samples(inner).iter().tuple_combinations() {
            let q = b.try_div(a)?;
            let inv = q.try_recip()?;
            quotients.push((a, b, q));
            quotients.push((b, a, inv));
        }
        for r in model.samples(outer) {
            for (a, b, q) in &quotients {
                let v = q.try_mul(r)?;
                report.record(member(outer, &v), "m(r|a a')", &[r, a, b], &v, outer);
            }
        }
    }
    for c in [X4, X5, Y2, Y3] {
        for (a, b) in model.samples(c).iter().tuple_combinations() {
            let v = b.try_div(a)?;
            report.record(member(X5, &v), "quotient in X5", &[b, a], &v, X5);
        }
    }
    for (c, rep) in &model.reps {
        report.record(member(*c, rep), "representative in class", &[rep], rep, *c);
        let v = rep.pow(4);
        report.record(member(X5, &v), "fourth power in X5", &[rep], &v, X5);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_examples() {
        let s = Scalar::int;
        assert_eq!(transfer(Transfer::H, &s(2), &s(3), &s(4)).unwrap(), s(6));
        assert_eq!(transfer(Transfer::M, &s(2), &s(3), &s(6)).unwrap(), s(4));
        assert_eq!(transfer(Transfer::H, &s(0), &s(3), &s(4)), Err(ChromaticError::ZeroInput));
    }

    #[test]
    fn m_factors_through_h() {
        // m(x|y y') = h(h(x|y z)|y' z) for any z.
        let s = |a, b| Scalar::ratio(a, b);
        let (x, y, y2, z) = (s(3, 7), s(-5, 2), s(11, 3), s(2, 9));
        let inner = transfer(Transfer::H, &x, &y, &z).unwrap();
        assert_eq!(
            transfer(Transfer::H, &inner, &y2, &z).unwrap(),
            transfer(Transfer::M, &x, &y, &y2).unwrap()
        );
    }

    #[test]
    fn two_line_model_passes() {
        let report = coset_closure_check(&CosetModel::two_line(6, 1)).unwrap();
        assert!(report.passed(), "{:?}", report.violations.first());
        assert!(report.checks > 0);
    }

    #[test]
    fn mislabeled_model_fails() {
        let mut model = CosetModel::two_line(6, 1);
        model.x4 = model.y2.clone();
        let report = coset_closure_check(&model).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn missing_oracle() {
        let mut model = CosetModel::two_line(2, 1);
        model.oracle = None;
        assert_eq!(coset_closure_check(&model).unwrap_err(), ChromaticError::MissingOracle);
    }
}
