//! JSON encodings of scalars, geometry, colorings, maps and reports.
//!
//! Objects are emitted with sorted keys, so equal values always serialize to
//! identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::chromatic::{CosetReport, PolychromaticWitness, SeparationWitness, SharpnessReport};
use crate::colorings::{ColorIndex, ColoredConfig, ColoringError, ProceduralColoring};
use crate::euclid::{GreatFlat, GreatIntersection, GreatSharpnessReport, GreatWitness};
use crate::exactnum::{format_rational, parse_rational, NumError, Quartic, Scalar};
use crate::geom::{Flat, GeomError, Hypersphere, Point, Sphere, SubSphere};
use crate::moebius::{MoebiusError, MoebiusMap, PrimitiveMap};
use crate::wcp::{CgpReport, FiniteImageMap, WcpError, WcpViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Wcp(#[from] WcpError),
}

fn bad(what: impl Into<String>) -> JsonError {
    JsonError::Malformed(what.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn uint(v: &Value, what: &str) -> Result<u64, JsonError> {
    v.as_u64().ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

/// Values with a canonical JSON form.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for Scalar {
    fn to_json(&self) -> Value {
        match self {
            Scalar::Rational(q) => Value::String(format_rational(q)),
            Scalar::Quartic(q) => Value::Array(q.coeffs().iter().map(|c| Value::String(format_rational(c))).collect()),
            Scalar::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
        }
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, JsonError> {
    match v {
        Value::String(s) => Ok(Scalar::rational(parse_rational(s)?)),
        Value::Array(items) if items.len() == 4 => {
            let mut coeffs: Vec<BigRational> = Vec::with_capacity(4);
            for item in items {
                let s = item.as_str().ok_or_else(|| bad("quartic coefficients must be strings"))?;
                coeffs.push(parse_rational(s)?);
            }
            let coeffs: [BigRational; 4] = coeffs.try_into().expect("four coefficients");
            Ok(Scalar::quartic(Quartic::new(coeffs)))
        }
        Value::Number(n) => n.as_f64().map(Scalar::float).ok_or_else(|| bad("unrepresentable number")),
        _ => Err(bad(format!("not a scalar: {v}"))),
    }
}

fn vec_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(ToJson::to_json).collect())
}

pub fn vector_from_json(v: &Value) -> Result<Vec<Scalar>, JsonError> {
    array(v, "vector")?.iter().map(scalar_from_json).collect()
}

impl ToJson for Point {
    fn to_json(&self) -> Value {
        match self.coords() {
            Some(x) => json!({ "coords": vec_to_json(x) }),
            None => json!({ "infinity": true }),
        }
    }
}

/// Decodes a point; `dim` supplies the dimension of ∞.
pub fn point_from_json(v: &Value, dim: Option<usize>) -> Result<Point, JsonError> {
    if v.get("infinity").and_then(Value::as_bool) == Some(true) {
        return dim.map(Point::infinity).ok_or_else(|| bad("cannot infer the dimension of infinity"));
    }
    let p = Point::new(vector_from_json(field(v, "coords")?)?)?;
    if let Some(d) = dim {
        if p.dim() != d {
            return Err(GeomError::DimensionMismatch { expected: d, found: p.dim() }.into());
        }
    }
    Ok(p)
}

/// Decodes a list of points, taking the dimension of ∞ from `dim` or from the
/// first finite point.
pub fn points_from_json(items: &[Value], dim: Option<usize>) -> Result<Vec<Point>, JsonError> {
    let dim = match dim {
        Some(d) => Some(d),
        None => items
            .iter()
            .find_map(|v| v.get("coords").and_then(Value::as_array).map(Vec::len)),
    };
    items.iter().map(|v| point_from_json(v, dim)).collect()
}

impl ToJson for Hypersphere {
    fn to_json(&self) -> Value {
        json!({ "c": self.c().to_json(), "b": vec_to_json(self.b()), "a": self.a().to_json() })
    }
}

pub fn hypersphere_from_json(v: &Value) -> Result<Hypersphere, JsonError> {
    Ok(Hypersphere::new(
        scalar_from_json(field(v, "c")?)?,
        vector_from_json(field(v, "b")?)?,
        scalar_from_json(field(v, "a")?)?,
    )?)
}

impl ToJson for Flat {
    fn to_json(&self) -> Value {
        json!({ "base": vec_to_json(self.base()), "basis": self.basis().iter().map(|b| vec_to_json(b)).collect::<Vec<_>>() })
    }
}

pub fn flat_from_json(v: &Value) -> Result<Flat, JsonError> {
    let base = vector_from_json(field(v, "base")?)?;
    let basis: Vec<Vec<Scalar>> = array(field(v, "basis")?, "basis")?.iter().map(vector_from_json).collect::<Result<_, _>>()?;
    if let Some(b) = basis.iter().find(|b| b.len() != base.len()) {
        return Err(GeomError::DimensionMismatch { expected: base.len(), found: b.len() }.into());
    }
    Ok(Flat::spanned(&base, &basis))
}

impl ToJson for Sphere {
    fn to_json(&self) -> Value {
        match self {
            Sphere::Hyper(h) => h.to_json(),
            Sphere::Sub(s) => json!({ "carrier": s.carrier().to_json(), "surface": s.surface().to_json(), "dim": s.dim() }),
        }
    }
}

pub fn sphere_from_json(v: &Value) -> Result<Sphere, JsonError> {
    if v.get("carrier").is_some() {
        let s = SubSphere::new(flat_from_json(field(v, "carrier")?)?, hypersphere_from_json(field(v, "surface")?)?)?;
        Ok(Sphere::Sub(s))
    } else {
        Ok(Sphere::Hyper(hypersphere_from_json(v)?))
    }
}

impl ToJson for PrimitiveMap {
    fn to_json(&self) -> Value {
        match self {
            PrimitiveMap::Inversion { center, radius_sq } => {
                json!({ "inversion": { "center": vec_to_json(center), "r2": radius_sq.to_json() } })
            }
            PrimitiveMap::Reflection { normal, offset } => {
                json!({ "reflection": { "normal": vec_to_json(normal), "offset": offset.to_json() } })
            }
        }
    }
}

impl ToJson for MoebiusMap {
    fn to_json(&self) -> Value {
        json!({ "dim": self.dim(), "factors": self.factors().iter().map(ToJson::to_json).collect::<Vec<_>>() })
    }
}

pub fn moebius_from_json(v: &Value) -> Result<MoebiusMap, JsonError> {
    let mut factors = Vec::new();
    for f in array(field(v, "factors")?, "factors")? {
        factors.push(if let Some(inv) = f.get("inversion") {
            PrimitiveMap::inversion(vector_from_json(field(inv, "center")?)?, scalar_from_json(field(inv, "r2")?)?)?
        } else if let Some(r) = f.get("reflection") {
            PrimitiveMap::reflection(vector_from_json(field(r, "normal")?)?, scalar_from_json(field(r, "offset")?)?)?
        } else {
            return Err(bad("factor must be an inversion or a reflection"));
        });
    }
    let dim = match v.get("dim") {
        Some(d) => uint(d, "dim")? as usize,
        None => factors.first().map(PrimitiveMap::dim).ok_or_else(|| bad("an empty map needs `dim`"))?,
    };
    Ok(MoebiusMap::new(dim, factors)?)
}

fn colors_to_json(colors: &[ColorIndex]) -> Value {
    Value::Array(colors.iter().map(|c| json!(c.0)).collect())
}

fn color_from_json(v: &Value) -> Result<ColorIndex, JsonError> {
    let c = uint(v, "color")?;
    u32::try_from(c).map(ColorIndex).map_err(|_| bad("color out of range"))
}

impl ToJson for ProceduralColoring {
    fn to_json(&self) -> Value {
        let kind = self.name();
        match self {
            ProceduralColoring::FlagInversive { n } | ProceduralColoring::FlagEuclidean { n } => json!({ "kind": kind, "n": n }),
            ProceduralColoring::GenericPoints { n, k, points } => json!({
                "kind": kind,
                "n": n,
                "k": k,
                "points": points.iter().map(ToJson::to_json).collect::<Vec<_>>(),
            }),
            ProceduralColoring::TwoLine { .. } => json!({ "kind": kind }),
            ProceduralColoring::PointListBackground { points, colors, background } => json!({
                "kind": kind,
                "points": points.iter().map(ToJson::to_json).collect::<Vec<_>>(),
                "colors": colors_to_json(colors),
                "background": background.0,
            }),
        }
    }
}

/// Decodes a coloring descriptor such as `{"kind":"flag","n":2}`.
pub fn coloring_from_json(v: &Value) -> Result<ProceduralColoring, JsonError> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("`kind` must be a string"))?;
    let n = || -> Result<usize, JsonError> { Ok(uint(field(v, "n")?, "n")? as usize) };
    let c = match kind {
        "flag" => ProceduralColoring::FlagInversive { n: n()? },
        "flag-euclidean" => ProceduralColoring::FlagEuclidean { n: n()? },
        "two-line" | "two-line-extended" => {
            let extended = kind == "two-line-extended" || v.get("extended").and_then(Value::as_bool) == Some(true);
            ProceduralColoring::TwoLine { extended }
        }
        "generic" => {
            let n = n()?;
            let k = u32::try_from(uint(field(v, "k")?, "k")?).map_err(|_| bad("k out of range"))?;
            let points = points_from_json(array(field(v, "points")?, "points")?, Some(n))?;
            ProceduralColoring::GenericPoints { n, k, points }
        }
        "point-list" => {
            let points = points_from_json(array(field(v, "points")?, "points")?, None)?;
            let colors = array(field(v, "colors")?, "colors")?.iter().map(color_from_json).collect::<Result<_, _>>()?;
            let background = color_from_json(field(v, "background")?)?;
            ProceduralColoring::PointListBackground { points, colors, background }
        }
        other => return Err(bad(format!("unknown coloring kind `{other}`"))),
    };
    c.validate()?;
    Ok(c)
}

fn colored_point(p: &Point, c: ColorIndex) -> Value {
    json!({ "point": p.to_json(), "color": c.0 })
}

fn colored_points_from_json(items: &[Value], dim: Option<usize>) -> Result<Vec<(Point, ColorIndex)>, JsonError> {
    let pts: Vec<Value> = items.iter().map(|v| field(v, "point").cloned()).collect::<Result<_, _>>()?;
    let points = points_from_json(&pts, dim)?;
    items
        .iter()
        .zip(points)
        .map(|(v, p)| Ok((p, color_from_json(field(v, "color")?)?)))
        .collect()
}

impl ToJson for ColoredConfig {
    fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points()
            .iter()
            .map(|(p, c)| {
                let mut obj = p.to_json();
                obj["color"] = json!(c.0);
                obj
            })
            .collect();
        json!({ "n": self.n(), "k": self.k(), "points": points })
    }
}

/// Decodes `{"n":2,"k":5,"points":[{"coords":[…],"color":3},{"infinity":true,"color":2}]}`.
pub fn config_from_json(v: &Value) -> Result<ColoredConfig, JsonError> {
    let n = uint(field(v, "n")?, "n")? as usize;
    let k = u32::try_from(uint(field(v, "k")?, "k")?).map_err(|_| bad("k out of range"))?;
    let mut points = Vec::new();
    for item in array(field(v, "points")?, "points")? {
        points.push((point_from_json(item, Some(n))?, color_from_json(field(item, "color")?)?));
    }
    Ok(ColoredConfig::new(n, k, points)?)
}

fn color_set(colors: &BTreeSet<ColorIndex>) -> Value {
    Value::Array(colors.iter().map(|c| json!(c.0)).collect())
}

impl ToJson for PolychromaticWitness {
    fn to_json(&self) -> Value {
        json!({
            "sphere": self.sphere.to_json(),
            "defining": self.defining,
            "points": self.on_points.iter().map(|(p, c)| colored_point(p, *c)).collect::<Vec<_>>(),
            "colors": color_set(&self.colors),
        })
    }
}

pub fn witness_from_json(v: &Value) -> Result<PolychromaticWitness, JsonError> {
    let sphere = sphere_from_json(field(v, "sphere")?)?;
    let on_points = colored_points_from_json(array(field(v, "points")?, "points")?, Some(sphere.ambient_dim()))?;
    let colors = array(field(v, "colors")?, "colors")?.iter().map(color_from_json).collect::<Result<_, _>>()?;
    let defining = match v.get("defining") {
        Some(d) => array(d, "defining")?.iter().map(|i| uint(i, "index").map(|i| i as usize)).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    Ok(PolychromaticWitness { sphere, defining, on_points, colors })
}

impl ToJson for SeparationWitness {
    fn to_json(&self) -> Value {
        json!({
            "sphere": self.sphere.to_json(),
            "defining": self.defining.iter().map(|(p, c)| colored_point(p, *c)).collect::<Vec<_>>(),
            "separated": self.separated_pair.iter().map(|(p, c)| colored_point(p, *c)).collect::<Vec<_>>(),
        })
    }
}

pub fn separation_from_json(v: &Value) -> Result<SeparationWitness, JsonError> {
    let sphere = hypersphere_from_json(field(v, "sphere")?)?;
    let dim = Some(sphere.dim());
    let defining = colored_points_from_json(array(field(v, "defining")?, "defining")?, dim)?;
    let pair = colored_points_from_json(array(field(v, "separated")?, "separated")?, dim)?;
    let separated_pair: [(Point, ColorIndex); 2] = pair.try_into().map_err(|_| bad("`separated` must hold two points"))?;
    Ok(SeparationWitness { sphere, defining, separated_pair })
}

impl ToJson for SharpnessReport {
    fn to_json(&self) -> Value {
        json!({
            "spheres_checked": self.spheres_checked,
            "max_colors": self.max_colors,
            "threshold": self.threshold,
            "violation_count": self.violation_count,
            "violations": self.violations.iter().map(ToJson::to_json).collect::<Vec<_>>(),
        })
    }
}

impl ToJson for CosetReport {
    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

impl ToJson for GreatFlat {
    fn to_json(&self) -> Value {
        json!({ "ambient": self.ambient_dim(), "basis": self.basis().iter().map(|b| vec_to_json(b)).collect::<Vec<_>>() })
    }
}

/// Decodes `{"basis": [[scalar,…],…]}`; `ambient` is needed only for an
/// empty basis.
pub fn great_flat_from_json(v: &Value) -> Result<GreatFlat, JsonError> {
    let basis: Vec<Vec<Scalar>> = array(field(v, "basis")?, "basis")?.iter().map(vector_from_json).collect::<Result<_, _>>()?;
    let ambient = match (v.get("ambient"), basis.first()) {
        (Some(a), _) => uint(a, "ambient")? as usize,
        (None, Some(b)) => b.len(),
        (None, None) => return Err(bad("an empty basis needs `ambient`")),
    };
    GreatFlat::span(ambient, &basis).map_err(|e| bad(e.to_string()))
}

impl ToJson for GreatIntersection {
    fn to_json(&self) -> Value {
        json!({
            "direction": vec_to_json(&self.direction),
            "points": self.points.iter().map(ToJson::to_json).collect::<Vec<_>>(),
            "exact": self.exact,
        })
    }
}

impl ToJson for GreatWitness {
    fn to_json(&self) -> Value {
        json!({
            "flat": self.flat.to_json(),
            "defining": self.defining,
            "points": self.on_points.iter().map(|(p, c)| colored_point(p, *c)).collect::<Vec<_>>(),
            "colors": color_set(&self.colors),
        })
    }
}

impl ToJson for GreatSharpnessReport {
    fn to_json(&self) -> Value {
        json!({
            "spheres_checked": self.spheres_checked,
            "max_colors": self.max_colors,
            "threshold": self.threshold,
            "violation_count": self.violation_count,
            "violations": self.violations.iter().map(ToJson::to_json).collect::<Vec<_>>(),
        })
    }
}

impl ToJson for FiniteImageMap {
    fn to_json(&self) -> Value {
        let table: Map<String, Value> = self.table().iter().map(|(c, i)| (c.to_string(), json!(i))).collect();
        json!({
            "image": self.image().iter().map(ToJson::to_json).collect::<Vec<_>>(),
            "coloring": self.coloring().to_json(),
            "table": table,
        })
    }
}

/// Decodes `{"image":[points…], "coloring": descriptor, "table":{"1":0,…}}`.
/// A missing table sends color `i` to the `i`-th image point.
pub fn image_map_from_json(v: &Value) -> Result<FiniteImageMap, JsonError> {
    let image = points_from_json(array(field(v, "image")?, "image")?, None)?;
    let coloring = coloring_from_json(field(v, "coloring")?)?;
    match v.get("table") {
        None => Ok(FiniteImageMap::in_order(image, coloring)?),
        Some(t) => {
            let obj = t.as_object().ok_or_else(|| bad("`table` must be an object"))?;
            let mut table = BTreeMap::new();
            for (k, i) in obj {
                let c: u32 = k.parse().map_err(|_| bad(format!("bad color key `{k}`")))?;
                table.insert(c, uint(i, "image index")? as usize);
            }
            Ok(FiniteImageMap::new(image, coloring, table)?)
        }
    }
}

impl ToJson for WcpViolation {
    fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .domain
            .iter()
            .zip(&self.images)
            .map(|((p, c), img)| json!({ "point": p.to_json(), "color": c.0, "image": img.to_json() }))
            .collect();
        json!({ "circle": self.circle.to_json(), "points": points })
    }
}

pub fn wcp_violation_from_json(v: &Value) -> Result<WcpViolation, JsonError> {
    let circle = hypersphere_from_json(field(v, "circle")?)?;
    let items = array(field(v, "points")?, "points")?;
    let domain = colored_points_from_json(items, Some(circle.dim()))?;
    let imgs: Vec<Value> = items.iter().map(|i| field(i, "image").cloned()).collect::<Result<_, _>>()?;
    let images = points_from_json(&imgs, None)?;
    Ok(WcpViolation { circle, domain, images })
}

impl ToJson for CgpReport {
    fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "circle": self.circle.as_ref().map(|c| Sphere::Sub(c.clone()).to_json()),
            "on": self.on,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_encodings() {
        assert_eq!(Scalar::ratio(-3, 4).to_json(), json!("-3/4"));
        assert_eq!(Scalar::int(5).to_json(), json!("5"));
        assert_eq!(Scalar::theta().to_json(), json!(["0", "1", "0", "0"]));
        assert_eq!(Scalar::float(0.5).to_json(), json!(0.5));
        for s in [Scalar::ratio(7, 3), Scalar::theta_pow(Scalar::ratio(1, 2), 3), Scalar::float(-1.25)] {
            assert_eq!(scalar_from_json(&s.to_json()).unwrap(), s);
        }
        assert!(scalar_from_json(&json!("1/0")).is_err());
        assert!(scalar_from_json(&json!(true)).is_err());
    }

    #[test]
    fn config_round_trip() {
        let v = json!({"n": 2, "k": 2, "points": [{"coords": ["1/2", "0"], "color": 1}, {"infinity": true, "color": 2}]});
        let config = config_from_json(&v).unwrap();
        assert_eq!(config.points()[1].0, Point::infinity(2));
        assert_eq!(config.to_json(), v);
    }

    #[test]
    fn moebius_round_trip() {
        let f = MoebiusMap::new(
            2,
            vec![
                PrimitiveMap::inversion(vec![Scalar::int(1), Scalar::zero()], Scalar::int(2)).unwrap(),
                PrimitiveMap::reflection(vec![Scalar::zero(), Scalar::one()], Scalar::ratio(1, 2)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(moebius_from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn colorings_round_trip() {
        for c in [
            ProceduralColoring::FlagInversive { n: 3 },
            ProceduralColoring::TwoLine { extended: true },
            ProceduralColoring::TwoLine { extended: false },
            ProceduralColoring::FlagEuclidean { n: 2 },
            ProceduralColoring::GenericPoints { n: 2, k: 3, points: vec![Point::ints(&[0, 0]), Point::infinity(2)] },
        ] {
            assert_eq!(coloring_from_json(&c.to_json()).unwrap(), c);
        }
        assert!(coloring_from_json(&json!({"kind": "nope"})).is_err());
    }

    #[test]
    fn sub_sphere_round_trip() {
        let s = crate::geom::smallest_sphere(&[Point::ints(&[1, 0, 0]), Point::ints(&[0, 1, 0]), Point::ints(&[0, 0, 0])]).unwrap();
        let sphere = Sphere::Sub(s);
        assert_eq!(sphere_from_json(&sphere.to_json()).unwrap(), sphere);
    }
}
