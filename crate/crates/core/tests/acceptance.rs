//! Acceptance suite: twelve criteria, each with a time limit. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use inversive::chromatic::{
    coset_closure_check, find_polychromatic, flag_sharpness, max_polychromatic, separating_circle_5pts,
    separating_sphere_bruteforce, two_line_sample, two_line_sharpness, CosetModel, Exec, PolychromaticWitness,
};
use inversive::colorings::{
    generic_position_points, sample_class, stereographic, ColorIndex, ColoredConfig, GenericMode, ProceduralColoring,
};
use inversive::euclid::{
    flag_euclidean_sharpness, great_intersection, max_colors_great, scan_great, GreatFlat,
};
use inversive::exactnum::Scalar;
use inversive::geom::{
    concyclic, cross_ratio, power_condition, sphere_through, CrossRatio, Hypersphere, Point, Sphere,
};
use inversive::json::{image_map_from_json, ToJson};
use inversive::moebius::{MoebiusMap, PrimitiveMap};
use inversive::wcp::{
    build_sharp_map, circular_general_position, five_point_refute, sample_circles, wcp_check, WcpVerdict,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rat(r: &mut ChaCha8Rng, num: i64, den: i64) -> Scalar {
    Scalar::ratio(r.gen_range(-num..=num), r.gen_range(1..=den))
}

fn nonzero(r: &mut ChaCha8Rng, num: i64, den: i64) -> Scalar {
    loop {
        let q = rat(r, num, den);
        if !q.is_zero() {
            return q;
        }
    }
}

fn xy(x: Scalar, y: Scalar) -> Point {
    Point::xy(x, y)
}

fn distinct(points: &[Point]) -> bool {
    points.iter().all_unique()
}

/// Point of the circle with center `c` and radius `r` at rational parameter `t`.
fn on_circle(c: &[Scalar], r: &Scalar, t: &Scalar) -> Vec<Scalar> {
    let u = stereographic(std::slice::from_ref(t));
    c.iter().zip(&u).map(|(c, u)| c + &(r * u)).collect()
}

/// Concyclicity in the plane by the cross ratio alone.
fn real_cross_ratio(q: &[&Point]) -> Result<bool, String> {
    Ok(match cross_ratio(q[0], q[1], q[2], q[3]).map_err(err)? {
        CrossRatio::Finite(z) => z.is_real(),
        CrossRatio::Infinity => true,
    })
}

fn random_quadruple(r: &mut ChaCha8Rng) -> Vec<Point> {
    loop {
        let kind = r.gen_range(0..5);
        let mut pts: Vec<Point> = match kind {
            0 => (0..4).map(|_| xy(rat(r, 12, 5), rat(r, 12, 5))).collect(),
            1 | 4 => {
                let c = [rat(r, 8, 3), rat(r, 8, 3)];
                let radius = nonzero(r, 6, 3);
                (0..4).map(|_| Point::Finite(on_circle(&c, &radius, &rat(r, 10, 4)))).collect()
            }
            _ => {
                let (p, d) = ([rat(r, 8, 3), rat(r, 8, 3)], [rat(r, 4, 2), rat(r, 4, 2)]);
                (0..4)
                    .map(|_| {
                        let t = rat(r, 10, 4);
                        xy(&p[0] + &(&t * &d[0]), &p[1] + &(&t * &d[1]))
                    })
                    .collect()
            }
        };
        if kind == 4 {
            // Near miss: nudge one point off the circle.
            let x = pts[0].coords().unwrap().to_vec();
            pts[0] = xy(&x[0] + &Scalar::ratio(1, 997), x[1].clone());
        }
        if r.gen_bool(0.25) {
            let i = r.gen_range(0..4);
            pts[i] = Point::infinity(2);
        }
        if distinct(&pts) {
            return pts;
        }
    }
}

fn c1_predicates() -> Outcome {
    let mut r = rng(101);
    let (mut yes, mut no, mut inf) = (0, 0, 0);
    for i in 0..10_000 {
        let q = random_quadruple(&mut r);
        let refs: Vec<&Point> = q.iter().collect();
        let lifted = concyclic(&q[0], &q[1], &q[2], &q[3]).map_err(err)?;
        let real = real_cross_ratio(&refs)?;
        ensure!(lifted == real, "quadruple {i} disagrees: lifted {lifted}, cross ratio real {real}: {q:?}");
        if lifted {
            yes += 1;
        } else {
            no += 1;
        }
        inf += usize::from(q.iter().any(Point::is_infinity));
    }
    ensure!(yes > 1000 && no > 1000, "unbalanced sample: {yes} concyclic, {no} not");
    Ok(format!("10000 quadruples agree ({yes} concyclic, {no} not, {inf} with infinity)"))
}

fn c2_power_condition() -> Outcome {
    let mut r = rng(202);
    let (mut yes, mut no, mut i) = (0, 0, 0);
    while i < 1000 {
        let (x, x2, y) = (nonzero(&mut r, 20, 6), nonzero(&mut r, 20, 6), nonzero(&mut r, 20, 6));
        let y2 = if r.gen_bool(0.5) { &(&x * &x2) / &y } else { nonzero(&mut r, 20, 6) };
        if x == x2 || y == y2 {
            continue;
        }
        i += 1;
        let zero = Scalar::zero();
        let pts = [xy(x.clone(), zero.clone()), xy(x2.clone(), zero.clone()), xy(zero.clone(), y.clone()), xy(zero, y2.clone())];
        let power = power_condition(&x, &x2, &y, &y2);
        let lifted = concyclic(&pts[0], &pts[1], &pts[2], &pts[3]).map_err(err)?;
        ensure!(power == lifted, "x={x} x'={x2} y={y} y'={y2}: power {power}, concyclic {lifted}");
        if power {
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure!(yes > 100 && no > 100, "unbalanced sample: {yes} satisfy, {no} do not");
    Ok(format!("1000 tuples agree ({yes} satisfy xx' = yy')"))
}

fn random_vec(r: &mut ChaCha8Rng, dim: usize, num: i64, den: i64) -> Vec<Scalar> {
    (0..dim).map(|_| rat(r, num, den)).collect()
}

fn random_primitive(r: &mut ChaCha8Rng, dim: usize) -> PrimitiveMap {
    if r.gen_bool(0.5) {
        let r2 = Scalar::ratio(r.gen_range(1..=9), r.gen_range(1..=4));
        PrimitiveMap::inversion(random_vec(r, dim, 5, 3), r2).unwrap()
    } else {
        loop {
            let normal = random_vec(r, dim, 4, 1);
            if let Ok(f) = PrimitiveMap::reflection(normal, rat(r, 5, 3)) {
                return f;
            }
        }
    }
}

/// A random generalized sphere of ℝ^dim with a few points on it.
fn random_sphere(r: &mut ChaCha8Rng, dim: usize) -> (Hypersphere, Vec<Point>) {
    if r.gen_bool(0.3) {
        let mut normal = random_vec(r, dim, 4, 2);
        normal[dim - 1] = nonzero(r, 4, 2);
        let offset = rat(r, 5, 2);
        let plane = Hypersphere::hyperplane(normal.clone(), offset.clone()).unwrap();
        let mut pts = vec![Point::infinity(dim)];
        for _ in 0..4 {
            let mut x = random_vec(r, dim, 6, 3);
            let partial: Scalar = x[..dim - 1].iter().zip(&normal).map(|(x, n)| x * n).fold(Scalar::zero(), |a, b| &a + &b);
            x[dim - 1] = &(&offset - &partial) / &normal[dim - 1];
            pts.push(Point::Finite(x));
        }
        (plane, pts)
    } else {
        let center = random_vec(r, dim, 6, 3);
        let radius = nonzero(r, 5, 2);
        let sphere = Hypersphere::from_center(&center, &radius * &radius).unwrap();
        let pts = (0..4)
            .map(|_| {
                let u = stereographic(&random_vec(r, dim - 1, 8, 3));
                Point::Finite(center.iter().zip(&u).map(|(c, u)| c + &(&radius * u)).collect())
            })
            .collect();
        (sphere, pts)
    }
}

/// Four distinct points on a circle of ℝ^dim (a planar circle or line at a
/// fixed height when `dim = 3`).
fn random_concyclic(r: &mut ChaCha8Rng, dim: usize) -> Vec<Point> {
    loop {
        let (_, mut pts) = random_sphere(r, 2);
        if pts.len() > 4 && r.gen_bool(0.5) {
            pts.remove(0);
        }
        pts.truncate(4);
        let height = rat(r, 4, 2);
        let pts: Vec<Point> = pts
            .into_iter()
            .map(|p| match p {
                Point::Finite(mut x) => {
                    if dim == 3 {
                        x.push(height.clone());
                    }
                    Point::Finite(x)
                }
                Point::Infinity { .. } => Point::infinity(dim),
            })
            .collect();
        if distinct(&pts) {
            return pts;
        }
    }
}

fn c3_moebius() -> Outcome {
    let mut r = rng(303);
    let (mut quads, mut incidences, mut squares) = (0, 0, 0);
    for m in 0..1000 {
        let dim = if m % 4 == 3 { 3 } else { 2 };
        let count = r.gen_range(1..=6);
        let factors: Vec<PrimitiveMap> = (0..count).map(|_| random_primitive(&mut r, dim)).collect();
        let f = MoebiusMap::new(dim, factors.clone()).map_err(err)?;

        let q = random_concyclic(&mut r, dim);
        ensure!(concyclic(&q[0], &q[1], &q[2], &q[3]).map_err(err)?, "map {m}: sample quadruple is not concyclic");
        let img: Vec<Point> = q.iter().map(|p| f.apply(p)).collect::<Result<_, _>>().map_err(err)?;
        ensure!(concyclic(&img[0], &img[1], &img[2], &img[3]).map_err(err)?, "map {m}: image quadruple is not concyclic");
        quads += 1;

        let (s, on) = random_sphere(&mut r, dim);
        let fs = f.image_sphere(&s).map_err(err)?;
        let off: Vec<Point> = (0..3).map(|_| Point::Finite(random_vec(&mut r, dim, 9, 4))).collect();
        for p in on.iter().chain(&off) {
            let before = s.contains(p).map_err(err)?;
            let after = fs.contains(&f.apply(p).map_err(err)?).map_err(err)?;
            ensure!(before == after, "map {m}: incidence of {p} changes ({before} -> {after})");
            incidences += 1;
        }

        let g = &factors[0];
        let mut probes: Vec<Point> = vec![Point::infinity(dim)];
        if let PrimitiveMap::Inversion { center, .. } = g {
            probes.push(Point::Finite(center.clone()));
        }
        while probes.len() < 50 {
            probes.push(Point::Finite(random_vec(&mut r, dim, 9, 4)));
        }
        for p in &probes {
            ensure!(g.apply(&g.apply(p)) == *p, "map {m}: primitive squared moves {p}");
            squares += 1;
        }
    }
    Ok(format!("{quads} concyclic quadruples, {incidences} incidences, {squares} involution checks"))
}

fn c4_flag_sharpness() -> Outcome {
    let mut parts = Vec::new();
    for n in [2, 3] {
        let rep = flag_sharpness(n, 30, 404, false, Exec::Parallel).map_err(err)?;
        ensure!(rep.violation_count == 0, "n={n}: {} spheres reach {} colors", rep.violation_count, n + 2);
        ensure!(rep.max_colors == n + 1, "n={n}: max colors {} (expected {})", rep.max_colors, n + 1);
        parts.push(format!("n={n}: {} spheres, max {} colors", rep.spheres_checked, rep.max_colors));
    }
    Ok(parts.join("; "))
}

fn c5_two_line() -> Outcome {
    let pts = two_line_sample(40, 505).map_err(err)?;
    let coloring = ProceduralColoring::TwoLine { extended: false };
    let mut per_class = BTreeMap::new();
    for p in &pts {
        *per_class.entry(coloring.color_of(p).map_err(err)?.0).or_insert(0usize) += 1;
    }
    ensure!(per_class.len() == 5 && per_class.values().all(|&c| c >= 40), "class sizes {per_class:?}");
    ensure!(pts.iter().any(|p| p.coords().unwrap().iter().any(|x| x.to_quartic().is_some_and(|q| q.as_rational().is_none()))),
        "no irrational sample point");
    let rep = two_line_sharpness(&pts, Exec::Parallel).map_err(err)?;
    ensure!(rep.violation_count == 0, "{} circles carry 4 colors", rep.violation_count);

    // Independent spot check: exact circle through three samples, colors of
    // every sample point on it.
    let mut r = rng(55);
    for _ in 0..300 {
        let idx = rand::seq::index::sample(&mut r, pts.len(), 3).into_vec();
        let three: Vec<Point> = idx.iter().map(|&i| pts[i].clone()).collect();
        let Ok(circle) = sphere_through(&three) else { continue };
        let mut colors = BTreeSet::new();
        for p in &pts {
            if circle.contains(p).map_err(err)? {
                colors.insert(coloring.color_of(p).map_err(err)?);
            }
        }
        ensure!(colors.len() <= 3, "circle {} carries {} sample colors", circle.to_json(), colors.len());
    }
    Ok(format!("{} points, {} circles, max {} colors", pts.len(), rep.spheres_checked, rep.max_colors))
}

fn c6_cosets() -> Outcome {
    let model = CosetModel::two_line(50, 606);
    ensure!(model.x5.first().is_some_and(Scalar::is_one), "X5 samples must start with 1");
    let rep = coset_closure_check(&model).map_err(err)?;
    ensure!(rep.passed(), "{} violations, first {:?}", rep.violation_count, rep.violations.first());

    // Corruptions only need to be noticed, so a smaller model suffices.
    let small = CosetModel::two_line(12, 606);
    let mut bad = small.clone();
    bad.x4 = bad.y2.clone();
    let bad_rep = coset_closure_check(&bad).map_err(err)?;
    ensure!(bad_rep.violation_count >= 1, "corrupted classes went unnoticed");

    let mut bad_rep_model = small;
    bad_rep_model.reps[0].1 = &bad_rep_model.reps[0].1 + &Scalar::one();
    let bad_reps = coset_closure_check(&bad_rep_model).map_err(err)?;
    ensure!(bad_reps.violation_count >= 1, "corrupted representative went unnoticed");
    Ok(format!(
        "{} checks clean; corrupted classes {} violations, corrupted representative {}",
        rep.checks, bad_rep.violation_count, bad_reps.violation_count
    ))
}

fn theta(p: usize, num: i64, den: i64) -> Scalar {
    Scalar::theta_pow(Scalar::ratio(num, den), p)
}

fn c7_extended_witness() -> Outcome {
    let coloring = ProceduralColoring::TwoLine { extended: true };
    let w = find_polychromatic(&coloring, 4, 1000, 707).map_err(err)?.ok_or("no witness found")?;
    ensure!(w.validate().map_err(err)?, "witness does not revalidate");
    let mut four: Vec<(Point, ColorIndex)> = Vec::new();
    for (p, c) in &w.on_points {
        if !four.iter().any(|(_, d)| d == c) {
            four.push((p.clone(), *c));
        }
    }
    ensure!(four.len() >= 4, "only {} colors", four.len());
    let colors: BTreeSet<u32> = four.iter().map(|(p, _)| coloring.color_of(p).map(|c| c.0)).collect::<Result<_, _>>().map_err(err)?;
    ensure!(colors == BTreeSet::from([1, 2, 3, 4]), "colors {colors:?}");
    let sphere = match &w.sphere {
        Sphere::Hyper(h) => h.clone(),
        Sphere::Sub(_) => return Err("witness is not a circle".into()),
    };
    let (a, b, c, d) = (&four[0].0, &four[1].0, &four[2].0, &four[3].0);
    ensure!(concyclic(a, b, c, d).map_err(err)? && four.iter().all(|(p, _)| sphere.contains(p).unwrap_or(false)),
        "the four points are not on the witness circle");

    let z = Scalar::zero();
    let doc = [
        xy(z.clone(), theta(1, 1, 1)),
        xy(z.clone(), theta(3, 1, 2)),
        xy(theta(2, 1, 1), z),
        xy(theta(2, 3, 2), theta(3, 1, 2)),
    ];
    ensure!(concyclic(&doc[0], &doc[1], &doc[2], &doc[3]).map_err(err)?, "documented witness is not concyclic");
    let circle = sphere_through(&doc[..3]).map_err(err)?;
    ensure!(circle.contains(&doc[3]).map_err(err)?, "documented fourth point is off the circle");
    let doc_colors: BTreeSet<u32> = doc.iter().map(|p| coloring.color_of(p).map(|c| c.0)).collect::<Result<_, _>>().map_err(err)?;
    ensure!(doc_colors == BTreeSet::from([1, 2, 3, 4]), "documented colors {doc_colors:?}");
    Ok(format!("witness on {} with colors {colors:?}; documented instance on {}", sphere.to_json(), circle.to_json()))
}

fn colored(points: Vec<Point>) -> Vec<(Point, ColorIndex)> {
    points.into_iter().enumerate().map(|(i, p)| (p, ColorIndex(i as u32 + 1))).collect()
}

fn c8_separation() -> Outcome {
    let mut lines = 0;
    for seed in 0..1000u64 {
        let pts = colored(generic_position_points(2, 5, 8000 + seed, GenericMode::Inversive).map_err(err)?);
        let w = separating_circle_5pts(&pts).map_err(|e| format!("seed {seed}: {e:?}"))?;
        ensure!(w.validate().map_err(err)?, "seed {seed}: constructive witness does not revalidate");
        lines += usize::from(w.sphere.is_hyperplane());
        let b = separating_sphere_bruteforce(&pts).map_err(err)?.ok_or(format!("seed {seed}: brute force found nothing"))?;
        ensure!(b.validate().map_err(err)?, "seed {seed}: brute-force witness does not revalidate");
    }
    for seed in 0..100u64 {
        let pts = colored(generic_position_points(3, 6, 9000 + seed, GenericMode::Inversive).map_err(err)?);
        let b = separating_sphere_bruteforce(&pts).map_err(err)?.ok_or(format!("n=3 seed {seed}: no witness"))?;
        ensure!(b.validate().map_err(err)?, "n=3 seed {seed}: witness does not revalidate");
    }
    Ok(format!("1000 planar configs ({lines} separated by lines), brute force agrees; 100 configs in R^3"))
}

fn random_flat(r: &mut ChaCha8Rng, m: usize, dim: usize) -> GreatFlat {
    loop {
        let vs: Vec<Vec<Scalar>> = (0..dim).map(|_| (0..m).map(|_| rat(r, 5, 3)).collect()).collect();
        if let Ok(f) = GreatFlat::span(m, &vs) {
            if f.dim() == dim {
                return f;
            }
        }
    }
}

fn c9_euclid() -> Outcome {
    let mut r = rng(909);
    let mut exact = 0;
    for i in 0..10_000 {
        let m = r.gen_range(3..=5);
        let s = random_flat(&mut r, m, m - 1);
        let c = random_flat(&mut r, m, 2);
        let x = great_intersection(&s, &c).map_err(err)?;
        ensure!(x.validate(&s, &c), "pair {i}: intersection does not validate");
        exact += usize::from(x.exact);
    }
    let rep = flag_euclidean_sharpness(2, 40, 919, Exec::Parallel).map_err(err)?;
    ensure!(rep.spheres_checked >= 1000, "only {} great circles", rep.spheres_checked);
    ensure!(rep.violation_count == 0 && rep.max_colors <= 2, "max {} colors, {} violations", rep.max_colors, rep.violation_count);
    Ok(format!(
        "10000 pairs intersect ({exact} with exact unit points); {} great circles, max {} colors",
        rep.spheres_checked, rep.max_colors
    ))
}

/// `M` fails circular general position iff some circle holds all but one
/// point, i.e. every 4-subset of some `(|M|-1)`-subset is concyclic.
fn cgp_oracle(m: &[Point]) -> Result<bool, String> {
    if m.len() <= 4 {
        return Ok(false);
    }
    for sub in m.iter().combinations(m.len() - 1) {
        let mut all = true;
        for q in sub.iter().copied().combinations(4) {
            if !real_cross_ratio(&q)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(false);
        }
    }
    Ok(true)
}

fn c10_cgp() -> Outcome {
    let mut r = rng(1010);
    let (mut sets, mut general) = (0, 0);
    while sets < 3000 {
        let size = r.gen_range(1..=8);
        let m: Vec<Point> = (0..size)
            .map(|_| if r.gen_ratio(1, 12) { Point::infinity(2) } else { Point::ints(&[r.gen_range(-3..=3), r.gen_range(-3..=3)]) })
            .collect();
        if !distinct(&m) {
            continue;
        }
        sets += 1;
        let got = circular_general_position(&m).map_err(err)?;
        let want = cgp_oracle(&m)?;
        ensure!(got.verdict == want, "{m:?}: got {}, brute force {want}", got.verdict);
        general += usize::from(want);
        if m.len() == 4 {
            ensure!(!got.verdict, "a 4-point set passed");
        }
    }
    ensure!(general > 50, "too few sets in general position ({general})");

    let i = Point::ints(&[0, 1]);
    let five = vec![Point::ints(&[0, 0]), Point::ints(&[1, 0]), Point::infinity(2), i, Point::ints(&[1, 2])];
    ensure!(circular_general_position(&five).map_err(err)?.verdict, "{{0,1,inf,i,1+2i}} rejected");
    for four in five.iter().cloned().combinations(4) {
        ensure!(!circular_general_position(&four).map_err(err)?.verdict, "{four:?} accepted");
    }

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/five_point_map.json");
    let text = std::fs::read_to_string(&path).map_err(err)?;
    let map = image_map_from_json(&serde_json::from_str::<Value>(&text).map_err(err)?).map_err(err)?;
    ensure!(map.coloring() == &ProceduralColoring::TwoLine { extended: true }, "unexpected coloring");
    let v = five_point_refute(&map, 1000, 1011).map_err(err)?;
    ensure!(v.validate(&map).map_err(err)?, "violation does not revalidate");
    Ok(format!("{sets} sets match brute force ({general} in general position); refutation on {}", v.circle.to_json()))
}

fn c11_sharp_map() -> Outcome {
    let m = vec![Point::ints(&[0, 0]), Point::ints(&[1, 0]), Point::infinity(2), Point::ints(&[0, 1])];
    let map = build_sharp_map(&m).map_err(err)?;
    let samples = sample_circles(1000, 1111).map_err(err)?;
    match wcp_check(&map, &samples, Exec::Parallel).map_err(err)? {
        WcpVerdict::PassOnSample { circles_checked } => {
            ensure!(circles_checked == 1000, "checked {circles_checked}");
            Ok("1000 sampled circles map into circles".into())
        }
        WcpVerdict::Violation { sample_index, violation } => {
            Err(format!("sample {sample_index} violated on {}", violation.circle.to_json()))
        }
    }
}

fn json_opt(w: &Option<PolychromaticWitness>) -> Value {
    w.as_ref().map_or(Value::Null, ToJson::to_json)
}

/// Serializes `f(exec)` for a serial run, a rerun and a parallel run.
fn three_runs<F: Fn(Exec) -> Result<String, String>>(name: &str, f: F) -> Result<(), String> {
    let a = f(Exec::Serial)?;
    let b = f(Exec::Serial)?;
    let c = f(Exec::Parallel)?;
    ensure!(a == b, "{name}: rerun differs");
    ensure!(a == c, "{name}: parallel differs from serial");
    Ok(())
}

fn c12_determinism() -> Outcome {
    let s = |v: Value| serde_json::to_string(&v).map_err(err);
    three_runs("flag_sharpness", |e| s(flag_sharpness(2, 12, 1, false, e).map_err(err)?.to_json()))?;
    three_runs("flag_sharpness pruned", |e| s(flag_sharpness(3, 8, 2, true, e).map_err(err)?.to_json()))?;
    three_runs("two_line_sharpness", |e| s(two_line_sharpness(&two_line_sample(8, 3).map_err(err)?, e).map_err(err)?.to_json()))?;
    three_runs("generic_sharpness", |e| s(inversive::chromatic::generic_sharpness(2, 12, 4, e).map_err(err)?.to_json()))?;

    let flag = ProceduralColoring::FlagInversive { n: 2 };
    let mut pts = vec![Point::origin(2), Point::infinity(2)];
    for i in 3..=4 {
        pts.extend(sample_class(&flag, ColorIndex(i), 8, 5).map_err(err)?);
    }
    let config = ColoredConfig::from_coloring(&flag, &pts).map_err(err)?;
    three_runs("max_polychromatic", |e| s(max_polychromatic(&config, 1, e).map_err(err)?.to_json()))?;

    let euclid = ProceduralColoring::FlagEuclidean { n: 2 };
    let mut sphere_pts = Vec::new();
    for (i, count) in [(1, 2), (2, 6), (3, 6)] {
        sphere_pts.extend(sample_class(&euclid, ColorIndex(i), count, 6).map_err(err)?);
    }
    let econfig = ColoredConfig::from_coloring(&euclid, &sphere_pts).map_err(err)?;
    three_runs("max_colors_great", |e| s(max_colors_great(&econfig, e).map_err(err)?.to_json()))?;
    three_runs("scan_great", |e| s(scan_great(&econfig, 3, e).map_err(err)?.to_json()))?;
    three_runs("flag_euclidean_sharpness", |e| s(flag_euclidean_sharpness(2, 10, 7, e).map_err(err)?.to_json()))?;

    let sharp = build_sharp_map(&[Point::ints(&[0, 0]), Point::ints(&[1, 0]), Point::infinity(2), Point::ints(&[0, 1])])
        .map_err(err)?;
    let circles = sample_circles(60, 8).map_err(err)?;
    three_runs("wcp_check", |e| Ok(format!("{:?}", wcp_check(&sharp, &circles, e).map_err(err)?)))?;

    // Searches without an Exec switch: reruns only.
    three_runs("find_polychromatic", |_| {
        let w = find_polychromatic(&ProceduralColoring::TwoLine { extended: true }, 4, 500, 9).map_err(err)?;
        s(json_opt(&w))
    })?;
    three_runs("find_polychromatic flag", |_| s(json_opt(&find_polychromatic(&flag, 4, 300, 10).map_err(err)?)))?;
    three_runs("coset report", |_| s(coset_closure_check(&CosetModel::two_line(12, 11)).map_err(err)?.to_json()))?;
    three_runs("separation", |_| {
        let pts = colored(generic_position_points(2, 5, 12, GenericMode::Inversive).map_err(err)?);
        s(separating_circle_5pts(&pts).map_err(err)?.to_json())
    })?;
    three_runs("cgp", |_| {
        let m = vec![Point::ints(&[0, 0]), Point::ints(&[1, 0]), Point::infinity(2), Point::ints(&[0, 1]), Point::ints(&[1, 2])];
        s(circular_general_position(&m).map_err(err)?.to_json())
    })?;
    three_runs("great_intersection", |_| {
        let mut r = rng(13);
        let (a, b) = (random_flat(&mut r, 4, 3), random_flat(&mut r, 4, 2));
        s(great_intersection(&a, &b).map_err(err)?.to_json())
    })?;
    Ok("15 report kinds byte-identical across reruns and executors".into())
}

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "predicate equivalence", limit: secs(10), run: c1_predicates },
        Criterion { id: 2, name: "power condition", limit: secs(5), run: c2_power_condition },
        Criterion { id: 3, name: "moebius invariance", limit: secs(30), run: c3_moebius },
        Criterion { id: 4, name: "flag sharpness", limit: secs(60), run: c4_flag_sharpness },
        Criterion { id: 5, name: "two-line sharpness", limit: secs(120), run: c5_two_line },
        Criterion { id: 6, name: "coset structure", limit: secs(10), run: c6_cosets },
        Criterion { id: 7, name: "extended two-line witness", limit: secs(10), run: c7_extended_witness },
        Criterion { id: 8, name: "separating circle", limit: secs(120), run: c8_separation },
        Criterion { id: 9, name: "euclidean analogue", limit: secs(60), run: c9_euclid },
        Criterion { id: 10, name: "circular general position", limit: secs(30), run: c10_cgp },
        Criterion { id: 11, name: "sharp four-point map", limit: secs(60), run: c11_sharp_map },
        Criterion { id: 12, name: "determinism", limit: None, run: c12_determinism },
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.contains(&c.id) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(msg), Some(limit)) if took > limit => Err(format!("{msg}; over the {}s limit", limit.as_secs())),
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {}: {msg} ({:.2}s)", c.id, c.name, took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {}: {msg} ({:.2}s)", c.id, c.name, took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
