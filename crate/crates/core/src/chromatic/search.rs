use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rayon::prelude::*;

use crate::colorings::{generic_position_points, sample_class, ColorIndex, GenericMode, ColoredConfig, ColoringError, ProceduralColoring};
use crate::exactnum::Scalar;
use crate::geom::linalg::dot;
use crate::geom::{lift, signed_norm, smallest_sphere, sphere_through, Hypersphere, OriginLine, Point, Sphere};

use super::{kernel, ChromaticError, PolychromaticWitness};

/// Serial or rayon-parallel evaluation. Results are identical either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[default]
    Serial,
    Parallel,
}

/// Outcome of checking that no enumerated sphere reaches `threshold` colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessReport {
    pub spheres_checked: usize,
    pub max_colors: usize,
    pub threshold: usize,
    pub violation_count: usize,
    /// The first violations in enumeration order (at most [`MAX_REPORTED`]).
    pub violations: Vec<PolychromaticWitness>,
}

pub const MAX_REPORTED: usize = 100;

fn sphere_for(points: &[Point], d: usize, n: usize) -> Option<Sphere> {
    if d + 1 == n {
        sphere_through(points).ok().map(Sphere::Hyper)
    } else {
        smallest_sphere(points).ok().filter(|s| s.dim() == d).map(Sphere::Sub)
    }
}

fn check_dims(config: &ColoredConfig, d: usize) -> Result<(), ChromaticError> {
    let n = config.n();
    if d + 1 > n {
        return Err(ChromaticError::BadDimension { d, n });
    }
    if config.len() < d + 2 {
        return Err(ChromaticError::TooFewPoints);
    }
    Ok(())
}

fn subset_points(config: &ColoredConfig, idx: &[usize]) -> Vec<Point> {
    idx.iter().map(|&i| config.points()[i].0.clone()).collect()
}

/// Every distinct `d`-sphere through `d + 2` config points (`n` points for
/// hyperspheres), in lexicographic order of the first subset producing it.
/// Degenerate subsets are skipped.
pub fn enumerate_spheres(
    config: &ColoredConfig,
    d: usize,
) -> Result<impl Iterator<Item = (Vec<usize>, Sphere)> + '_, ChromaticError> {
    check_dims(config, d)?;
    let n = config.n();
    let mut seen = HashSet::new();
    Ok((0..config.len()).combinations(d + 2).filter_map(move |idx| {
        let sphere = sphere_for(&subset_points(config, &idx), d, n)?;
        seen.insert(sphere.clone()).then_some((idx, sphere))
    }))
}

/// Lifted coordinates of config points, so hypersphere incidence is one dot
/// product against `(a, b, c)`.
struct Incidence<'a> {
    config: &'a ColoredConfig,
    lifts: Vec<Vec<Scalar>>,
}

impl<'a> Incidence<'a> {
    fn new(config: &'a ColoredConfig) -> Self {
        let lifts = config.points().iter().map(|(p, _)| lift(p)).collect();
        Incidence { config, lifts }
    }

    fn on(&self, sphere: &Sphere) -> Vec<usize> {
        match sphere {
            Sphere::Hyper(s) => {
                let coef = coefficients(s);
                (0..self.lifts.len()).filter(|&i| dot(&self.lifts[i], &coef).is_zero()).collect()
            }
            Sphere::Sub(_) => (0..self.config.len())
                .filter(|&i| sphere.contains(&self.config.points()[i].0).unwrap_or(false))
                .collect(),
        }
    }

    fn witness(&self, sphere: Sphere, defining: Vec<usize>, on: &[usize]) -> PolychromaticWitness {
        let on_points: Vec<(Point, ColorIndex)> = on.iter().map(|&i| self.config.points()[i].clone()).collect();
        let colors = on_points.iter().map(|(_, c)| *c).collect();
        PolychromaticWitness { sphere, defining, on_points, colors }
    }

    fn color_count(&self, on: &[usize]) -> usize {
        on.iter().map(|&i| self.config.points()[i].1).collect::<BTreeSet<_>>().len()
    }
}

fn coefficients(s: &Hypersphere) -> Vec<Scalar> {
    let mut v = vec![s.a().clone()];
    v.extend(s.b().iter().cloned());
    v.push(s.c().clone());
    v
}

pub(crate) fn map_ordered<T: Sync, U: Send>(items: &[T], exec: Exec, f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    match exec {
        Exec::Serial => items.iter().map(f).collect(),
        Exec::Parallel => items.par_iter().map(f).collect(),
    }
}

/// Distinct spheres through the given subsets, first occurrence kept.
fn distinct_spheres(
    config: &ColoredConfig,
    subsets: Vec<Vec<usize>>,
    d: usize,
    exec: Exec,
) -> Vec<(Vec<usize>, Sphere)> {
    let n = config.n();
    let spheres = map_ordered(&subsets, exec, |idx| sphere_for(&subset_points(config, idx), d, n));
    let mut seen = HashSet::new();
    subsets
        .into_iter()
        .zip(spheres)
        .filter_map(|(idx, s)| {
            let s = s?;
            seen.insert(s.clone()).then_some((idx, s))
        })
        .collect()
}

/// The enumerated `d`-sphere carrying the most colors among all config
/// points; ties go to the lexicographically smallest defining subset.
pub fn max_polychromatic(config: &ColoredConfig, d: usize, exec: Exec) -> Result<PolychromaticWitness, ChromaticError> {
    check_dims(config, d)?;
    let subsets: Vec<Vec<usize>> = (0..config.len()).combinations(d + 2).collect();
    let spheres = distinct_spheres(config, subsets, d, exec);
    let inc = Incidence::new(config);
    let counts = map_ordered(&spheres, exec, |(_, s)| inc.color_count(&inc.on(s)));
    let best = counts
        .iter()
        .enumerate()
        .fold(None, |best: Option<usize>, (i, c)| match best {
            Some(b) if counts[b] >= *c => Some(b),
            _ => Some(i),
        })
        .ok_or(ChromaticError::TooFewPoints)?;
    let (idx, sphere) = spheres[best].clone();
    let on = inc.on(&sphere);
    Ok(inc.witness(sphere, idx, &on))
}

/// Checks every hypersphere through `n + 1` config points that include all of
/// `required`, flagging those with at least `threshold` colors.
///
/// Rational configurations run on exact machine-integer incidence; anything
/// else, or any intermediate overflow, uses exact rational arithmetic. Both
/// paths give identical reports.
pub fn scan_spheres(
    config: &ColoredConfig,
    required: &[usize],
    threshold: usize,
    exec: Exec,
) -> Result<SharpnessReport, ChromaticError> {
    check_dims(config, config.n() - 1)?;
    if let Some(lifts) = kernel::int_lifts(config.points()) {
        if let Some(report) = scan_integer(config, &lifts, required, threshold, exec)? {
            return Ok(report);
        }
    }
    scan_exact(config, required, threshold, exec)
}

fn scan_exact(
    config: &ColoredConfig,
    required: &[usize],
    threshold: usize,
    exec: Exec,
) -> Result<SharpnessReport, ChromaticError> {
    let n = config.n();
    let others: Vec<usize> = (0..config.len()).filter(|i| !required.contains(i)).collect();
    let free = (n + 1).checked_sub(required.len()).ok_or(ChromaticError::TooFewPoints)?;
    let subsets: Vec<Vec<usize>> = others
        .into_iter()
        .combinations(free)
        .map(|mut c| {
            c.extend_from_slice(required);
            c.sort_unstable();
            c
        })
        .collect();
    let spheres = distinct_spheres(config, subsets, n - 1, exec);
    let inc = Incidence::new(config);
    let hits = map_ordered(&spheres, exec, |(_, s)| inc.on(s));
    let mut report = SharpnessReport {
        spheres_checked: spheres.len(),
        max_colors: 0,
        threshold,
        violation_count: 0,
        violations: Vec::new(),
    };
    for ((idx, sphere), on) in spheres.into_iter().zip(hits) {
        let count = inc.color_count(&on);
        report.max_colors = report.max_colors.max(count);
        if count >= threshold {
            report.violation_count += 1;
            if report.violations.len() < MAX_REPORTED {
                report.violations.push(inc.witness(sphere, idx, &on));
            }
        }
    }
    Ok(report)
}

/// Per-first-index tallies: spheres, best color count, violating subsets.
type Tally = (usize, usize, Vec<Vec<usize>>);

/// The integer path of [`scan_spheres`]; `Ok(None)` on overflow.
///
/// A sphere is counted at its lexicographically first generating subset: the
/// subset is kept only if no earlier full-rank subset of the sphere's points
/// (containing `required`) exists. That reproduces first-occurrence dedup
/// without remembering the spheres seen.
fn scan_integer(
    config: &ColoredConfig,
    lifts: &[kernel::Lift],
    required: &[usize],
    threshold: usize,
    exec: Exec,
) -> Result<Option<SharpnessReport>, ChromaticError> {
    let n = config.n();
    let free = (n + 1).checked_sub(required.len()).ok_or(ChromaticError::TooFewPoints)?;
    let others: Vec<usize> = (0..config.len()).filter(|i| !required.contains(i)).collect();
    let colors: Vec<ColorIndex> = config.points().iter().map(|(_, c)| *c).collect();
    let with_required = |c: &[usize]| {
        let mut idx = c.to_vec();
        idx.extend_from_slice(required);
        idx.sort_unstable();
        idx
    };
    let normal_of = |idx: &[usize]| kernel::normal(&idx.iter().map(|&i| &lifts[i]).collect::<Vec<_>>());
    // Greedy selection over a matroid yields its lexicographically smallest
    // basis, so the first generating subset is found in one pass.
    let is_first = |on: &[usize], idx: &[usize]| -> Option<bool> {
        let mut basis = kernel::Echelon::default();
        let mut chosen = Vec::with_capacity(n + 1);
        for &i in required {
            basis.insert(&lifts[i])?;
            chosen.push(i);
        }
        for &i in on.iter().filter(|i| !required.contains(i)) {
            if basis.rank() == n + 1 {
                break;
            }
            if basis.insert(&lifts[i])? {
                chosen.push(i);
            }
        }
        chosen.sort_unstable();
        Some(chosen == idx)
    };
    let visit = |c: Vec<usize>, tally: &mut Tally| -> Option<()> {
        let idx = with_required(&c);
        let nu = normal_of(&idx)?;
        if nu.iter().all(|&x| x == 0) {
            return Some(());
        }
        let mut on = Vec::with_capacity(n + 1);
        for (i, l) in lifts.iter().enumerate() {
            if kernel::incident(&nu, l)? {
                on.push(i);
            }
        }
        if on.len() > n + 1 && !is_first(&on, &idx)? {
            return Some(());
        }
        let mut seen: Vec<ColorIndex> = on.iter().map(|&i| colors[i]).collect();
        seen.sort_unstable();
        seen.dedup();
        tally.0 += 1;
        tally.1 = tally.1.max(seen.len());
        if seen.len() >= threshold {
            tally.2.push(idx);
        }
        Some(())
    };
    let firsts: Vec<usize> = if free == 0 { vec![0] } else { (0..others.len()).collect() };
    let per_first = map_ordered(&firsts, exec, |&a| -> Option<Tally> {
        let mut tally: Tally = (0, 0, Vec::new());
        if free == 0 {
            visit(Vec::new(), &mut tally)?;
        } else {
            for rest in others[a + 1..].iter().copied().combinations(free - 1) {
                let mut c = Vec::with_capacity(free);
                c.push(others[a]);
                c.extend(rest);
                visit(c, &mut tally)?;
            }
        }
        Some(tally)
    });
    let mut report = SharpnessReport { spheres_checked: 0, max_colors: 0, threshold, violation_count: 0, violations: Vec::new() };
    let inc = Incidence::new(config);
    for tally in per_first {
        let Some((checked, max, bad)) = tally else {
            return Ok(None);
        };
        report.spheres_checked += checked;
        report.max_colors = report.max_colors.max(max);
        for idx in bad {
            report.violation_count += 1;
            if report.violations.len() < MAX_REPORTED {
                let sphere = Sphere::Hyper(sphere_through(&subset_points(config, &idx))?);
                let on = inc.on(&sphere);
                report.violations.push(inc.witness(sphere, idx, &on));
            }
        }
    }
    Ok(Some(report))
}

/// Samples the flag coloring (0, ∞ and `per_class` points of every other
/// class) and checks that no hypersphere through `n + 1` sample points has
/// `n + 2` colors.
///
/// With `pruned`, only spheres through both 0 and ∞ are evaluated. That loses
/// nothing: a sphere missing either singleton class has at most `n + 1`
/// colors, and a hyperplane through the origin spanned by sample points is
/// also spanned by 0, ∞ and `n − 1` of them.
pub fn flag_sharpness(
    n: usize,
    per_class: usize,
    seed: u64,
    pruned: bool,
    exec: Exec,
) -> Result<SharpnessReport, ChromaticError> {
    let coloring = ProceduralColoring::FlagInversive { n };
    let mut points = vec![Point::origin(n), Point::infinity(n)];
    for i in 3..=coloring.k() {
        points.extend(sample_class(&coloring, ColorIndex(i), per_class, seed)?);
    }
    let config = ColoredConfig::from_coloring(&coloring, &points)?;
    let required: &[usize] = if pruned { &[0, 1] } else { &[] };
    scan_spheres(&config, required, n + 2, exec)
}

/// Samples the generic-point coloring (`n + 3` points in general position,
/// each with its own color, and `per_class` background points) and checks
/// that no hypersphere through `n + 1` sample points has `n + 3` colors.
pub fn generic_sharpness(n: usize, per_class: usize, seed: u64, exec: Exec) -> Result<SharpnessReport, ChromaticError> {
    let points = generic_position_points(n, n + 3, seed, GenericMode::Inversive)?;
    let coloring = ProceduralColoring::GenericPoints { n, k: n as u32 + 4, points: points.clone() };
    let mut all = points;
    all.extend(sample_class(&coloring, ColorIndex(coloring.k()), per_class, seed)?);
    let config = ColoredConfig::from_coloring(&coloring, &all)?;
    scan_spheres(&config, &[], n + 3, exec)
}

/// `per_class` points of each class of the two-line coloring, all on the
/// axes and nonzero, class by class.
pub fn two_line_sample(per_class: usize, seed: u64) -> Result<Vec<Point>, ChromaticError> {
    let coloring = ProceduralColoring::TwoLine { extended: false };
    let mut points = Vec::with_capacity(5 * per_class);
    for i in 1..=5 {
        points.extend(sample_class(&coloring, ColorIndex(i), per_class, seed)?);
    }
    Ok(points)
}

/// Circles checked, most colors seen, and the violating triples with their
/// fourth point, for one first index.
type FirstTally = (usize, usize, Vec<(usize, usize, usize, Scalar)>);

/// Checks, for every circle through three of `points` (nonzero points on the
/// coordinate axes), that its intersection with the two axes carries at most
/// three colors of the two-line coloring.
///
/// A circle through points with signed norms `x, x'` on one axis and `y` on
/// the other meets the second axis again at `y' = x·x'/y`. Three points on one
/// axis span the extended axis itself, which carries three colors.
pub fn two_line_sharpness(points: &[Point], exec: Exec) -> Result<SharpnessReport, ChromaticError> {
    let coloring = ProceduralColoring::TwoLine { extended: false };
    let (x_axis, y_axis) = (OriginLine::x_axis(), OriginLine::y_axis());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let color = coloring.color_of(p)?;
        let x = p.coords().ok_or(ChromaticError::Degenerate("infinity is not a sample point".into()))?;
        match (x[0].is_zero(), x[1].is_zero()) {
            (false, true) => xs.push((i, signed_norm(p, &x_axis)?, color)),
            (true, false) => ys.push((i, signed_norm(p, &y_axis)?, color)),
            _ => return Err(ChromaticError::Degenerate(format!("{p} is not a nonzero axis point"))),
        }
    }
    let axis_color = |s: &Scalar, on_x: bool| -> Result<ColorIndex, ColoringError> {
        let p = if on_x { Point::xy(s.clone(), Scalar::zero()) } else { Point::xy(Scalar::zero(), s.clone()) };
        coloring.color_of(&p)
    };
    let choose3 = |m: usize| if m < 3 { 0 } else { m * (m - 1) * (m - 2) / 6 };
    let line_triples = choose3(xs.len()) + choose3(ys.len());

    // (pair axis, single axis, pair on X?)
    let cases = [(&xs, &ys, true), (&ys, &xs, false)];
    let mut report = SharpnessReport {
        spheres_checked: line_triples,
        max_colors: if line_triples > 0 { 3 } else { 0 },
        threshold: 4,
        violation_count: 0,
        violations: Vec::new(),
    };
    for (pairs_on, singles_on, pair_on_x) in cases {
        let firsts: Vec<usize> = (0..pairs_on.len()).collect();
        let per_first = map_ordered(&firsts, exec, |&a| -> Result<FirstTally, ColoringError> {
            let mut checked = 0;
            let mut max = 0;
            let mut bad = Vec::new();
            let (ia, xa, ca) = &pairs_on[a];
            for (ib, xb, cb) in &pairs_on[a + 1..] {
                let prod = xa * xb;
                for (ic, y, cc) in singles_on.iter() {
                    checked += 1;
                    let y2 = &prod / y;
                    let cd = axis_color(&y2, !pair_on_x)?;
                    let count = [*ca, *cb, *cc, cd].iter().collect::<BTreeSet<_>>().len();
                    max = max.max(count);
                    if count >= 4 {
                        bad.push((*ia, *ib, *ic, y2));
                    }
                }
            }
            Ok((checked, max, bad))
        });
        for r in per_first {
            let (checked, max, bad) = r?;
            report.spheres_checked += checked;
            report.max_colors = report.max_colors.max(max);
            for (ia, ib, ic, y2) in bad {
                report.violation_count += 1;
                if report.violations.len() < MAX_REPORTED {
                    let mut defining = vec![ia, ib, ic];
                    defining.sort_unstable();
                    let circle = sphere_through(&[points[ia].clone(), points[ib].clone(), points[ic].clone()])?;
                    let fourth = if pair_on_x { Point::xy(Scalar::zero(), y2) } else { Point::xy(y2, Scalar::zero()) };
                    let mut on_points: Vec<(Point, ColorIndex)> = Vec::new();
                    for p in [&points[ia], &points[ib], &points[ic], &fourth] {
                        if !on_points.iter().any(|(q, _)| q == p) {
                            on_points.push((p.clone(), coloring.color_of(p)?));
                        }
                    }
                    let colors = on_points.iter().map(|(_, c)| *c).collect();
                    report.violations.push(PolychromaticWitness { sphere: Sphere::Hyper(circle), defining, on_points, colors });
                }
            }
        }
    }
    Ok(report)
}

/// Up to `count` points of class `i` (all of it, if the class is smaller).
fn sample_up_to(
    coloring: &ProceduralColoring,
    i: ColorIndex,
    count: usize,
    seed: u64,
) -> Result<Vec<Point>, ChromaticError> {
    match sample_class(coloring, i, count, seed) {
        Err(ColoringError::ClassTooSmall { size, .. }) => Ok(sample_class(coloring, i, size, seed)?),
        r => Ok(r?),
    }
}

const POOL_PER_CLASS: usize = 3;

/// Searches a procedural coloring for a sphere with at least `target` colors,
/// examining at most `budget` spheres. Deterministic in `seed` and `budget`.
///
/// The extended two-line coloring uses a direct construction: the circle
/// through `(0, y₂)`, `(0, y₃)`, `(x₄, 0)` of colors 2, 3, 4 together with the
/// point diametrically opposite `(0, y₂)`, which lies off the axes (color 1).
/// Other colorings sample a few points per class and try spheres through
/// differently colored samples.
pub fn find_polychromatic(
    coloring: &ProceduralColoring,
    target: u32,
    budget: usize,
    seed: u64,
) -> Result<Option<PolychromaticWitness>, ChromaticError> {
    coloring.validate()?;
    let k = coloring.k();
    if target > k {
        return Err(ChromaticError::TargetTooLarge { target, k });
    }
    if let ProceduralColoring::TwoLine { extended: true } = coloring {
        return two_line_witness(coloring, target, budget, seed);
    }
    let n = coloring.ambient_dim();
    let mut examined = 0;
    let mut attempt = 0u64;
    while examined < budget {
        let mut pool = Vec::new();
        for i in 1..=k {
            pool.extend(sample_up_to(coloring, ColorIndex(i), POOL_PER_CLASS, seed.wrapping_add(attempt))?);
        }
        let config = ColoredConfig::from_coloring(coloring, &pool)?;
        let inc = Incidence::new(&config);
        let mut any = false;
        for idx in (0..config.len()).combinations(n + 1) {
            let colors: BTreeSet<ColorIndex> = idx.iter().map(|&i| config.points()[i].1).collect();
            if target as usize > n && colors.len() < n + 1 {
                continue;
            }
            let Some(sphere) = sphere_for(&subset_points(&config, &idx), n - 1, n) else {
                continue;
            };
            any = true;
            examined += 1;
            let on = inc.on(&sphere);
            if inc.color_count(&on) >= target as usize {
                return Ok(Some(inc.witness(sphere, idx, &on)));
            }
            if examined >= budget {
                break;
            }
        }
        if !any && attempt > 0 {
            // A finite coloring whose samples never change gives nothing new.
            break;
        }
        attempt += 1;
    }
    Ok(None)
}

fn two_line_witness(
    coloring: &ProceduralColoring,
    target: u32,
    budget: usize,
    seed: u64,
) -> Result<Option<PolychromaticWitness>, ChromaticError> {
    let mut rng = crate::colorings::rng(seed);
    for attempt in 0..budget {
        let (q2, q3, q4) = if attempt == 0 {
            (Scalar::one(), Scalar::ratio(1, 2), Scalar::one())
        } else {
            let mut q = || crate::colorings::random_nonzero_rational(&mut rng, 20, 10);
            (q(), q(), q())
        };
        let y2 = Scalar::theta_pow(q2, 1);
        let y3 = Scalar::theta_pow(q3, 3);
        let x4 = Scalar::theta_pow(q4, 2);
        let b2 = Point::xy(Scalar::zero(), y2.clone());
        let b3 = Point::xy(Scalar::zero(), y3.clone());
        let a4 = Point::xy(x4.clone(), Scalar::zero());
        let circle = sphere_through(&[b2.clone(), b3.clone(), a4.clone()])?;
        let center = circle.center().expect("three non-collinear points");
        let two = Scalar::int(2);
        let opposite = Point::xy(&center[0] * &two, &center[1] * &two - &y2);
        let fourth_axis = Point::xy(&(&y2 * &y3) / &x4, Scalar::zero());
        let mut on_points: Vec<(Point, ColorIndex)> = Vec::new();
        for p in [b2, b3, a4, fourth_axis, opposite] {
            if circle.contains(&p)? && !on_points.iter().any(|(q, _)| *q == p) {
                let c = coloring.color_of(&p)?;
                on_points.push((p, c));
            }
        }
        let colors: BTreeSet<ColorIndex> = on_points.iter().map(|(_, c)| *c).collect();
        if colors.len() >= target as usize {
            return Ok(Some(PolychromaticWitness {
                sphere: Sphere::Hyper(circle),
                defining: vec![0, 1, 2],
                on_points,
                colors,
            }));
        }
    }
    Ok(None)
}
