mod report;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inversive::chromatic::{
    find_polychromatic, flag_sharpness, generic_sharpness, max_polychromatic, separating_circle_5pts,
    separating_sphere_bruteforce, two_line_sample, two_line_sharpness, ChromaticError, Exec, PolychromaticWitness,
};
use inversive::colorings::{ColoringError, ProceduralColoring};
use inversive::euclid::{flag_euclidean_sharpness, great_intersection, max_colors_great, EuclidError};
use inversive::geom::{GeomError, Sphere};
use inversive::json::{
    coloring_from_json, config_from_json, great_flat_from_json, image_map_from_json, points_from_json,
    separation_from_json, wcp_violation_from_json, witness_from_json, JsonError, ToJson,
};
use inversive::wcp::{
    build_sharp_map, circular_general_position, five_point_refute, sample_circles, wcp_check, WcpError, WcpVerdict,
};
use serde_json::{json, Value};
use thiserror::Error;

use report::{error_report, RunReport, Verdict};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Chromatic(#[from] ChromaticError),
    #[error(transparent)]
    Euclid(#[from] EuclidError),
    #[error(transparent)]
    Wcp(#[from] WcpError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("{0}")]
    Usage(String),
}

/// Exact inversive geometry: colorings, polychromatic spheres, separation and
/// circle-preserving maps.
#[derive(Parser)]
#[command(name = "inversive", version)]
struct Cli {
    /// Evaluate enumerations on the rayon thread pool (sized by THREADS if set).
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a coloring's sharpness bound on a seeded sample.
    VerifyConstruction {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Sample points per color class.
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scan every sphere for the flag coloring instead of only those through 0 and ∞.
        #[arg(long)]
        full: bool,
    },
    /// Find the sphere through config points with the most colors.
    Search {
        #[arg(long)]
        input: PathBuf,
        /// Sphere dimension (defaults to n − 1).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        target: u32,
    },
    /// Search a procedural coloring for a sphere with `target` colors.
    SearchProcedural {
        /// Descriptor file, inline JSON, or a built-in name: flag, two-line,
        /// two-line-extended, flag-euclidean (append `:N` to set n).
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        target: u32,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Find a sphere separating two of the given distinctly colored points.
    Separate {
        #[arg(long)]
        input: PathBuf,
        /// Use the exhaustive search even for five planar points.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Great spheres on 𝕊ⁿ.
    #[command(subcommand)]
    Euclid(EuclidCommand),
    /// Weakly circle-preserving maps.
    #[command(subcommand)]
    Wcp(WcpCommand),
    /// Draw a planar configuration as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Witness (or report holding one) whose sphere is highlighted.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Re-check a witness or violation emitted by another command.
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// Map to evaluate a circle-preserving violation against.
        #[arg(long)]
        map: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EuclidCommand {
    /// Intersect a great hypersphere with a great circle: {"s": flat, "c": flat}.
    Intersect {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check the Euclidean flag coloring's bound on a seeded sample.
    Verify {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Find the great hypersphere through config points with the most colors.
    Search {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        target: u32,
    },
}

#[derive(Subcommand)]
enum WcpCommand {
    /// Check a map on seeded sample circles.
    Check {
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        circles: CircleArgs,
    },
    /// Refute a map onto five points in circular general position.
    Refute {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the flag-coloring map onto four non-concyclic points and check it.
    Sharp {
        /// JSON file with {"image": [four points]}.
        #[arg(long)]
        image: PathBuf,
        #[command(flatten)]
        circles: CircleArgs,
    },
    /// Test circular general position of {"image": [points]}.
    Cgp {
        #[arg(long)]
        image: PathBuf,
    },
}

#[derive(Args)]
struct CircleArgs {
    #[arg(long, default_value_t = 1000)]
    circles: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Flag,
    Generic,
    TwoLine,
    FlagEuclidean,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Flag => "flag",
            Kind::Generic => "generic",
            Kind::TwoLine => "two-line",
            Kind::FlagEuclidean => "flag-euclidean",
        }
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// A report's payload, or the document itself when it is not a report.
fn payload(v: Value) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key("payload") && m.contains_key("verdict") => {
            m.remove("payload").unwrap_or(Value::Null)
        }
        v => v,
    }
}

fn resolve_coloring(desc: &str) -> Result<ProceduralColoring, CliError> {
    if desc.trim_start().starts_with('{') {
        return Ok(coloring_from_json(&serde_json::from_str(desc)?)?);
    }
    let path = Path::new(desc);
    if path.exists() {
        return Ok(coloring_from_json(&read_json(path)?)?);
    }
    let (name, n) = match desc.split_once(':') {
        Some((name, n)) => (name, n.parse().map_err(|_| CliError::Usage(format!("bad dimension in `{desc}`")))?),
        None => (desc, 2),
    };
    let c = match name {
        "flag" => ProceduralColoring::FlagInversive { n },
        "flag-euclidean" => ProceduralColoring::FlagEuclidean { n },
        "two-line" => ProceduralColoring::TwoLine { extended: false },
        "two-line-extended" => ProceduralColoring::TwoLine { extended: true },
        _ => return Err(CliError::Usage(format!("`{desc}` is neither a file nor a built-in coloring"))),
    };
    c.validate()?;
    Ok(c)
}

fn sharpness(
    command: &str,
    report: Value,
    violations: usize,
    checked: usize,
    max_colors: usize,
) -> RunReport {
    let verdict = if violations == 0 { Verdict::Verified } else { Verdict::Violation };
    RunReport::new(command, verdict, report)
        .stat("spheres_checked", checked)
        .stat("max_colors", max_colors)
        .stat("violation_count", violations)
}

fn witness_report(command: &str, w: &PolychromaticWitness, target: u32) -> RunReport {
    let verdict = if w.color_count() >= target as usize { Verdict::Witness } else { Verdict::NoWitness };
    RunReport::new(command, verdict, w.to_json()).stat("max_colors", w.color_count())
}

fn run(cli: Cli) -> Result<RunReport, CliError> {
    let exec = if cli.parallel { Exec::Parallel } else { Exec::Serial };
    Ok(match cli.command {
        Command::VerifyConstruction { kind, n, samples, seed, full } => {
            let cmd = "verify-construction";
            let r = match kind {
                Kind::Flag => {
                    let r = flag_sharpness(n, samples, seed, !full, exec)?;
                    sharpness(cmd, r.to_json(), r.violation_count, r.spheres_checked, r.max_colors)
                }
                Kind::Generic => {
                    let r = generic_sharpness(n, samples, seed, exec)?;
                    sharpness(cmd, r.to_json(), r.violation_count, r.spheres_checked, r.max_colors)
                }
                Kind::TwoLine => {
                    if n != 2 {
                        return Err(CliError::Usage("the two-line coloring lives in the plane (n = 2)".into()));
                    }
                    let r = two_line_sharpness(&two_line_sample(samples, seed)?, exec)?;
                    sharpness(cmd, r.to_json(), r.violation_count, r.spheres_checked, r.max_colors)
                }
                Kind::FlagEuclidean => {
                    let r = flag_euclidean_sharpness(n, samples, seed, exec)?;
                    sharpness(cmd, r.to_json(), r.violation_count, r.spheres_checked, r.max_colors)
                }
            };
            r.param("kind", kind.name()).param("n", n).param("samples", samples).param("seed", seed).param("pruned", !full)
        }
        Command::Search { input, dim, target } => {
            let config = config_from_json(&read_json(&input)?)?;
            let d = dim.unwrap_or(config.n().saturating_sub(1));
            let w = max_polychromatic(&config, d, exec)?;
            witness_report("search", &w, target)
                .param("input", input.display().to_string())
                .param("dim", d)
                .param("target", target)
                .stat("points", config.len())
        }
        Command::SearchProcedural { coloring, target, budget, seed } => {
            let c = resolve_coloring(&coloring)?;
            let r = match find_polychromatic(&c, target, budget, seed)? {
                Some(w) => RunReport::new("search-procedural", Verdict::Witness, w.to_json()).stat("colors", w.color_count()),
                None => RunReport::new("search-procedural", Verdict::NoWitness, Value::Null),
            };
            r.param("coloring", c.to_json()).param("target", target).param("budget", budget).param("seed", seed)
        }
        Command::Separate { input, bruteforce } => {
            let config = config_from_json(&read_json(&input)?)?;
            let points = config.points().to_vec();
            let w = if config.n() == 2 && points.len() == 5 && !bruteforce {
                Some(separating_circle_5pts(&points)?)
            } else {
                separating_sphere_bruteforce(&points)?
            };
            let r = match w {
                Some(w) => RunReport::new("separate", Verdict::Witness, w.to_json()),
                None => RunReport::new("separate", Verdict::NoWitness, Value::Null),
            };
            r.param("input", input.display().to_string()).param("bruteforce", bruteforce)
        }
        Command::Euclid(EuclidCommand::Intersect { input }) => {
            let v = read_json(&input)?;
            let s = great_flat_from_json(v.get("s").ok_or_else(|| CliError::Usage("missing `s`".into()))?)?;
            let c = great_flat_from_json(v.get("c").ok_or_else(|| CliError::Usage("missing `c`".into()))?)?;
            let hit = great_intersection(&s, &c)?;
            let verdict = if hit.validate(&s, &c) { Verdict::Verified } else { Verdict::Invalid };
            RunReport::new("euclid intersect", verdict, hit.to_json()).param("input", input.display().to_string())
        }
        Command::Euclid(EuclidCommand::Verify { n, samples, seed }) => {
            let r = flag_euclidean_sharpness(n, samples, seed, exec)?;
            sharpness("euclid verify", r.to_json(), r.violation_count, r.spheres_checked, r.max_colors)
                .param("n", n)
                .param("samples", samples)
                .param("seed", seed)
        }
        Command::Euclid(EuclidCommand::Search { input, target }) => {
            let config = config_from_json(&read_json(&input)?)?;
            let w = max_colors_great(&config, exec)?;
            let verdict = if w.color_count() >= target as usize { Verdict::Witness } else { Verdict::NoWitness };
            RunReport::new("euclid search", verdict, w.to_json())
                .param("input", input.display().to_string())
                .param("target", target)
                .stat("max_colors", w.color_count())
        }
        Command::Wcp(WcpCommand::Check { map, circles }) => {
            let m = image_map_from_json(&payload(read_json(&map)?))?;
            let samples = sample_circles(circles.circles, circles.seed)?;
            wcp_report("wcp check", wcp_check(&m, &samples, exec)?)
                .param("map", m.to_json())
                .param("circles", circles.circles)
                .param("seed", circles.seed)
        }
        Command::Wcp(WcpCommand::Refute { map, budget, seed }) => {
            let m = image_map_from_json(&payload(read_json(&map)?))?;
            let v = five_point_refute(&m, budget, seed)?;
            RunReport::new("wcp refute", Verdict::Violation, v.to_json())
                .param("map", m.to_json())
                .param("budget", budget)
                .param("seed", seed)
        }
        Command::Wcp(WcpCommand::Sharp { image, circles }) => {
            let v = read_json(&image)?;
            let items = v.get("image").and_then(Value::as_array).ok_or_else(|| CliError::Usage("missing `image` array".into()))?;
            let m = build_sharp_map(&points_from_json(items, None)?)?;
            let samples = sample_circles(circles.circles, circles.seed)?;
            let mut r = wcp_report("wcp sharp", wcp_check(&m, &samples, exec)?);
            r.payload = json!({ "map": m.to_json(), "check": r.payload });
            r.param("circles", circles.circles).param("seed", circles.seed)
        }
        Command::Wcp(WcpCommand::Cgp { image }) => {
            let v = read_json(&image)?;
            let items = v.get("image").and_then(Value::as_array).ok_or_else(|| CliError::Usage("missing `image` array".into()))?;
            let r = circular_general_position(&points_from_json(items, None)?)?;
            let verdict = if r.verdict { Verdict::Verified } else { Verdict::Violation };
            RunReport::new("wcp cgp", verdict, r.to_json()).param("image", image.display().to_string())
        }
        Command::Plot { input, out, witness } => {
            let config = config_from_json(&payload(read_json(&input)?))?;
            let sphere: Option<Sphere> = match &witness {
                None => None,
                Some(p) => Some(highlight_sphere(&payload(read_json(p)?))?),
            };
            let text = svg::render(&config, sphere.as_ref()).map_err(CliError::Usage)?;
            fs::write(&out, &text).map_err(|source| CliError::Io { path: out.clone(), source })?;
            RunReport::new("plot", Verdict::Verified, json!({ "out": out.display().to_string(), "bytes": text.len() }))
                .param("input", input.display().to_string())
        }
        Command::Validate { input, map } => {
            let v = payload(read_json(&input)?);
            let (kind, ok) = if v.get("separated").is_some() {
                ("separation", separation_from_json(&v)?.validate()?)
            } else if v.get("circle").is_some() {
                let path = map.ok_or_else(|| CliError::Usage("validating a map violation needs --map".into()))?;
                let m = image_map_from_json(&payload(read_json(&path)?))?;
                ("wcp-violation", wcp_violation_from_json(&v)?.validate(&m)?)
            } else {
                ("polychromatic", witness_from_json(&v)?.validate()?)
            };
            let verdict = if ok { Verdict::Verified } else { Verdict::Invalid };
            RunReport::new("validate", verdict, json!({ "kind": kind, "valid": ok })).param("input", input.display().to_string())
        }
    })
}

fn highlight_sphere(v: &Value) -> Result<Sphere, CliError> {
    if v.get("separated").is_some() {
        return Ok(Sphere::Hyper(separation_from_json(v)?.sphere));
    }
    if v.get("circle").is_some() {
        return Ok(Sphere::Hyper(inversive::json::hypersphere_from_json(&v["circle"])?));
    }
    Ok(witness_from_json(v)?.sphere)
}

fn wcp_report(command: &str, verdict: WcpVerdict) -> RunReport {
    match verdict {
        WcpVerdict::PassOnSample { circles_checked } => {
            RunReport::new(command, Verdict::Verified, json!({ "pass_on_sample": true, "circles_checked": circles_checked }))
                .stat("circles_checked", circles_checked)
        }
        WcpVerdict::Violation { sample_index, violation } => RunReport::new(
            command,
            Verdict::Violation,
            json!({ "pass_on_sample": false, "sample_index": sample_index, "violation": violation.to_json() }),
        ),
    }
}

fn command_name(args: &[String]) -> String {
    args.iter().skip(1).find(|a| !a.starts_with('-')).cloned().unwrap_or_default()
}

/// Prints a report; a closed pipe is not an error.
fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(if code == 0 { 0 } else { 2 });
        }
    };
    if let Some(threads) = std::env::var("THREADS").ok().and_then(|t| t.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli) {
        Ok(report) => {
            emit(&report.to_json());
            ExitCode::from(report.verdict.exit_code() as u8)
        }
        Err(e) => {
            let name = command_name(&args);
            emit(&error_report(&name, &e.to_string()));
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
