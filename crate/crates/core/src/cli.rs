//! Command-line entry point.
//!
//! Each subcommand writes its artifact to `--out` (JSON, CSV or OBJ) and
//! prints a [`RunReport`] to stdout. Artifacts are a pure function of the
//! arguments; only the report's `wall_time` varies between runs.
//!
//! Exit codes: 0 success, 1 invalid arguments or input, 2 failed verification.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bodies::ConvexBody;
use crate::construct::{build_pattern, catalog, Pattern, CATALOG};
use crate::error::{invalid, Error, Result};
use crate::fractal::{
    apollonian_packing, box_dimension, dyadic_scales, residual_sample, sierpinski_sphere, Vec3,
};
use crate::mesh::export_mesh;
use crate::oracle::{check_lemma1, random_pair};
use crate::probe::{face_pattern, sample_probe};

#[derive(Parser, Debug)]
#[command(
    name = "convexity",
    version,
    about = "Facial-dimension patterns of convex bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a body realizing a facial-dimension pattern.
    Build {
        /// Strictly increasing positive dimensions, e.g. `1,3,6`.
        #[arg(long, allow_hyphen_values = true)]
        pattern: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recompute the pattern and fail with exit code 2 on mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Face pattern, witness chains and a random-direction histogram.
    Probe {
        #[command(flatten)]
        body: BodySource,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose every face of random Minkowski sums.
    LemmaCheck {
        /// Inclusive seed range `a..b`.
        #[arg(long)]
        seed_range: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spherical fractal point sets and cap packings.
    Fractal {
        #[arg(long, value_enum)]
        kind: FractalKind,
        /// Packing depth (gasket only).
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Number of points. For the gasket, writes residual points as CSV
        /// instead of the caps JSON.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-counting dimension of a CSV point cloud.
    Boxdim {
        #[arg(long = "in")]
        input: PathBuf,
        /// Inclusive exponent range `a..b` for box sizes `2^-a .. 2^-b`.
        #[arg(long, default_value = "3..9")]
        scales: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Triangle mesh (OBJ) of a body in R^3.
    ExportMesh {
        #[command(flatten)]
        body: BodySource,
        #[arg(long, default_value_t = 3)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the named fixtures, or write one with `--name`.
    Catalog {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BodySource {
    /// Body JSON file.
    #[arg(long)]
    body: Option<PathBuf>,
    /// Named fixture from the catalog.
    #[arg(long)]
    fixture: Option<String>,
}

impl BodySource {
    fn load(&self) -> Result<(ConvexBody, String)> {
        match (&self.body, &self.fixture) {
            (Some(path), _) => Ok((
                ConvexBody::from_json(&std::fs::read_to_string(path)?)?,
                path.display().to_string(),
            )),
            (None, Some(name)) => Ok((catalog(name)?, name.clone())),
            (None, None) => invalid("one of --body or --fixture is required"),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FractalKind {
    Gasket,
    Sierpinski,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub outputs: Value,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

/// Outcome of a subcommand before timing is attached.
struct Outcome {
    parameters: Value,
    seed: Option<u64>,
    outputs: Value,
    /// Message for a failed verification; flips the exit code to 2.
    failure: Option<String>,
}

impl Outcome {
    fn ok(parameters: Value, seed: Option<u64>, outputs: Value) -> Self {
        Self {
            parameters,
            seed,
            outputs,
            failure: None,
        }
    }
}

/// Result of one invocation without any printing.
#[derive(Debug)]
pub struct Invocation {
    pub code: i32,
    pub report: Option<RunReport>,
    /// Usage text, error or verification message.
    pub message: Option<String>,
}

/// Parses and executes `argv` (program name first).
pub fn invoke<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return Invocation {
                code: if e.use_stderr() { 1 } else { 0 },
                report: None,
                message: Some(e.render().to_string()),
            }
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    match execute(cli.command) {
        Ok(o) => Invocation {
            code: if o.failure.is_some() { 2 } else { 0 },
            report: Some(RunReport {
                command: name.to_string(),
                parameters: o.parameters,
                seed: o.seed,
                outputs: o.outputs,
                wall_time: start.elapsed().as_secs_f64(),
            }),
            message: o.failure.map(|m| format!("verification failed: {m}")),
        },
        Err(e) => Invocation {
            code: exit_code(&e),
            report: None,
            message: Some(format!("error: {e}")),
        },
    }
}

/// Runs the command line: report to stdout, diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use std::io::Write;
    let inv = invoke(argv);
    // A closed stdout (e.g. piped into `head`) is not an error.
    let mut out = std::io::stdout().lock();
    if let Some(r) = &inv.report {
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(r).expect("report serializes")
        );
    }
    match (&inv.message, inv.code) {
        (Some(m), 0) => {
            let _ = write!(out, "{m}");
        }
        (Some(m), _) => {
            let _ = writeln!(std::io::stderr(), "{}", m.trim_end());
        }
        _ => {}
    }
    inv.code
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VerificationFailed(_) | Error::DecompositionFailure(_) => 2,
        _ => 1,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Probe { .. } => "probe",
        Command::LemmaCheck { .. } => "lemma-check",
        Command::Fractal { .. } => "fractal",
        Command::Boxdim { .. } => "boxdim",
        Command::ExportMesh { .. } => "export-mesh",
        Command::Catalog { .. } => "catalog",
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Build {
            pattern,
            out,
            verify,
        } => build(&pattern, out.as_deref(), verify),
        Command::Probe {
            body,
            samples,
            seed,
            out,
        } => probe(&body, samples, seed, out.as_deref()),
        Command::LemmaCheck {
            seed_range,
            dim,
            max_vertices,
            out,
        } => lemma_check(&seed_range, dim, max_vertices, out.as_deref()),
        Command::Fractal {
            kind,
            depth,
            points,
            seed,
            out,
        } => fractal(kind, depth, points, seed, out.as_deref()),
        Command::Boxdim { input, scales, out } => boxdim(&input, &scales, out.as_deref()),
        Command::ExportMesh {
            body,
            resolution,
            out,
        } => mesh(&body, resolution, out.as_deref()),
        Command::Catalog { name, out } => list_catalog(name.as_deref(), out.as_deref()),
    }
}

/// Parses an inclusive range `a..b` with `a <= b`.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::InvalidArgument(format!("range `{s}` is not of the form a..b")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Error::InvalidArgument(format!("bad range bound `{t}`")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return invalid(format!("range `{s}` is empty"));
    }
    Ok((a, b))
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    if let Some(p) = path {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(p, text)?;
    }
    Ok(())
}

fn path_value(p: Option<&Path>) -> Value {
    p.map(|p| Value::String(p.display().to_string()))
        .unwrap_or(Value::Null)
}

fn build(pattern: &str, out: Option<&Path>, verify: bool) -> Result<Outcome> {
    let d: Pattern = pattern.parse()?;
    let body = build_pattern(&d);
    if let Some(p) = out {
        let mut text = body.to_json()?;
        text.push('\n');
        std::fs::write(p, text)?;
    }
    let expected: Vec<usize> = std::iter::once(0).chain(d.dims().iter().copied()).collect();
    let mut outputs = json!({
        "pattern": d.to_string(),
        "expected_dims": expected,
        "ambient_dim": body.ambient_dim(),
        "body_dim": body.body_dim(),
    });
    let mut failure = None;
    if verify {
        let (found, chains) = face_pattern(&body)?;
        let dims: Vec<usize> = found.dims().iter().copied().collect();
        if dims != expected {
            failure = Some(format!("expected {expected:?}, found {dims:?}"));
        }
        outputs["verified_dims"] = json!(dims);
        outputs["witness_chains"] = json!(chains);
    }
    if out.is_none() {
        outputs["body"] = serde_json::to_value(&body)?;
    }
    Ok(Outcome {
        parameters: json!({ "pattern": pattern, "out": path_value(out), "verify": verify }),
        seed: None,
        outputs,
        failure,
    })
}

fn probe(src: &BodySource, samples: usize, seed: u64, out: Option<&Path>) -> Result<Outcome> {
    let (body, label) = src.load()?;
    let (pattern, chains) = face_pattern(&body)?;
    let histogram = sample_probe(&body, samples, seed)?;
    let stray: Vec<usize> = histogram
        .keys()
        .copied()
        .filter(|d| !pattern.contains(*d))
        .collect();
    let result = json!({
        "pattern": pattern,
        "witness_chains": chains,
        "histogram": histogram,
    });
    write_json(out, &result)?;
    Ok(Outcome {
        parameters: json!({ "body": label, "samples": samples, "out": path_value(out) }),
        seed: Some(seed),
        failure: (!stray.is_empty())
            .then(|| format!("sampled dimensions {stray:?} are missing from the pattern")),
        outputs: result,
    })
}

fn lemma_check(
    range: &str,
    dim: usize,
    max_vertices: usize,
    out: Option<&Path>,
) -> Result<Outcome> {
    let (a, b) = parse_range(range)?;
    if dim == 0 || max_vertices == 0 {
        return invalid("dimension and vertex bound must be positive");
    }
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for seed in a..=b {
        let (p, q) = random_pair(seed, dim, max_vertices)?;
        match check_lemma1(&p, &q) {
            Ok(decomps) => runs.push(json!({
                "seed": seed,
                "passed": true,
                "faces": decomps.len(),
                "max_residual": decomps.iter().map(|d| d.residual).fold(0.0, f64::max),
                "decompositions": decomps,
            })),
            Err(e @ Error::DecompositionFailure(_)) => {
                failures.push(seed);
                runs.push(json!({ "seed": seed, "passed": false, "error": e.to_string() }));
            }
            Err(e) => return Err(e),
        }
    }
    let result = json!({
        "passes": runs.len() - failures.len(),
        "failures": failures,
        "runs": runs,
    });
    write_json(out, &result)?;
    Ok(Outcome {
        parameters: json!({
            "seed_range": range, "dim": dim, "max_vertices": max_vertices, "out": path_value(out),
        }),
        seed: Some(a),
        failure: (!failures.is_empty()).then(|| format!("seeds {failures:?} failed to decompose")),
        outputs: json!({ "passes": result["passes"], "failures": result["failures"] }),
    })
}

fn points_csv(points: &[Vec3]) -> String {
    let mut s = String::with_capacity(points.len() * 72);
    for p in points {
        writeln!(s, "{:.16e},{:.16e},{:.16e}", p[0], p[1], p[2]).unwrap();
    }
    s
}

/// Reads three comma-separated floats per line; blank lines are skipped.
pub fn read_points_csv(text: &str) -> Result<Vec<Vec3>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("line {}: not a float row", n + 1)))?;
        if vals.len() != 3 || vals.iter().any(|v| !v.is_finite()) {
            return invalid(format!("line {}: expected three finite columns", n + 1));
        }
        out.push([vals[0], vals[1], vals[2]]);
    }
    Ok(out)
}

fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| Error::InvalidArgument("--seed is required for sampled output".into()))
}

fn fractal(
    kind: FractalKind,
    depth: usize,
    points: Option<usize>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let write = |text: String| -> Result<()> {
        if let Some(p) = out {
            std::fs::write(p, text)?;
        }
        Ok(())
    };
    match kind {
        FractalKind::Gasket => {
            let packing = apollonian_packing(depth)?;
            let tangency = packing.max_tangency_error();
            let mut outputs = json!({
                "caps": packing.len(),
                "residual_fraction": packing.residual_fraction(),
                "max_descartes_residual": packing.max_descartes_residual,
                "max_tangency_error": tangency,
            });
            let seed = match points {
                Some(n) => {
                    let seed = require_seed(seed)?;
                    let s = residual_sample(&packing, n, seed)?;
                    outputs["points"] = json!(s.points.len());
                    outputs["acceptance_ratio"] = json!(s.acceptance_ratio());
                    write(points_csv(&s.points))?;
                    Some(seed)
                }
                None => {
                    let mut text = serde_json::to_string_pretty(&packing)?;
                    text.push('\n');
                    write(text)?;
                    None
                }
            };
            let worst = tangency.max(packing.max_descartes_residual);
            Ok(Outcome {
                parameters: json!({
                    "kind": "gasket", "depth": depth, "points": points, "out": path_value(out),
                }),
                seed,
                outputs,
                failure: (worst > 1e-9)
                    .then(|| format!("tangency residual {worst:e} exceeds 1e-9")),
            })
        }
        FractalKind::Sierpinski => {
            let n = points.ok_or_else(|| Error::InvalidArgument("--points is required".into()))?;
            let seed = require_seed(seed)?;
            let pts = sierpinski_sphere(n, seed)?;
            write(points_csv(&pts))?;
            Ok(Outcome::ok(
                json!({ "kind": "sierpinski", "points": n, "out": path_value(out) }),
                Some(seed),
                json!({ "points": pts.len() }),
            ))
        }
    }
}

fn boxdim(input: &Path, scales: &str, out: Option<&Path>) -> Result<Outcome> {
    let (a, b) = parse_range(scales)?;
    let points = read_points_csv(&std::fs::read_to_string(input)?)?;
    let fit = box_dimension(&points, &dyadic_scales(a as i32, b as i32))?;
    write_json(out, &fit)?;
    Ok(Outcome::ok(
        json!({ "in": input.display().to_string(), "scales": scales, "out": path_value(out) }),
        None,
        serde_json::to_value(&fit)?,
    ))
}

fn mesh(src: &BodySource, resolution: usize, out: Option<&Path>) -> Result<Outcome> {
    let (body, label) = src.load()?;
    let m = export_mesh(&body, resolution)?;
    if let Some(p) = out {
        std::fs::write(p, m.to_obj())?;
    }
    Ok(Outcome {
        parameters: json!({ "body": label, "resolution": resolution, "out": path_value(out) }),
        seed: None,
        outputs: json!({
            "vertices": m.vertices.len(),
            "triangles": m.triangles.len(),
            "facet_planes": m.facet_planes(),
        }),
        failure: (!m.is_watertight()).then(|| "mesh is not watertight".to_string()),
    })
}

fn list_catalog(name: Option<&str>, out: Option<&Path>) -> Result<Outcome> {
    let outputs = match name {
        Some(n) => {
            let body = catalog(n)?;
            if let Some(p) = out {
                let mut text = body.to_json()?;
                text.push('\n');
                std::fs::write(p, text)?;
            }
            let (pattern, _) = face_pattern(&body)?;
            json!({ "name": n, "pattern": pattern, "body": body })
        }
        None => {
            let mut patterns = BTreeMap::new();
            for n in CATALOG {
                let (pattern, _) = face_pattern(&catalog(n)?)?;
                patterns.insert(*n, pattern);
            }
            let value = json!(patterns);
            write_json(out, &value)?;
            value
        }
    };
    Ok(Outcome::ok(
        json!({ "name": name, "out": path_value(out) }),
        None,
        outputs,
    ))
}
