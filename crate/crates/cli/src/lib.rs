//! The `widthlab` command line: body files in, JSON or CSV out.
//!
//! Exit codes: 0 on success, 1 when a requested check fails, 2 on invalid
//! input. Diagnostics go to stderr as a single line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use widthlab::calculus::{
    classify_from_report, hausdorff, width_report, write_width_csv, Verdict, WidthRange,
};
use widthlab::chebyshev::{chebyshev, ChebyshevOptions};
use widthlab::constructions::{
    crw1_forward, crw1_inverse, cw1_forward, cw1_inverse, random_cw_body_2d, reuleaux_polygon,
    tetra_ball_body, Interval1D, PairParams1D,
};
use widthlab::experiments::{
    ball_intersection_width_sweep, gram_rank_with_threshold, write_singular_values_csv,
    write_sweep_csv, RANK_THRESHOLD,
};
use widthlab::hyperspace::{eta, eta_fiber_homotopy, fiber_ball, maehara_check, BodyPair};
use widthlab::io::{body_to_json, load_body};
use widthlab::{Body, DirectionGrid, Error, Similarity};

#[derive(Debug, Parser)]
#[command(name = "widthlab", version, about = "Support-function experiments on bodies of constant width")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Number of grid directions (default 4096 in 2-D, 20000 in 3-D and up).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Relative tolerance for width and certification checks.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Absolute tolerance for solver gaps.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_abs: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Pivot budget for the Chebyshev solver.
    #[arg(long, global = true, default_value_t = 5000)]
    budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Width report of a body; optionally require constant width.
    WidthCheck {
        #[arg(long)]
        body: PathBuf,
        /// Exit 1 unless the width is constant and lies in the range.
        #[arg(long)]
        expect_constant: bool,
        /// Lower end of the admissible width range D.
        #[arg(long, default_value_t = 0.0)]
        min_width: f64,
        /// Upper end of D (unbounded when omitted).
        #[arg(long)]
        max_width: Option<f64>,
    },
    /// Hausdorff distance between two bodies.
    Hausdorff {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Chebyshev (minimal enclosing) ball.
    Chebyshev {
        #[arg(long)]
        body: PathBuf,
    },
    /// Emit a Reuleaux polygon, or a seeded random constant-width mixture.
    Reuleaux {
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, default_value_t = 3)]
        sides: usize,
        /// Rotation angle in radians.
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        /// Generate a random mixture of this many polygons instead.
        #[arg(long)]
        mixture: Option<usize>,
    },
    /// Numerical rank of the rotated Reuleaux family.
    GramRank {
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, default_value_t = RANK_THRESHOLD)]
        threshold: f64,
    },
    /// Width sweep of the four-ball intersection over a regular tetrahedron.
    TetraSweep {
        #[arg(long, default_value_t = 1.0)]
        edge: f64,
    },
    /// Trace of the contraction H(A, t) = tA + (1 - t)B onto the fiber ball.
    HomotopyTrace {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Certify a pair of constant relative width and check that Y + Z has width 2d.
    PairSum {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// One-dimensional parametrizations of intervals and interval pairs.
    Dim1(Dim1Args),
}

#[derive(Debug, Args)]
struct Dim1Args {
    #[arg(long, conflicts_with = "inverse", required_unless_present = "inverse")]
    forward: bool,
    #[arg(long)]
    inverse: bool,
    /// Interval `LO HI` (forward).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    interval: Option<Vec<f64>>,
    /// Second interval of a pair (forward).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    second: Option<Vec<f64>>,
    /// Width and midpoint `D MID` (inverse).
    #[arg(long, num_args = 2, value_names = ["D", "MID"], allow_negative_numbers = true)]
    point: Option<Vec<f64>>,
    /// Pair coordinates `D A P` (inverse).
    #[arg(long, num_args = 3, value_names = ["D", "A", "P"], allow_negative_numbers = true)]
    params: Option<Vec<f64>>,
}

/// Validated run settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid_n: Option<usize>,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub seed: u64,
    pub output_format: Format,
    pub iteration_budget: usize,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs) -> Result<Self, Failure> {
        if let Some(n) = g.grid {
            if n < 8 || !n.is_multiple_of(2) {
                return Err(Failure::usage(format!("--grid must be even and at least 8, got {n}")));
            }
        }
        for (name, t) in [("--tol", g.tol), ("--tol-abs", g.tol_abs)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Failure::usage(format!("{name} must be positive, got {t}")));
            }
        }
        if g.budget == 0 {
            return Err(Failure::usage("--budget must be positive"));
        }
        Ok(Self {
            grid_n: g.grid,
            tol_abs: g.tol_abs,
            tol_rel: g.tol,
            seed: g.seed,
            output_format: g.format,
            iteration_budget: g.budget,
        })
    }

    /// The grid for bodies in `R^dim`; the flag is ignored on the line.
    pub fn grid(&self, dim: usize) -> Result<DirectionGrid, Error> {
        let n = self.grid_n.unwrap_or(if dim <= 2 { 4096 } else { 20000 });
        DirectionGrid::new(dim, n)
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConstantWidth { .. }
            | Error::NotConstantRelativeWidth { .. }
            | Error::FiberMismatch(_)
            | Error::CheckFailed(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("write failed: {e}"))
    }
}

/// Writes integral floats as integers so that `2.0` prints as `2`.
fn normalize(value: Value) -> Value {
    match value {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() && x.fract() == 0.0 && x.abs() < 9.0e15 => Value::from(x as i64),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

fn emit_json(out: &mut dyn Write, value: impl serde::Serialize) -> Result<(), Failure> {
    let value = serde_json::to_value(value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out, "{}", normalize(value))?;
    Ok(())
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message.replace('\n', " "));
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = RunConfig::from_args(&cli.global)?;
    let csv = cfg.output_format == Format::Csv;
    match cli.command {
        Command::WidthCheck {
            body,
            expect_constant,
            min_width,
            max_width,
        } => {
            let body = load_body(body)?;
            let grid = cfg.grid(body.dim())?;
            let range = WidthRange::new(min_width, max_width.unwrap_or(f64::INFINITY), true, max_width.is_some())?;
            if csv {
                write_width_csv(&body, &grid, &mut *out)?;
            }
            let report = width_report(&body, &grid)?;
            let verdict = classify_from_report(&report, &range, cfg.tol_rel);
            if !csv {
                emit_json(out, serde_json::json!({"report": report, "verdict": verdict}))?;
            }
            if expect_constant && !verdict.is_in_cw_d() {
                return Err(Failure::check(match verdict {
                    Verdict::NotConstantWidth(spread) => format!("width is not constant (spread {spread:e})"),
                    other => format!("constant width outside the range: {other:?}"),
                }));
            }
            Ok(())
        }
        Command::Hausdorff { body, other } => {
            let (a, b) = (load_body(body)?, load_body(other)?);
            let grid = cfg.grid(a.dim())?;
            let d = hausdorff(&a, &b, &grid)?;
            if csv {
                writeln!(out, "hausdorff\n{d}")?;
            } else {
                emit_json(out, serde_json::json!({"hausdorff": d}))?;
            }
            Ok(())
        }
        Command::Chebyshev { body } => {
            let body = load_body(body)?;
            let grid = cfg.grid(body.dim())?;
            let opts = ChebyshevOptions {
                tol: cfg.tol_abs,
                budget: cfg.iteration_budget,
                ..ChebyshevOptions::default()
            };
            let data = chebyshev(&body, &grid, &opts)?;
            if csv {
                let coords: Vec<String> = (0..data.center.dim()).map(|i| format!("center_{i}")).collect();
                writeln!(out, "{},radius,active_count", coords.join(","))?;
                let values: Vec<String> = data.center.iter().map(f64::to_string).collect();
                writeln!(out, "{},{},{}", values.join(","), data.radius, data.active_dirs.len())?;
            } else {
                emit_json(out, &data)?;
            }
            Ok(())
        }
        Command::Reuleaux {
            width,
            sides,
            angle,
            mixture,
        } => {
            let body = match mixture {
                Some(m) => random_cw_body_2d(cfg.seed, width, m)?,
                None => reuleaux_polygon(width, sides, &Similarity::rotation_2d(angle))?,
            };
            if csv {
                let grid = cfg.grid(2)?;
                let sample = body.sample_support(&grid)?;
                writeln!(out, "t,h")?;
                for k in 0..grid.len() {
                    writeln!(out, "{},{}", grid.angle(k).unwrap_or(0.0), sample.values[k])?;
                }
            } else {
                let text = serde_json::to_string_pretty(&normalize(body_to_json(&body)))
                    .map_err(|e| Failure::usage(e.to_string()))?;
                writeln!(out, "{text}")?;
            }
            Ok(())
        }
        Command::GramRank { l, width, threshold } => {
            let grid = cfg.grid(2)?;
            let report = gram_rank_with_threshold(l, width, &grid, threshold)?;
            if csv {
                write_singular_values_csv(&report, &mut *out)?;
            } else {
                emit_json(out, &report)?;
            }
            if report.numerical_rank != l {
                return Err(Failure::check(format!("rank {} < l = {l}", report.numerical_rank)));
            }
            Ok(())
        }
        Command::TetraSweep { edge } => {
            let body = tetra_ball_body(edge)?;
            let grid = cfg.grid(3)?;
            if csv {
                write_sweep_csv(&body, &grid, &mut *out)?;
            } else {
                emit_json(out, ball_intersection_width_sweep(&body, &grid)?)?;
            }
            Ok(())
        }
        Command::HomotopyTrace { body, steps } => homotopy_trace(&cfg, &load_body(body)?, steps, out),
        Command::PairSum { left, right } => {
            let pair = BodyPair::new(load_body(left)?, load_body(right)?)?;
            let grid = cfg.grid(pair.dim())?;
            let report = maehara_check(&pair, &grid, cfg.tol_rel)?;
            if csv {
                writeln!(out, "d,sum_min,sum_max,sum_mean,passed")?;
                let w = &report.sum_width;
                writeln!(out, "{},{},{},{},{}", report.d, w.min_width, w.max_width, w.mean_width, report.passed)?;
            } else {
                emit_json(out, &report)?;
            }
            if !report.passed {
                return Err(Failure::check("Y + Z does not have constant width 2d"));
            }
            Ok(())
        }
        Command::Dim1(args) => dim1(&args, csv, out),
    }
}

fn homotopy_trace(cfg: &RunConfig, a: &Body, steps: usize, out: &mut dyn Write) -> Result<(), Failure> {
    if steps < 2 {
        return Err(Failure::usage("--steps must be at least 2"));
    }
    let grid = cfg.grid(a.dim())?;
    let fiber = eta(a, &grid, cfg.tol_rel)?;
    let ball = fiber_ball(&fiber)?;
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let h = eta_fiber_homotopy(a, t, &fiber, &grid, cfg.tol_rel)?;
        let report = width_report(&h, &grid)?;
        let center = chebyshev(&h, &grid, &ChebyshevOptions::default())?.center;
        rows.push((t, report.mean_width, report.spread, center, hausdorff(&h, &ball, &grid)?));
    }
    if cfg.output_format == Format::Csv {
        let coords: Vec<String> = (0..a.dim()).map(|i| format!("center_{i}")).collect();
        writeln!(out, "t,width_mean,width_spread,{},hausdorff_to_ball", coords.join(","))?;
        for (t, mean, spread, center, dist) in rows {
            let c: Vec<String> = center.iter().map(f64::to_string).collect();
            writeln!(out, "{t},{mean},{spread},{},{dist}", c.join(","))?;
        }
    } else {
        let items: Vec<Value> = rows
            .into_iter()
            .map(|(t, mean, spread, center, dist)| {
                serde_json::json!({
                    "t": t,
                    "width_mean": mean,
                    "width_spread": spread,
                    "center": center,
                    "hausdorff_to_ball": dist,
                })
            })
            .collect();
        emit_json(out, items)?;
    }
    Ok(())
}

fn pair_of(values: &Option<Vec<f64>>, flag: &str) -> Result<(f64, f64), Failure> {
    match values.as_deref() {
        Some([a, b]) => Ok((*a, *b)),
        _ => Err(Failure::usage(format!("{flag} is required"))),
    }
}

fn dim1(args: &Dim1Args, csv: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let value = if args.forward {
        let (lo, hi) = pair_of(&args.interval, "--interval")?;
        let first = Interval1D::new(lo, hi)?;
        match &args.second {
            None => {
                let (d, mid) = cw1_forward(first);
                serde_json::json!({"d": d, "mid": mid})
            }
            Some(_) => {
                let (v, z) = pair_of(&args.second, "--second")?;
                let p = crw1_forward(first, Interval1D::new(v, z)?)?;
                serde_json::json!({"d": p.d, "a": p.a, "p": p.p})
            }
        }
    } else if let Some(params) = args.params.as_deref() {
        let &[d, a, p] = params else {
            return Err(Failure::usage("--params takes D A P"));
        };
        let (first, second) = crw1_inverse(PairParams1D { d, a, p })?;
        serde_json::json!({"first": [first.lo, first.hi], "second": [second.lo, second.hi]})
    } else {
        let (d, mid) = pair_of(&args.point, "--point")?;
        let i = cw1_inverse(d, mid)?;
        serde_json::json!({"lo": i.lo, "hi": i.hi})
    };
    if csv {
        let value = normalize(value);
        let obj = value.as_object().expect("object");
        let mut header = Vec::new();
        let mut row = Vec::new();
        for (k, v) in obj {
            match v {
                Value::Array(items) => {
                    for (i, x) in items.iter().enumerate() {
                        header.push(format!("{k}_{i}"));
                        row.push(x.to_string());
                    }
                }
                other => {
                    header.push(k.clone());
                    row.push(other.to_string());
                }
            }
        }
        writeln!(out, "{}\n{}", header.join(","), row.join(","))?;
    } else {
        emit_json(out, value)?;
    }
    Ok(())
}
