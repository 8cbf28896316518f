//! The `qdom` command line.
//!
//! Exit status: 0 on success, 1 for invalid input (bad flags, config or
//! parameters, unwritable output), 2 when a computation fails on valid
//! input (no convergence, insufficient resolution, bracket failure).

pub mod config;
pub mod svg;

use crate::classical::{
    ball_volume_4d, karp_quadrature_4d, limacon_quadrature_2d, oval_quadrature_weights, pk_moments,
    ClassicalShape,
};
use crate::conformal::{BoundaryCurve, MapParams, PaperMap};
use crate::continuation::{eval_F, ladder_word, monodromy, xi_form, xi_form_elliptic, Loop};
use crate::elliptic::{carlson_pi, ellip_e, ellip_k};
use crate::error::Error;
use crate::growth::{cusp_scan, evolve, find_cusp_parameter, pk_evolve, GrowthState, PKState};
use crate::moments::{extract_quadrature_laurent, quadrature_of_params, QuadratureData};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{ConfigError, ConfigFile, Sweep};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QDOM_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "qdom",
    version,
    about = "Quadrature domains in R⁴ from a contour-integral conformal map",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (each subcommand has its own default)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file; `-` for stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Directory for output files when --out is not given
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,

    /// Flat `key = value` file; flags take precedence over it
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Parameter sweep `key=start:stop:step`, run in parallel
    #[arg(long, global = true)]
    sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the boundary f(e^{iθ}) of the map family
    #[command(
        after_help = "CSV columns: a, C, j, theta, re, im, abs_df (|f'(e^{iθ})|).\n\
        With --format svg and a file output, the CSV is written next to the SVG."
    )]
    Trace(MapArgs),
    /// Quadrature coefficients by boundary moments and by the Laurent route
    #[command(
        after_help = "CSV columns: a, C, a0, a1, laurent_a0, laurent_a1, max_residual, is_quadrature."
    )]
    Quadrature(MapArgs),
    /// Continue F around loops at the base point and report the sheet reached
    #[command(after_help = "CSV columns: step, loop, m, s (sheet after each loop).")]
    Monodromy(MonodromyArgs),
    /// Laplacian-growth trajectory with a point source at the origin
    #[command(
        after_help = "CSV columns (r4): t, a, C, a0, a1, min_abs_df, cusp_flag.\n\
        CSV columns (pk): t, a, b, M0, M1, gap, cusp_flag."
    )]
    Growth(GrowthArgs),
    /// Scan min|f'| over a and bisect for the loss of univalence
    #[command(after_help = "CSV columns: a, C, min_abs_df, simple.")]
    Cusp(CuspArgs),
    /// Classical shapes: Neumann oval, limaçon, cardioid, ball
    #[command(after_help = "CSV columns: shape, param, j, theta, re, im.")]
    Examples(ExamplesArgs),
    /// Complete elliptic integrals, and the closed forms of F at a point
    #[command(after_help = "CSV columns: quantity, value.")]
    Elliptic(EllipticArgs),
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Branch-point parameter, 0 <= a < 1
    #[arg(long)]
    a: Option<f64>,
    /// Scale factor C > 0
    #[arg(long = "c")]
    c: Option<f64>,
    /// Boundary samples, a power of two in [256, 65536]
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Args)]
struct MonodromyArgs {
    /// Branch-point parameter, 0 < a < 1
    #[arg(long)]
    a: Option<f64>,
    /// Comma-separated loop tokens, e.g. g1,g2,g1
    #[arg(long, conflicts_with = "ladder")]
    loops: Option<String>,
    /// Ladder word g1 (g2 g1)^k
    #[arg(long)]
    ladder: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// The R⁴ map family
    R4,
    /// The planar cardioid b z + a z²
    Pk,
}

#[derive(Debug, Args)]
struct GrowthArgs {
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Initial a (map parameter, or cardioid quadratic coefficient)
    #[arg(long)]
    a: Option<f64>,
    /// Initial scale C
    #[arg(long = "c")]
    c: Option<f64>,
    /// Cardioid linear coefficient
    #[arg(long)]
    b: Option<f64>,
    /// Source strength; positive injects, negative sucks
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Time step
    #[arg(long)]
    dt: Option<f64>,
    /// Number of steps
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Debug, Args)]
struct CuspArgs {
    /// Scale factor C > 0
    #[arg(long = "c")]
    c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeKind {
    Neumann,
    Limacon,
    Cardioid,
    Ball,
}

#[derive(Debug, Args)]
struct ExamplesArgs {
    #[arg(value_enum)]
    shape: ShapeKind,
    /// Oval a, limaçon σ, cardioid a, or ball radius
    #[arg(long)]
    param: Option<f64>,
    /// Cardioid linear coefficient
    #[arg(long)]
    b: Option<f64>,
    /// Boundary samples
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Debug, Args)]
struct EllipticArgs {
    /// Characteristic n < 1
    #[arg(long, allow_negative_numbers = true)]
    n: Option<f64>,
    /// Parameter m < 1
    #[arg(long, allow_negative_numbers = true)]
    m: Option<f64>,
    /// Map parameter for comparing the forms of F
    #[arg(long)]
    a: Option<f64>,
    /// Real evaluation point for F
    #[arg(long, allow_negative_numbers = true)]
    w: Option<f64>,
}

/// Failures of a CLI run.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config {0}")]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Numeric(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Settings {
    cfg: Option<ConfigFile>,
}

impl Settings {
    fn pick<T>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(cfg) = &self.cfg {
            if let Some(v) = cfg.get::<T>(key)? {
                return Ok(v);
            }
        }
        Ok(default)
    }

    fn pick_opt<T>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match &self.cfg {
            Some(cfg) => Ok(cfg.get::<T>(key)?),
            None => Ok(None),
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "a", "c", "b", "samples", "format", "out", "sweep", "q", "dt", "steps", "model", "loops",
    "ladder", "param", "n", "m", "w",
];

fn check_samples(n: usize) -> CliResult<usize> {
    if !n.is_power_of_two() || !(256..=65536).contains(&n) {
        return Err(CliError::Usage(format!(
            "--samples {n} must be a power of two in [256, 65536]"
        )));
    }
    Ok(n)
}

fn parse_enum<T: ValueEnum>(s: &str, what: &str) -> CliResult<T> {
    T::from_str(s, true).map_err(|_| CliError::Usage(format!("unknown {what} `{s}`")))
}

/// Where the artifact goes: stdout, an explicit file, or `<dir>/<name>.<ext>`.
enum Sink {
    Stdout,
    File(PathBuf),
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

struct Output {
    text: String,
    /// Extra artifacts written next to a file output: (extension, content).
    siblings: Vec<(&'static str, String)>,
}

impl Output {
    fn new(text: String) -> Self {
        Self {
            text,
            siblings: Vec::new(),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable record");
    s.push('\n');
    s
}

fn cplx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn expect_format(format: Format, allowed: &[Format], sub: &str) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "`{sub}` does not support --format {}",
            format.ext()
        )))
    }
}

fn sweep_values(sweep: &Option<Sweep>, allowed: &[&str], sub: &str) -> CliResult<()> {
    if let Some(s) = sweep {
        if !allowed.contains(&s.key.as_str()) {
            return Err(CliError::Usage(format!(
                "`{sub}` cannot sweep `{}` (allowed: {})",
                s.key,
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn map_points(base: MapParams, sweep: &Option<Sweep>) -> CliResult<Vec<MapParams>> {
    match sweep {
        None => Ok(vec![base]),
        Some(s) => s
            .values
            .iter()
            .map(|&v| {
                let (a, c) = if s.key == "a" {
                    (v, base.c)
                } else {
                    (base.a, v)
                };
                MapParams::new(a, c).map_err(CliError::from)
            })
            .collect(),
    }
}

fn curve_label(p: &MapParams) -> String {
    format!("a = {}, C = {}", p.a, p.c)
}

fn trace_csv(curves: &[BoundaryCurve]) -> String {
    let mut s = String::from("a,C,j,theta,re,im,abs_df\n");
    for curve in curves {
        let p = curve.params.expect("family curve");
        for (j, (z, d)) in curve.zeta.iter().zip(&curve.dfd).enumerate() {
            let _ = writeln!(
                s,
                "{},{},{j},{},{},{},{}",
                p.a,
                p.c,
                curve.theta(j),
                z.re,
                z.im,
                d.norm()
            );
        }
    }
    s
}

fn run_trace(
    args: MapArgs,
    st: &Settings,
    format: Format,
    sweep: &Option<Sweep>,
) -> CliResult<Output> {
    expect_format(format, &[Format::Csv, Format::Json, Format::Svg], "trace")?;
    sweep_values(sweep, &["a", "c"], "trace")?;
    let base = MapParams::new(st.pick(args.a, "a", 0.3)?, st.pick(args.c, "c", 1.0)?)?;
    let m = check_samples(st.pick(args.samples, "samples", 4096)?)?;
    let params = map_points(base, sweep)?;
    let curves: Vec<BoundaryCurve> = params
        .par_iter()
        .map(|p| Ok(PaperMap::new(p)?.boundary(m)))
        .collect::<crate::Result<_>>()?;
    Ok(match format {
        Format::Csv => Output::new(trace_csv(&curves)),
        Format::Json => {
            let records: Vec<_> = curves
                .iter()
                .map(|c| {
                    json!({
                        "params": c.params,
                        "m": c.m,
                        "simple": c.simple,
                        "min_abs_df": c.min_abs_df,
                        "max_radius": c.max_radius(),
                        "zeta": c.zeta.iter().map(|z| cplx(*z)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Output::new(to_json(&records))
        }
        Format::Svg => {
            let labels: Vec<String> = params.iter().map(curve_label).collect();
            let svg_curves: Vec<svg::Curve> = curves
                .iter()
                .zip(labels)
                .map(|(c, label)| svg::Curve {
                    label,
                    points: &c.zeta,
                })
                .collect();
            Output {
                text: svg::render(&svg_curves, "boundary of the map family"),
                siblings: vec![("csv", trace_csv(&curves))],
            }
        }
    })
}

#[derive(Debug, Serialize)]
struct QuadratureReport {
    #[serde(flatten)]
    direct: QuadratureData,
    laurent_a0: f64,
    laurent_a1: f64,
    /// Largest relative difference of (a0, a1) between the two routes.
    dual_path_rel_diff: f64,
}

fn quadrature_report(p: &MapParams) -> crate::Result<QuadratureReport> {
    let direct = quadrature_of_params(p)?;
    let laurent = extract_quadrature_laurent(&PaperMap::new(p)?, 1, 8)?;
    let d0 = (direct.a0 - laurent.a0).abs() / direct.a0;
    // a1 vanishes for the ball; measure it against a0 there.
    let d1 = (direct.a1 - laurent.a1).abs() / direct.a1.abs().max(1e-12 * direct.a0);
    Ok(QuadratureReport {
        laurent_a0: laurent.a0,
        laurent_a1: laurent.a1,
        dual_path_rel_diff: d0.max(d1),
        direct,
    })
}

fn run_quadrature(
    args: MapArgs,
    st: &Settings,
    format: Format,
    sweep: &Option<Sweep>,
) -> CliResult<Output> {
    expect_format(format, &[Format::Csv, Format::Json], "quadrature")?;
    sweep_values(sweep, &["a", "c"], "quadrature")?;
    if args.samples.is_some() {
        return Err(CliError::Usage(
            "`quadrature` chooses its own sample count; drop --samples".into(),
        ));
    }
    let base = MapParams::new(st.pick(args.a, "a", 0.3)?, st.pick(args.c, "c", 1.0)?)?;
    let params = map_points(base, sweep)?;
    let reports: Vec<QuadratureReport> = params
        .par_iter()
        .map(quadrature_report)
        .collect::<crate::Result<_>>()?;
    Ok(Output::new(match format {
        Format::Json if sweep.is_none() => to_json(&reports[0]),
        Format::Json => to_json(&reports),
        _ => {
            let mut s =
                String::from("a,C,a0,a1,laurent_a0,laurent_a1,max_residual,is_quadrature\n");
            for (p, r) in params.iter().zip(&reports) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    p.a,
                    p.c,
                    r.direct.a0,
                    r.direct.a1,
                    r.laurent_a0,
                    r.laurent_a1,
                    r.direct.max_residual(),
                    r.direct.is_quadrature
                );
            }
            s
        }
    }))
}

fn run_monodromy(
    args: MonodromyArgs,
    st: &Settings,
    format: Format,
    sweep: &Option<Sweep>,
) -> CliResult<Output> {
    expect_format(format, &[Format::Csv, Format::Json], "monodromy")?;
    sweep_values(sweep, &[], "monodromy")?;
    let a = st.pick(args.a, "a", 0.5)?;
    let word: Vec<Loop> = match st.pick_opt(args.loops, "loops")? {
        Some(text) => text
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.parse::<Loop>())
            .collect::<crate::Result<_>>()?,
        None => ladder_word(st.pick(args.ladder, "ladder", 1)?),
    };
    if word.is_empty() {
        return Err(CliError::Usage("empty loop word".into()));
    }
    let r = monodromy(a, &word)?;
    Ok(Output::new(match format {
        Format::Json => to_json(&json!({
            "a": r.a,
            "base_point": cplx(r.base_point),
            "loops": r.loops,
            "sheets_visited": r.sheets_visited,
            "f0": cplx(r.f0),
            "sqrt_g": cplx(r.sqrt_g),
            "value": cplx(r.value),
            "final_offset_multiple_of_sqrt_g": cplx(r.offset_multiple),
        })),
        _ => {
            let mut s = String::from("step,loop,m,s\n");
            for (i, sheet) in r.sheets_visited.iter().enumerate() {
                let name = if i == 0 {
                    "start"
                } else {
                    match r.loops[i - 1] {
                        Loop::G1 => "g1",
                        Loop::G2 => "g2",
                    }
                };
                let _ = writeln!(s, "{i},{name},{},{}", sheet.m, sheet.s);
            }
            s
        }
    }))
}

fn snapshots<T>(states: &[T], count: usize) -> Vec<&T> {
    let stride = states.len().div_ceil(count).max(1);
    let mut picked: Vec<&T> = states.iter().step_by(stride).collect();
    if states.len() > 1 && !(states.len() - 1).is_multiple_of(stride) {
        picked.extend(states.last());
    }
    picked
}

fn run_growth(
    args: GrowthArgs,
    st: &Settings,
    format: Format,
    sweep: &Option<Sweep>,
) -> CliResult<Output> {
    sweep_values(sweep, &[], "growth")?;
    let model = match (args.model, st.pick_opt::<String>(None, "model")?) {
        (Some(m), _) => m,
        (None, Some(s)) => parse_enum(&s, "model")?,
        (None, None) => Model::R4,
    };
    let q = st.pick(args.q, "q", -0.25)?;
    let dt = st.pick(args.dt, "dt", 0.025)?;
    let steps = st.pick(args.steps, "steps", 40)?;
    match model {
        Model::R4 => {
            let p = MapParams::new(st.pick(args.a, "a", 0.5)?, st.pick(args.c, "c", 1.0)?)?;
            let tr = evolve(GrowthState::at(0.0, p)?, q, dt, steps)?;
            Ok(Output::new(match format {
                Format::Json => to_json(&tr),
                Format::Csv => {
                    let mut s = String::from("t,a,C,a0,a1,min_abs_df,cusp_flag\n");
                    for x in &tr.states {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            x.t,
                            x.params.a,
                            x.params.c,
                            x.a0,
                            x.a1,
                            x.min_abs_df,
                            u8::from(x.cusp)
                        );
                    }
                    s
                }
                Format::Svg => {
                    let picked = snapshots(&tr.states, 9);
                    let curves: Vec<(String, BoundaryCurve)> = picked
                        .iter()
                        .map(|x| {
                            Ok((
                                format!("t = {}", x.t),
                                PaperMap::new(&x.params)?.boundary(1024),
                            ))
                        })
                        .collect::<crate::Result<_>>()?;
                    let svg_curves: Vec<svg::Curve> = curves
                        .iter()
                        .map(|(label, c)| svg::Curve {
                            label: label.clone(),
                            points: &c.zeta,
                        })
                        .collect();
                    svg::render(&svg_curves, "Laplacian growth in R⁴, axial profile")
                }
            }))
        }
        Model::Pk => {
            let init = PKState::new(0.0, st.pick(args.a, "a", 0.2)?, st.pick(args.b, "b", 1.0)?)?;
            let tr = pk_evolve(init, q, dt, steps)?;
            Ok(Output::new(match format {
                Format::Json => to_json(&tr),
                Format::Csv => {
                    let mut s = String::from("t,a,b,M0,M1,gap,cusp_flag\n");
                    let n = tr.states.len();
                    for (i, x) in tr.states.iter().enumerate() {
                        let flag = u8::from(tr.cusp && i + 1 == n);
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{flag}",
                            x.t,
                            x.a,
                            x.b,
                            x.m0,
                            x.m1,
                            x.gap()
                        );
                    }
                    s
                }
                Format::Svg => {
                    let picked = snapshots(&tr.states, 9);
                    let curves: Vec<(String, BoundaryCurve)> = picked
                        .iter()
                        .map(|x| {
                            // Built directly: the terminal cusp state fails validation.
                            let map = crate::classical::PkCardioid { a: x.a, b: x.b };
                            (format!("t = {}", x.t), BoundaryCurve::from_map(&map, 1024))
                        })
                        .collect();
                    let svg_curves: Vec<svg::Curve> = curves
                        .iter()
                        .map(|(label, c)| svg::Curve {
                            label: label.clone(),
                            points: &c.zeta,
                        })
                        .collect();
                    svg::render(&svg_curves, "cardioid Laplacian growth")
                }
            }))
        }
    }
}

fn run_cusp(
    args: CuspArgs,
    st: &Settings,
    format: Format,
    sweep: &Option<Sweep>,
) -> CliResult<(Output, Option<CliError>)> {
    expect_format(format, &[Format::Csv, Format::Json], "cusp")?;
    sweep_values(sweep, &["a"], "cusp")?;
    let c = st.pick(args.c, "c", 1.0)?;
    MapParams::new(0.5, c)?;
    let grid: Vec<f64> = match sweep {
        Some(s) => s.values.clone(),
        None => (0..=49).map(|i| 0.5 + 0.01 * i as f64).collect(),
    };
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&a| cusp_scan(c, &[a]).map(|mut v| v.remove(0)))
        .collect::<crate::Result<_>>()?;
    let found = find_cusp_parameter(c);
    let (a_star, failure) = match found {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e)),
    };
    let text = match format {
        Format::Json => to_json(&json!({
            "C": c,
            "scan": rows,
            "a_star": a_star,
            "error": failure.as_ref().map(|e| e.to_string()),
        })),
        _ => {
            let mut s = String::from("a,C,min_abs_df,simple\n");
            for r in &rows {
                let _ = writeln!(s, "{},{c},{},{}", r.a, r.min_abs_df, r.simple);
            }
            s
        }
    };
    Ok((Output::new(text), failure.map(CliError::from)))
}

fn shape_of(kind: ShapeKind, param: f64, b: f64) -> ClassicalShape {
    match kind {
        ShapeKind::Neumann => ClassicalShape::NeumannOval { a: param },
        ShapeKind::Limacon => ClassicalShape::Limacon { sigma: param },
        ShapeKind::Cardioid => ClassicalShape::PkCardioid { a: param, b },
        ShapeKind::Ball => ClassicalShape::Ball { r: param, n: 4 },
    }
}

fn shape_facts(shape: &ClassicalShape) -> crate::Result<serde_json::Value> {
    Ok(match *shape {
        ClassicalShape::NeumannOval { a } => {
            let (wp, wm) = oval_quadrature_weights(a)?;
            json!({"shape": shape, "weights": {"at_plus_one": wp, "at_minus_one": wm}, "area": wp + wm})
        }
        ClassicalShape::Limacon { sigma } => {
            let (q0, q1) = limacon_quadrature_2d(sigma)?;
            let (a0, a1, a2) = karp_quadrature_4d(sigma)?;
            json!({"shape": shape, "planar": {"q0": q0, "q1": q1}, "rotated": {"a0": a0, "a1": a1, "a2": a2}})
        }
        ClassicalShape::PkCardioid { a, b } => {
            let (m0, m1) = pk_moments(a, b);
            json!({"shape": shape, "M0": m0, "M1": m1})
        }
        ClassicalShape::Ball { r, .. } => json!({"shape": shape, "volume_4d": ball_volume_4d(r)}),
    })
}

fn run_examples(
    args: ExamplesArgs,
    st: &Settings,
    format: Format,
    sweep: &Option<Sweep>,
) -> CliResult<Output> {
    sweep_values(sweep, &["param"], "examples")?;
    let default = match args.shape {
        ShapeKind::Neumann => 1.0,
        ShapeKind::Limacon => 0.25,
        ShapeKind::Cardioid => 0.2,
        ShapeKind::Ball => 1.0,
    };
    let param = st.pick(args.param, "param", default)?;
    let b = st.pick(args.b, "b", 1.0)?;
    let m = check_samples(st.pick(args.samples, "samples", 1024)?)?;
    let values = sweep
        .as_ref()
        .map_or_else(|| vec![param], |s| s.values.clone());
    let shapes: Vec<ClassicalShape> = values.iter().map(|&v| shape_of(args.shape, v, b)).collect();
    for s in &shapes {
        s.validate()?;
    }
    let curves: Vec<BoundaryCurve> = shapes
        .par_iter()
        .map(|s| s.boundary(m))
        .collect::<crate::Result<_>>()?;
    let name = format!("{:?}", args.shape).to_ascii_lowercase();
    Ok(Output::new(match format {
        Format::Svg => {
            let svg_curves: Vec<svg::Curve> = curves
                .iter()
                .zip(&values)
                .map(|(c, v)| svg::Curve {
                    label: format!("{name} {v}"),
                    points: &c.zeta,
                })
                .collect();
            svg::render(&svg_curves, &name)
        }
        Format::Csv => {
            let mut s = String::from("shape,param,j,theta,re,im\n");
            for (c, v) in curves.iter().zip(&values) {
                for (j, z) in c.zeta.iter().enumerate() {
                    let _ = writeln!(s, "{name},{v},{j},{},{},{}", c.theta(j), z.re, z.im);
                }
            }
            s
        }
        Format::Json => {
            let facts: Vec<_> = shapes
                .iter()
                .map(shape_facts)
                .collect::<crate::Result<_>>()?;
            if facts.len() == 1 {
                to_json(&facts[0])
            } else {
                to_json(&facts)
            }
        }
    }))
}

fn run_elliptic(
    args: EllipticArgs,
    st: &Settings,
    format: Format,
    sweep: &Option<Sweep>,
) -> CliResult<Output> {
    expect_format(format, &[Format::Csv, Format::Json], "elliptic")?;
    sweep_values(sweep, &[], "elliptic")?;
    let n = st.pick(args.n, "n", 0.0)?;
    let m = st.pick(args.m, "m", 0.5)?;
    let mut rows: Vec<(&str, f64)> = vec![
        ("n", n),
        ("m", m),
        ("K", ellip_k(m)?),
        ("E", ellip_e(m)?),
        ("Pi", carlson_pi(n, m)?),
    ];
    let a = st.pick_opt(args.a, "a")?;
    let w = st.pick_opt(args.w, "w")?;
    if let (Some(a), Some(w)) = (a, w) {
        let wc = Complex64::new(w, 0.0);
        rows.push(("a", a));
        rows.push(("w", w));
        rows.push(("F_segment", eval_F(wc, a)?.re));
        rows.push(("F_xi", xi_form(wc, a)?.re));
        rows.push(("F_elliptic", xi_form_elliptic(w, a)?));
    } else if a.is_some() || w.is_some() {
        return Err(CliError::Usage("--a and --w must be given together".into()));
    }
    Ok(Output::new(match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            to_json(&map)
        }
        _ => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in rows {
                let _ = writeln!(s, "{k},{v}");
            }
            s
        }
    }))
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Trace(_) | Command::Growth(_) => Format::Csv,
        Command::Examples(_) => Format::Svg,
        _ => Format::Json,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Trace(_) => "trace",
        Command::Quadrature(_) => "quadrature",
        Command::Monodromy(_) => "monodromy",
        Command::Growth(_) => "growth",
        Command::Cusp(_) => "cusp",
        Command::Examples(_) => "examples",
        Command::Elliptic(_) => "elliptic",
    }
}

fn execute<W: Write>(cli: Cli, stdout: &mut W) -> CliResult<()> {
    let cfg = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    if let Some(cfg) = &cfg {
        if let Some((line, key)) = cfg.unknown_keys(CONFIG_KEYS).first() {
            return Err(CliError::Config(ConfigError {
                location: format!("{}:{line}", cfg.source()),
                message: format!("unknown key `{key}`"),
            }));
        }
    }
    let st = Settings { cfg };
    let format = match (cli.format, st.pick_opt::<String>(None, "format")?) {
        (Some(f), _) => f,
        (None, Some(s)) => parse_enum(&s, "format")?,
        (None, None) => default_format(&cli.command),
    };
    let sweep = st
        .pick_opt(cli.sweep, "sweep")?
        .map(|s| s.parse::<Sweep>().map_err(CliError::Usage))
        .transpose()?;
    let out = st.pick_opt(cli.out, "out")?;
    let name = command_name(&cli.command);

    let mut deferred = None;
    let output = match cli.command {
        Command::Trace(a) => run_trace(a, &st, format, &sweep)?,
        Command::Quadrature(a) => run_quadrature(a, &st, format, &sweep)?,
        Command::Monodromy(a) => run_monodromy(a, &st, format, &sweep)?,
        Command::Growth(a) => run_growth(a, &st, format, &sweep)?,
        Command::Cusp(a) => {
            let (o, e) = run_cusp(a, &st, format, &sweep)?;
            deferred = e;
            o
        }
        Command::Examples(a) => run_examples(a, &st, format, &sweep)?,
        Command::Elliptic(a) => run_elliptic(a, &st, format, &sweep)?,
    };

    let sink = match (out, cli.out_dir) {
        (Some(p), _) if p.as_os_str() == "-" => Sink::Stdout,
        (Some(p), _) => Sink::File(p),
        (None, Some(dir)) => Sink::File(dir.join(format!("{name}.{}", format.ext()))),
        (None, None) => Sink::Stdout,
    };
    match sink {
        Sink::Stdout => {
            stdout
                .write_all(output.text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?
        }
        Sink::File(path) => {
            write_file(&path, &output.text)?;
            for (ext, content) in &output.siblings {
                write_file(&path.with_extension(ext), content)?;
            }
        }
    }
    match deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Parses `args` and runs the command, writing artifacts to `stdout` or
/// files and diagnostics to `stderr`. Returns the process exit status.
pub fn run<I, T, W, E>(args: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 1,
                _ => 1,
            };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
