//! Command-line front end for `tropmirror`.
//!
//! [`run`] parses an argument vector and returns the exit code together with
//! the text destined for stdout and stderr, so the binary and the tests share
//! one code path. Output never depends on the clock or on hash ordering.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use tropmirror::mirror::{parse_base_point, parse_truncation, DEFAULT_TRUNCATION};
use tropmirror::monodromy::edge_covectors;
use tropmirror::{
    build_cut_presentation, build_dual_graph, dual_subdivision, focus_focus_demo, is_smooth,
    normalize_presentation, presentation, render, validate, AnalyticSeries, ChargeInput,
    CorrectionMap, EdgeId, Error, LatticeVec, Loop, Rational, RationalPoint, RenderFormat,
    TropicalDiagram,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Set to any value to disable ANSI colors.
pub const NO_COLOR_ENV: &str = "TROPMIRROR_NO_COLOR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tropmirror", version, about = "Mirror data for toric Calabi-Yau diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the tropical axioms and smoothness of a diagram.
    Validate(DiagramArgs),
    /// Dual subdivision, dual graph embedding and edge covectors.
    Dual {
        #[command(flatten)]
        input: DiagramArgs,
        #[command(flatten)]
        gauge: GaugeArgs,
        /// Print JSON (the default).
        #[arg(long, conflicts_with = "svg")]
        json: bool,
        /// Print an SVG picture of the diagram over its dual.
        #[arg(long)]
        svg: bool,
    },
    /// Print the diagram (typically built from charges) as diagram JSON.
    Web(DiagramArgs),
    /// Mirror presentation x*y = g as JSON.
    Mirror {
        #[command(flatten)]
        input: DiagramArgs,
        /// Correction terms c_α as JSON.
        #[arg(long)]
        corrections: Option<PathBuf>,
        /// Base point "p/q,p/q" (defaults to the first vertex).
        #[arg(long)]
        base_point: Option<String>,
        /// Truncation level of the Novikov coefficients.
        #[arg(short = 'E', value_name = "RATIONAL")]
        truncation: Option<String>,
        /// Skip the normalization that fixes the root at the origin.
        #[arg(long)]
        raw: bool,
    },
    /// Parallel transport of a covector along a polyline in the base.
    Transport {
        #[command(flatten)]
        input: DiagramArgs,
        /// JSON polyline: a list of points, or {"points": [...], "tau": {"e0": "1"}}.
        #[arg(long)]
        path: PathBuf,
        /// Covector coordinates "a,b,c" in the basis (η…, g₀).
        #[arg(long)]
        class: String,
    },
    /// Wall crossing around a single focus-focus point.
    WallcrossDemo {
        #[arg(short = 'E', value_name = "RATIONAL")]
        truncation: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an analytic series at a point of its domain.
    Eval {
        series: PathBuf,
        /// Point "p/q,p/q".
        #[arg(long)]
        point: String,
    },
    /// Draw a diagram.
    Render {
        #[command(flatten)]
        input: DiagramArgs,
        #[command(flatten)]
        gauge: GaugeArgs,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Dot,
}

#[derive(Debug, Args)]
struct DiagramArgs {
    /// Diagram or charge JSON file.
    #[arg(required_unless_present = "charges")]
    file: Option<PathBuf>,
    /// Build the diagram from a charge file.
    #[arg(long, conflicts_with = "file")]
    charges: Option<PathBuf>,
    /// Accept heights that give a non-smooth subdivision.
    #[arg(long)]
    allow_singular: bool,
}

#[derive(Debug, Args)]
struct GaugeArgs {
    /// Dual vertex "a,b" to place at the origin.
    #[arg(long)]
    root_face: Option<String>,
    /// Use the reflected embedding α ↦ -α.
    #[arg(long)]
    negate: bool,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

/// Runs without color; the binary decides color from the terminal.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_color(argv, false)
}

pub fn run_with_color<I, S>(argv: I, color: bool) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(cli.command, color) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("{}: {msg}\n", paint("usage error", color)),
        },
        Err(Failure::Domain(msg)) => Outcome {
            code: EXIT_FAILURE,
            stdout: String::new(),
            stderr: format!("{}: {msg}\n", paint("error", color)),
        },
    }
}

fn paint(s: &str, color: bool) -> String {
    if color {
        format!("\x1b[31m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn dispatch(cmd: Command, color: bool) -> CmdResult {
    match cmd {
        Command::Validate(input) => cmd_validate(&input),
        Command::Dual { input, gauge, svg, .. } => cmd_dual(&input, &gauge, svg),
        Command::Web(input) => Ok(Outcome::ok(load_diagram(&input)?.to_json_string() + "\n")),
        Command::Mirror { input, corrections, base_point, truncation, raw } => {
            cmd_mirror(&input, corrections.as_deref(), base_point.as_deref(), truncation.as_deref(), raw)
        }
        Command::Transport { input, path, class } => cmd_transport(&input, &path, &class),
        Command::WallcrossDemo { truncation, json } => cmd_demo(truncation.as_deref(), json, color),
        Command::Eval { series, point } => cmd_eval(&series, &point),
        Command::Render { input, gauge, format } => cmd_render(&input, &gauge, format),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_diagram(args: &DiagramArgs) -> std::result::Result<TropicalDiagram, Failure> {
    let (path, forced) = match (&args.charges, &args.file) {
        (Some(p), _) => (p, true),
        (None, Some(p)) => (p, false),
        (None, None) => return Err(Failure::Usage("no input file".into())),
    };
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    if forced || value.get("charges").is_some() {
        let input: ChargeInput = serde_json::from_value(value).map_err(|e| Failure::Domain(e.to_string()))?;
        Ok(input.to_diagram(args.allow_singular)?)
    } else {
        Ok(TropicalDiagram::from_json_str(&text)?)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn parse_lattice(s: &str) -> std::result::Result<LatticeVec, Failure> {
    s.split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(LatticeVec::new)
        .map_err(|_| Failure::Usage(format!("expected integers \"a,b,...\", got {s:?}")))
}

fn parse_e(s: Option<&str>) -> std::result::Result<Rational, Failure> {
    match s {
        None => Ok(tropmirror::int(DEFAULT_TRUNCATION)),
        Some(s) => parse_truncation(s).map_err(|e| Failure::Usage(e.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateJson {
    pub trivalent: bool,
    pub balanced: bool,
    pub primitive_directions: bool,
    pub connected: bool,
    /// `None` when the axioms already fail.
    pub smooth: Option<bool>,
    pub failures: Vec<String>,
}

fn cmd_validate(input: &DiagramArgs) -> CmdResult {
    let diag = load_diagram(input)?;
    let report = validate(&diag);
    let mut failures = report.failures.clone();
    let smooth = if report.is_valid() {
        match is_smooth(&diag) {
            Ok(s) => Some(s),
            Err(e) => {
                failures.push(format!("smooth: {e}"));
                Some(false)
            }
        }
    } else {
        None
    };
    let out = ValidateJson {
        trivalent: report.trivalent,
        balanced: report.balanced,
        primitive_directions: report.primitive_directions,
        connected: report.connected,
        smooth,
        failures,
    };
    let code = if report.is_valid() && smooth == Some(true) { EXIT_OK } else { EXIT_FAILURE };
    Ok(Outcome { code, stdout: to_json(&out), stderr: String::new() })
}

fn gauged_dual(
    diag: &TropicalDiagram,
    gauge: &GaugeArgs,
) -> std::result::Result<tropmirror::DualSubdivision, Failure> {
    let mut dual = dual_subdivision(diag)?;
    if gauge.negate {
        dual = dual.negated();
    }
    if let Some(face) = &gauge.root_face {
        dual = dual.rerooted(&parse_lattice(face)?)?;
    }
    Ok(dual)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualOutputJson {
    pub dual: tropmirror::tropical::DualJson,
    pub embedding: tropmirror::monodromy::EmbeddingJson,
    pub covectors: BTreeMap<String, Vec<i64>>,
    pub smooth: bool,
}

fn cmd_dual(input: &DiagramArgs, gauge: &GaugeArgs, svg: bool) -> CmdResult {
    let diag = load_diagram(input)?;
    let dual = gauged_dual(&diag, gauge)?;
    if svg {
        return Ok(Outcome::ok(render(&diag, Some(&dual), RenderFormat::Svg)?));
    }
    let covectors = edge_covectors(&diag)?
        .into_iter()
        .map(|(e, c)| (e.to_string(), c.coords().to_vec()))
        .collect();
    let out = DualOutputJson {
        dual: dual.to_json(),
        embedding: build_dual_graph(&diag)?.to_json(),
        covectors,
        smooth: is_smooth(&diag)?,
    };
    Ok(Outcome::ok(to_json(&out)))
}

fn cmd_render(input: &DiagramArgs, gauge: &GaugeArgs, format: Format) -> CmdResult {
    let diag = load_diagram(input)?;
    let fmt = match format {
        Format::Json => return Ok(Outcome::ok(diag.to_json_string() + "\n")),
        Format::Svg => RenderFormat::Svg,
        Format::Dot => RenderFormat::Dot,
    };
    // the dual is drawn when it exists; a diagram without one is still drawable
    let dual = gauged_dual(&diag, gauge).ok();
    Ok(Outcome::ok(render(&diag, dual.as_ref(), fmt)?))
}

fn cmd_mirror(
    input: &DiagramArgs,
    corrections: Option<&Path>,
    base_point: Option<&str>,
    truncation: Option<&str>,
    raw: bool,
) -> CmdResult {
    let e = parse_e(truncation)?;
    let b = base_point
        .map(|s| parse_base_point(s).map_err(|e| Failure::Usage(e.to_string())))
        .transpose()?;
    let diag = load_diagram(input)?;
    let corr = match corrections {
        Some(p) => CorrectionMap::from_json_str(&read(p)?)?,
        None => CorrectionMap::empty(),
    };
    let mut p = presentation(&diag, b.as_ref(), &corr, &e)?;
    if !raw {
        p = normalize_presentation(&p);
    }
    Ok(Outcome::ok(to_json(&p.to_json())))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PathFile {
    Points(Vec<Vec<String>>),
    Full {
        points: Vec<Vec<String>>,
        #[serde(default)]
        tau: BTreeMap<String, String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportJson {
    pub crossings: String,
    pub chambers: Vec<String>,
    pub class: Vec<i64>,
}

fn cmd_transport(input: &DiagramArgs, path: &Path, class: &str) -> CmdResult {
    let g = parse_lattice(class)?;
    let diag = load_diagram(input)?;
    let file: PathFile =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let (points, tau) = match file {
        PathFile::Points(p) => (p, BTreeMap::new()),
        PathFile::Full { points, tau } => (points, tau),
    };
    let points = points
        .iter()
        .map(|p| RationalPoint::parse(&p.iter().map(String::as_str).collect::<Vec<_>>()))
        .collect::<tropmirror::Result<Vec<_>>>()?;
    let tau = tau
        .iter()
        .map(|(k, v)| Ok((k.parse::<EdgeId>()?, tropmirror::parse_rational(v)?)))
        .collect::<tropmirror::Result<BTreeMap<_, _>>>()?;
    let cuts = build_cut_presentation(&diag, &tau)?;
    let crossings = cuts.path_crossings(&points)?;
    let chambers = points
        .iter()
        .map(|p| cuts.chamber_of(p).map(|c| c.to_string()))
        .collect::<tropmirror::Result<Vec<_>>>()?;
    let out = TransportJson {
        crossings: Loop::new(crossings).to_string(),
        chambers,
        class: cuts.transport_covector(&points, &g)?.coords().to_vec(),
    };
    Ok(Outcome::ok(to_json(&out)))
}

fn cmd_demo(truncation: Option<&str>, json: bool, color: bool) -> CmdResult {
    let e = parse_e(truncation)?;
    let report = focus_focus_demo(&e)?;
    let code = if report.passed { EXIT_OK } else { EXIT_FAILURE };
    let stdout = if json {
        to_json(&report.to_json())
    } else {
        let text = report.to_string();
        match (color, report.passed) {
            (false, _) => text,
            (true, true) => text.replace("\nPASS\n", "\n\x1b[32mPASS\x1b[0m\n"),
            (true, false) => text.replace("\nFAIL\n", "\n\x1b[31mFAIL\x1b[0m\n"),
        }
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

fn cmd_eval(series: &Path, point: &str) -> CmdResult {
    let x = RationalPoint::parse_csv(point).map_err(|e| Failure::Usage(e.to_string()))?;
    let s = AnalyticSeries::from_json_str(&read(series)?)?;
    Ok(Outcome::ok(format!("{}\n", s.evaluate(&x)?)))
}
