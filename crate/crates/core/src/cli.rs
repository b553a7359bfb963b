//! Command-line harness: argument and config parsing, command dispatch, report output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::carlen::carlen_residual;
use crate::entropy::{bound_gap, entropy_report, lieb_bound, normalized_p_norms, theorem2_bound, ExponentPair};
use crate::ode::{boundary_scan_on, el_residual, energy_diagnostic, problem_from_exponents, shoot, GridSpec};
use crate::search::{default_num_starts, minimize_wehrl, monotonicity_scan, random_state, random_state_in_stream};
use crate::search::{Parametrization, SearchOptions};
use crate::sphere::{build_quadrature, QuadratureRule};
use crate::spin::{make_state, SpinState};
use crate::Error;

/// Environment variable holding the default quadrature resolution, e.g. "64,128".
pub const QUADRATURE_ENV: &str = "WEHRL_QUADRATURE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::Precondition(_) => EXIT_USAGE,
            Error::NumericDomain { .. } | Error::IntegrationFailure { .. } => EXIT_NUMERIC,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Entropy,
    Bounds,
    VerifyNorms,
    Minimize,
    Carlen,
    Ode,
    Sweep,
}

impl Command {
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Entropy => &["coeffs"],
            Command::Bounds => &[],
            Command::VerifyNorms => &["p", "n_max", "samples"],
            Command::Minimize => &["starts", "iters", "parametrization"],
            Command::Carlen => &["q", "coeffs"],
            Command::Ode => &["p", "q", "b_el", "u0", "u0_range", "scan_points", "points"],
            Command::Sweep => &["p", "n_max", "samples"],
        }
    }
}

const COMMON_KEYS: [&str; 5] = ["twice_j", "quadrature", "seed", "format", "output"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub twice_j: usize,
    pub quadrature: (usize, usize),
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub coeffs: Option<Vec<Complex64>>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub n_max: u32,
    pub num_samples: usize,
    pub num_starts: usize,
    pub max_iters: usize,
    pub parametrization: Parametrization,
    pub b_el: f64,
    pub u0: Option<f64>,
    pub u0_range: Option<(f64, f64)>,
    pub scan_points: usize,
    pub grid_points: usize,
}

#[derive(Parser)]
#[command(name = "wehrl-lab", version, about = "Phase-space numerics for a single quantum spin")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Wehrl and Renyi-Wehrl entropies of a state, with the lower bounds.
    Entropy(Flags),
    /// Entropy lower bounds and their gap for 2j = 1..twice_j.
    Bounds(Flags),
    /// Random-state check of the lattice norm monotonicity.
    VerifyNorms(Flags),
    /// Multistart Wehrl entropy minimization.
    Minimize(Flags),
    /// Both sides of the gradient identity for one state.
    Carlen(Flags),
    /// Radial shooting, or a boundary scan with --u0-range.
    Ode(Flags),
    /// Norm-ratio sweep over lattice and off-lattice exponents.
    Sweep(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Plain "key = value" file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    twice_j: Option<String>,
    /// "n_polar,n_azimuth"
    #[arg(long)]
    quadrature: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    output: Option<String>,
    /// Polynomial coefficients c_0..c_2j; complex entries as "re:im".
    #[arg(long)]
    coeffs: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    starts: Option<String>,
    #[arg(long)]
    iters: Option<String>,
    /// coefficients or majorana
    #[arg(long)]
    parametrization: Option<String>,
    #[arg(long)]
    b_el: Option<String>,
    #[arg(long)]
    u0: Option<String>,
    /// "lo,hi"
    #[arg(long)]
    u0_range: Option<String>,
    #[arg(long)]
    scan_points: Option<String>,
    #[arg(long)]
    points: Option<String>,
}

impl Flags {
    fn given(self) -> (Option<PathBuf>, BTreeMap<String, String>) {
        let pairs = [
            ("twice_j", self.twice_j),
            ("quadrature", self.quadrature),
            ("seed", self.seed),
            ("format", self.format),
            ("output", self.output),
            ("coeffs", self.coeffs),
            ("p", self.p),
            ("q", self.q),
            ("n_max", self.n_max),
            ("samples", self.samples),
            ("starts", self.starts),
            ("iters", self.iters),
            ("parametrization", self.parametrization),
            ("b_el", self.b_el),
            ("u0", self.u0),
            ("u0_range", self.u0_range),
            ("scan_points", self.scan_points),
            ("points", self.points),
        ];
        let map = pairs.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect();
        (self.config, map)
    }
}

/// Parses "key = value" lines; blank lines and lines starting with '#' are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!("config line {}: expected key = value", i + 1)));
        };
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::usage(format!("cannot parse {key} = {v:?}")))
}

fn parse_pair<T: std::str::FromStr>(key: &str, v: &str) -> Result<(T, T), CliError> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::usage(format!("{key} expects two comma-separated values, got {v:?}")));
    }
    Ok((parse_num(key, parts[0])?, parse_num(key, parts[1])?))
}

fn parse_coeffs(v: &str) -> Result<Vec<Complex64>, CliError> {
    v.split(',')
        .map(|item| match item.split_once(':') {
            Some((re, im)) => Ok(Complex64::new(parse_num("coeffs", re)?, parse_num("coeffs", im)?)),
            None => Ok(Complex64::new(parse_num("coeffs", item)?, 0.0)),
        })
        .collect()
}

/// Builds a validated configuration from argv (program name first) and an optional
/// config file; a `--config` flag in argv is used when `config_file` is `None`.
pub fn parse_config(argv: &[String], config_file: Option<&Path>) -> Result<RunConfig, CliError> {
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError {
        code: if e.use_stderr() { EXIT_USAGE } else { EXIT_OK },
        message: e.to_string(),
    })?;
    let (command, flags) = match cli.command {
        Sub::Entropy(f) => (Command::Entropy, f),
        Sub::Bounds(f) => (Command::Bounds, f),
        Sub::VerifyNorms(f) => (Command::VerifyNorms, f),
        Sub::Minimize(f) => (Command::Minimize, f),
        Sub::Carlen(f) => (Command::Carlen, f),
        Sub::Ode(f) => (Command::Ode, f),
        Sub::Sweep(f) => (Command::Sweep, f),
    };
    let (flag_config, given) = flags.given();
    let mut values = match config_file.map(Path::to_path_buf).or(flag_config) {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    values.extend(given);
    for key in values.keys() {
        if !COMMON_KEYS.contains(&key.as_str()) && !command.keys().contains(&key.as_str()) {
            return Err(CliError::usage(format!("unknown key {key:?} for this command")));
        }
    }
    build_config(command, &values)
}

fn default_quadrature() -> Result<(usize, usize), CliError> {
    match std::env::var(QUADRATURE_ENV) {
        Ok(v) => parse_pair(QUADRATURE_ENV, &v),
        Err(_) => Ok((64, 128)),
    }
}

fn build_config(command: Command, values: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
    let get = |k: &str| values.get(k).map(String::as_str);
    let twice_j: usize = get("twice_j").map(|v| parse_num("twice_j", v)).transpose()?.unwrap_or(2);
    if twice_j == 0 {
        return Err(CliError::usage("twice_j must be positive"));
    }
    let quadrature = match get("quadrature") {
        Some(v) => parse_pair("quadrature", v)?,
        None => default_quadrature()?,
    };
    if quadrature.0 < 2 || quadrature.1 < 2 {
        return Err(CliError::usage("quadrature needs at least 2 nodes per direction"));
    }
    let output_format = match get("format").unwrap_or("json") {
        "json" => OutputFormat::Json,
        "csv" => OutputFormat::Csv,
        other => return Err(CliError::usage(format!("unknown format {other:?}"))),
    };
    let parametrization = match get("parametrization").unwrap_or("coefficients") {
        "coefficients" => Parametrization::Coefficients,
        "majorana" | "majorana_roots" => Parametrization::MajoranaRoots,
        other => return Err(CliError::usage(format!("unknown parametrization {other:?}"))),
    };
    let opt_f64 = |k: &str| get(k).map(|v| parse_num::<f64>(k, v)).transpose();
    let p = opt_f64("p")?;
    let q = opt_f64("q")?;
    if let Some(p) = p {
        if !(p >= 1.0) {
            return Err(CliError::usage(format!("p must be at least 1, got {p}")));
        }
    }
    if let Some(q) = q {
        if !(q > 0.0) {
            return Err(CliError::usage(format!("q must be positive, got {q}")));
        }
    }
    let coeffs = get("coeffs").map(parse_coeffs).transpose()?;
    if let Some(c) = &coeffs {
        if c.len() != twice_j + 1 {
            return Err(CliError::usage(format!("expected {} coefficients, got {}", twice_j + 1, c.len())));
        }
    }
    let u0_range = get("u0_range").map(|v| parse_pair::<f64>("u0_range", v)).transpose()?;
    if let Some((lo, hi)) = u0_range {
        if !(lo > 0.0 && hi > lo) {
            return Err(CliError::usage("u0_range needs 0 < lo < hi"));
        }
    }
    let cfg = RunConfig {
        command,
        twice_j,
        quadrature,
        seed: get("seed").map(|v| parse_num("seed", v)).transpose()?.unwrap_or(0),
        output_format,
        output_path: get("output").map(PathBuf::from),
        coeffs,
        p,
        q,
        n_max: get("n_max").map(|v| parse_num("n_max", v)).transpose()?.unwrap_or(3),
        num_samples: get("samples").map(|v| parse_num("samples", v)).transpose()?.unwrap_or(1000),
        num_starts: get("starts").map(|v| parse_num("starts", v)).transpose()?.unwrap_or(default_num_starts(twice_j)),
        max_iters: get("iters").map(|v| parse_num("iters", v)).transpose()?.unwrap_or(1000),
        parametrization,
        b_el: opt_f64("b_el")?.unwrap_or(1.0),
        u0: opt_f64("u0")?,
        u0_range,
        scan_points: get("scan_points").map(|v| parse_num("scan_points", v)).transpose()?.unwrap_or(64),
        grid_points: get("points").map(|v| parse_num("points", v)).transpose()?.unwrap_or(512),
    };
    if cfg.n_max == 0 || cfg.num_samples == 0 || cfg.num_starts == 0 || cfg.max_iters == 0 {
        return Err(CliError::usage("n_max, samples, starts and iters must be positive"));
    }
    if !(cfg.b_el > 0.0) {
        return Err(CliError::usage("b_el must be positive"));
    }
    if let Some(u0) = cfg.u0 {
        if !(u0 > 0.0) {
            return Err(CliError::usage("u0 must be positive"));
        }
    }
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// A report in both output shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Report plus whether every asserted inequality held.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => out.push_str(&i.to_string()),
            (_, Some(u)) => out.push_str(&u.to_string()),
            _ => out.push_str(&float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}]");
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let sorted: BTreeMap<&String, &Value> = map.iter().collect();
            out.push_str("{\n");
            for (i, (k, item)) in sorted.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String((*k).clone()));
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < sorted.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}}}");
        }
    }
}

/// JSON text with sorted keys and floats printed to 17 significant digits.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, 0, &mut out);
    out.push('\n');
    out
}

pub fn render_csv(header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Float(f) => float(*f),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn write_report(report: &Report, format: OutputFormat, path: Option<&Path>) -> std::io::Result<()> {
    let text = match format {
        OutputFormat::Json => render_json(&report.json),
        OutputFormat::Csv => render_csv(&report.header, &report.rows),
    };
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn config_state(cfg: &RunConfig) -> Result<SpinState, CliError> {
    match &cfg.coeffs {
        Some(c) => Ok(make_state(cfg.twice_j, c.clone())?.normalized()?),
        None => Ok(random_state(cfg.twice_j, cfg.seed)),
    }
}

fn rule(cfg: &RunConfig) -> Result<QuadratureRule, CliError> {
    Ok(build_quadrature(cfg.quadrature.0, cfg.quadrature.1)?)
}

fn run_entropy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let state = config_state(cfg)?;
    let r = entropy_report(&state, &rule(cfg)?)?;
    let rows = vec![vec![
        r.twice_j.into(),
        r.wehrl.into(),
        r.thm2_bound.into(),
        r.lieb_bound.into(),
        r.slack_thm2.into(),
        r.slack_lieb.into(),
    ]];
    Ok(Outcome {
        passed: r.slack_thm2 >= -1e-8,
        report: Report {
            json: to_json(&r),
            header: vec!["twice_j", "wehrl", "thm2_bound", "lieb_bound", "slack_thm2", "slack_lieb"],
            rows,
        },
    })
}

fn run_bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut passed = true;
    for tj in 1..=cfg.twice_j {
        let gap = bound_gap(tj);
        let limit = 1.0 / (2.0 * tj as f64);
        let holds = gap >= 0.0 && gap < limit;
        passed &= holds;
        rows.push(vec![tj.into(), lieb_bound(tj).into(), theorem2_bound(tj).into(), gap.into(), limit.into()]);
        entries.push(serde_json::json!({
            "twice_j": tj,
            "lieb_bound": lieb_bound(tj),
            "thm2_bound": theorem2_bound(tj),
            "gap": gap,
            "gap_limit": limit,
            "holds": holds,
        }));
    }
    Ok(Outcome {
        passed,
        report: Report {
            json: serde_json::json!({ "rows": entries }),
            header: vec!["twice_j", "lieb_bound", "thm2_bound", "gap", "gap_limit"],
            rows,
        },
    })
}

fn run_verify_norms(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.p.unwrap_or(2.0);
    let report = monotonicity_scan(cfg.twice_j, p, cfg.n_max, cfg.num_samples, cfg.seed, &rule(cfg)?)?;
    let rows = report
        .rows
        .iter()
        .map(|r| vec![Cell::Int(r.n as i64), r.q.into(), r.max_ratio.into(), r.violations.into()])
        .collect();
    Ok(Outcome {
        passed: report.total_violations() == 0,
        report: Report { json: to_json(&report), header: vec!["n", "q", "max_ratio", "violations"], rows },
    })
}

fn run_minimize(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let opts = SearchOptions {
        seed: cfg.seed,
        num_starts: cfg.num_starts,
        max_iters: cfg.max_iters,
        parametrization: cfg.parametrization,
        ..Default::default()
    };
    let result = minimize_wehrl(cfg.twice_j, &opts, &rule(cfg)?)?;
    let rows = result.per_start_values.iter().enumerate().map(|(i, v)| vec![i.into(), (*v).into()]).collect();
    Ok(Outcome {
        passed: result.best_value >= theorem2_bound(cfg.twice_j) - 1e-8,
        report: Report { json: to_json(&result), header: vec!["start", "value"], rows },
    })
}

fn run_carlen(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let q = cfg.q.unwrap_or(2.0);
    let state = config_state(cfg)?;
    let check = carlen_residual(&state, q, &rule(cfg)?)?;
    let mut json = to_json(&check);
    json["experimental"] = Value::Bool(q < 1.0);
    let rows = vec![vec![
        check.twice_j.into(),
        check.q.into(),
        check.lhs.into(),
        check.rhs.into(),
        check.rel_residual.into(),
    ]];
    Ok(Outcome {
        passed: q < 1.0 || check.rel_residual <= 1e-6,
        report: Report { json, header: vec!["twice_j", "q", "lhs", "rhs", "rel_residual"], rows },
    })
}

fn run_ode(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.p.unwrap_or(2.0);
    let q = cfg.q.unwrap_or(p + 2.0 / cfg.twice_j as f64);
    let problem = problem_from_exponents(cfg.twice_j, &ExponentPair::new(p, q)?, cfg.b_el)?;
    let grid = GridSpec::with_points(cfg.grid_points);
    if let Some(range) = cfg.u0_range {
        let roots = boundary_scan_on(&problem, range, cfg.scan_points, &grid)?;
        let rows = roots.iter().map(|r| vec![Cell::Float(*r)]).collect();
        return Ok(Outcome {
            passed: true,
            report: Report {
                json: serde_json::json!({ "problem": to_json(&problem), "admissible_u0": roots }),
                header: vec!["u0"],
                rows,
            },
        });
    }
    let solution = shoot(&problem, cfg.u0.unwrap_or(problem.a_expected), &grid)?;
    let mut json = to_json(&solution);
    json["el_residual"] = to_json(&el_residual(&problem, &solution)?);
    json["energy_deviation"] = to_json(&energy_diagnostic(&problem, &solution)?);
    let rows = (0..solution.theta_grid.len())
        .map(|i| vec![solution.theta_grid[i].into(), solution.u_values[i].into(), solution.du_values[i].into()])
        .collect();
    Ok(Outcome { passed: true, report: Report { json, header: vec!["theta", "u", "du"], rows } })
}

fn run_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.p.unwrap_or(2.0);
    let rule = rule(cfg)?;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut passed = true;
    for tj in 1..=cfg.twice_j {
        let j = tj as f64 / 2.0;
        // half-integer steps are the off-lattice points
        let qs: Vec<f64> = (1..=2 * cfg.n_max).map(|k| p + k as f64 / (2.0 * j)).collect();
        let mut exps = vec![p];
        exps.extend(&qs);
        let mut max_ratio = vec![f64::NEG_INFINITY; qs.len()];
        let mut violations = vec![0usize; qs.len()];
        for k in 0..cfg.num_samples {
            let f = random_state_in_stream(tj, cfg.seed, k as u64);
            let norms = normalized_p_norms(&f, &exps, &rule)?;
            for i in 0..qs.len() {
                let r = norms[i + 1] / norms[0];
                max_ratio[i] = max_ratio[i].max(r);
                if r > 1.0 + 1e-9 {
                    violations[i] += 1;
                }
            }
        }
        for (i, q) in qs.iter().enumerate() {
            let proven = i % 2 == 1 && p > 1.0 / j;
            let status = if proven { "proven" } else { "conjectural" };
            if proven && violations[i] > 0 {
                passed = false;
            }
            rows.push(vec![tj.into(), p.into(), (*q).into(), status.into(), max_ratio[i].into(), violations[i].into()]);
            entries.push(serde_json::json!({
                "twice_j": tj,
                "p": p,
                "q": q,
                "status": status,
                "max_ratio": max_ratio[i],
                "violations": violations[i],
            }));
        }
    }
    Ok(Outcome {
        passed,
        report: Report {
            json: serde_json::json!({ "num_samples": cfg.num_samples, "rows": entries }),
            header: vec!["twice_j", "p", "q", "status", "max_ratio", "violations"],
            rows,
        },
    })
}

/// Runs the configured command and returns its report.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Entropy => run_entropy(cfg),
        Command::Bounds => run_bounds(cfg),
        Command::VerifyNorms => run_verify_norms(cfg),
        Command::Minimize => run_minimize(cfg),
        Command::Carlen => run_carlen(cfg),
        Command::Ode => run_ode(cfg),
        Command::Sweep => run_sweep(cfg),
    }
}

/// Runs the command, writes its report and returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let outcome = match execute(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    if let Err(e) = write_report(&outcome.report, cfg.output_format, cfg.output_path.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return EXIT_NUMERIC;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(items: &[&str]) -> Vec<String> {
        std::iter::once("wehrl-lab").chain(items.iter().copied()).map(String::from).collect()
    }

    #[test]
    fn parses_examples() {
        let cfg = parse_config(&argv(&["entropy", "--twice-j", "2", "--coeffs", "0,1.414213,0"]), None).unwrap();
        assert_eq!(cfg.command, Command::Entropy);
        assert_eq!(cfg.coeffs.unwrap()[1], Complex64::new(1.414213, 0.0));
        let cfg = parse_config(&argv(&["minimize", "--twice-j", "3", "--seed", "42", "--starts", "50"]), None).unwrap();
        assert_eq!((cfg.twice_j, cfg.seed, cfg.num_starts), (3, 42, 50));
        let err = parse_config(&argv(&["verify-norms", "--twice-j", "2", "--p", "0.5"]), None).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        assert_eq!(parse_config(&argv(&["entropy", "--bogus", "1"]), None).unwrap_err().code, EXIT_USAGE);
        assert_eq!(parse_config(&argv(&["entropy", "--twice-j", "x"]), None).unwrap_err().code, EXIT_USAGE);
        assert_eq!(parse_config(&argv(&["bounds", "--p", "2"]), None).unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# comment\ntwice_j = 3\n\nn-max=2\n").unwrap();
        assert_eq!(m.get("twice_j").map(String::as_str), Some("3"));
        assert_eq!(m.get("n_max").map(String::as_str), Some("2"));
        assert!(parse_config_text("twice_j 3").is_err());
    }

    #[test]
    fn json_rendering() {
        let v = serde_json::json!({ "b": 1, "a": [0.5, true], "c": { "z": "s", "y": null } });
        let text = render_json(&v);
        assert_eq!(text, "{\n  \"a\": [\n    5.0000000000000000e-1,\n    true\n  ],\n  \"b\": 1,\n  \"c\": {\n    \"y\": null,\n    \"z\": \"s\"\n  }\n}\n");
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["a"][0], 0.5);
    }

    #[test]
    fn csv_rendering() {
        let text = render_csv(&["n", "q"], &[vec![Cell::Int(1), Cell::Float(3.0)]]);
        assert_eq!(text, "n,q\n1,3.0000000000000000e0\n");
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::InvalidArgument("x".into())).code, EXIT_USAGE);
        assert_eq!(CliError::from(Error::IntegrationFailure { theta: 1.0, reason: "x".into() }).code, EXIT_NUMERIC);
    }
}
