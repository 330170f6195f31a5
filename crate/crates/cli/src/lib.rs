//! `gwcheck`: builds genus-0/1 potentials from invariant tables and runs the
//! identity checks on them.
//!
//! Exit codes: 0 when everything passes, 1 on a verification failure or
//! inconsistent data, 2 on a usage or schema error.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwcore::potentials::{
    check_quasi_homogeneity, parse_table, solve_genus0_wdvv, solve_genus1_getzler, table_to_json,
    window_for,
};
use gwcore::virasoro::{run_checks, select_checks};
use gwcore::{
    builtin, Bound, CheckReport, ModelError, PotentialError, QEntry, QModel, QPotential, QSeries,
    Rational, Scalar, SeriesError,
};
use serde_json::{json, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gwcheck",
    version,
    about = "Exact checks of genus-0 and genus-1 Gromov-Witten identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a model file and print its derived constants.
    Validate {
        /// Model path or `builtin:NAME`.
        #[arg(value_name = "MODEL", required_unless_present = "model")]
        path: Option<String>,
        #[arg(long)]
        model: Option<String>,
    },
    /// Build a potential and write it as a JSON artifact.
    Build(RunArgs),
    /// Solve the genus-1 invariants of a rank-one model and write them as a table.
    #[command(name = "solve-genus1")]
    SolveGenus1(RunArgs),
    /// Run checks against a built potential.
    Check(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Model path or `builtin:point`, `builtin:p1`, `builtin:p2`.
    #[arg(long, default_value = "builtin:p2")]
    pub model: String,
    /// Invariant table file; may be repeated.
    #[arg(long = "table")]
    pub tables: Vec<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub t_max: u32,
    #[arg(long, default_value_t = 4)]
    pub d_max: u32,
    /// Comma-separated check names, family prefixes or `all`.
    #[arg(long, default_value = "all")]
    pub checks: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Previously built artifact; replaces --model and --table.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// Include wall-clock times in reports.
    #[arg(long)]
    pub timings: bool,
    /// Worker threads for `check`; defaults to available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::usage(format!("model: {e}"))
    }
}

impl From<PotentialError> for Failure {
    fn from(e: PotentialError) -> Self {
        match e {
            PotentialError::TableParse(_) => Failure::usage(format!("table: {e}")),
            other => Failure::data(other.to_string()),
        }
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        Failure::data(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("i/o: {e}"))
    }
}

/// Runs a parsed command, writing reports to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Validate { path, model } => {
            let source = path.or(model).expect("clap requires a model");
            cmd_validate(&source, out)
        }
        Command::Build(args) => cmd_build(&args, out, err),
        Command::SolveGenus1(args) => cmd_solve_genus1(&args, out, err),
        Command::Check(args) => cmd_check(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}

fn pretty(x: &Rational) -> String {
    let s = x.to_fraction_string();
    s.strip_suffix("/1").map(str::to_string).unwrap_or(s)
}

fn row(xs: &[Rational]) -> String {
    let items: Vec<String> = xs.iter().map(pretty).collect();
    format!("({})", items.join(", "))
}

pub fn load_model(source: &str) -> Result<Arc<QModel>, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin::model(name).map(Arc::new).ok_or_else(|| {
            Failure::usage(format!(
                "unknown built-in model `{name}`; known: {}",
                builtin::NAMES.join(", ")
            ))
        });
    }
    let text = fs::read_to_string(source).map_err(|e| Failure::usage(format!("{source}: {e}")))?;
    Ok(Arc::new(QModel::from_json(&text)?))
}

pub fn cmd_validate(source: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = load_model(source)?;
    let n = model.n();
    let labels: Vec<&str> = model.basis().iter().map(|b| b.label.as_str()).collect();
    writeln!(
        out,
        "model {} (dim {}, rank {}, curve rank {})",
        model.name(),
        model.dim(),
        n,
        model.curve_rank()
    )?;
    writeln!(out, "basis = ({})", labels.join(", "))?;
    writeln!(out, "b = {}", row(model.grading()))?;
    for a in 0..n {
        let eta: Vec<Rational> = (0..n).map(|b| model.eta(a, b).clone()).collect();
        writeln!(out, "eta[{}] = {}", a + 1, row(&eta))?;
    }
    for a in 0..n {
        let c: Vec<Rational> = (0..n).map(|b| model.c1_action(a, b).clone()).collect();
        writeln!(out, "C[{}] = {}", a + 1, row(&c))?;
    }
    let (constant, linear) = model.euler_constants();
    writeln!(out, "E constant = {}", row(&constant))?;
    writeln!(out, "E linear = {}", row(&linear))?;
    writeln!(out, "int c1 c_(d-1) = {}", pretty(model.int_c1_cdm1()))?;
    Ok(EXIT_PASS)
}

fn read_tables(paths: &[PathBuf]) -> Result<Vec<QEntry>, Failure> {
    let mut entries = Vec::new();
    for path in paths {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let parsed = parse_table::<Rational>(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        entries.extend(parsed);
    }
    Ok(entries)
}

fn check_window_args(args: &RunArgs) -> Result<(), Failure> {
    if args.t_max < 3 {
        return Err(Failure::usage(format!(
            "--t-max must be at least 3, got {}",
            args.t_max
        )));
    }
    Ok(())
}

/// Default tables for built-ins when no `--table` is given: the degree-one
/// line count for P¹, and WDVV/Getzler solves for P².
fn default_tables(source: &str, model: &Arc<QModel>, d_max: u32) -> Result<Vec<QEntry>, Failure> {
    match source {
        "builtin:p1" if d_max >= 1 => Ok(vec![QEntry {
            genus: 0,
            beta: vec![1],
            insertions: vec![1, 1],
            value: Rational::from_i64(1),
        }]),
        "builtin:p2" => {
            let g0 = solve_genus0_wdvv(model.clone(), d_max)?.table;
            let g1 = solve_genus1_getzler(model.clone(), &g0, d_max)?.table;
            Ok(g0.into_iter().chain(g1).collect())
        }
        _ => Ok(Vec::new()),
    }
}

/// Builds the potential described by `args`, or loads `--potential`.
pub fn obtain_potential(args: &RunArgs) -> Result<QPotential, Failure> {
    if let Some(path) = &args.potential {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        return potential_from_artifact(&text);
    }
    check_window_args(args)?;
    let model = load_model(&args.model)?;
    let table = if args.tables.is_empty() {
        default_tables(&args.model, &model, args.d_max)?
    } else {
        read_tables(&args.tables)?
    };
    let window = window_for(
        &model,
        Bound::Finite(args.t_max as i64),
        Bound::Finite(args.d_max as i64),
    );
    Ok(gwcore::build_potential(model, &table, window)?)
}

pub fn potential_to_artifact(pot: &QPotential) -> String {
    let table: Value = serde_json::from_str(&table_to_json(pot.table())).expect("table json");
    let doc = json!({
        "model": pot.model().document(),
        "window": pot.window().to_string(),
        "f0": pot.f0().to_string(),
        "f1": pot.f1().to_string(),
        "table": table,
        "provenance": pot.provenance(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("artifact json");
    s.push('\n');
    s
}

pub fn potential_from_artifact(text: &str) -> Result<QPotential, Failure> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Failure::usage(format!("artifact: {e}")))?;
    let field = |k: &str| {
        doc.get(k)
            .ok_or_else(|| Failure::usage(format!("artifact: missing `{k}`")))
    };
    let model_doc = serde_json::from_value(field("model")?.clone())
        .map_err(|e| Failure::usage(format!("artifact model: {e}")))?;
    let model = Arc::new(QModel::from_document(model_doc)?);
    let series = |k: &str| -> Result<QSeries, Failure> {
        let s = field(k)?
            .as_str()
            .ok_or_else(|| Failure::usage(format!("artifact: `{k}` is not a string")))?;
        s.parse()
            .map_err(|e| Failure::usage(format!("artifact `{k}`: {e}")))
    };
    let (f0, f1) = (series("f0")?, series("f1")?);
    let table = parse_table(&field("table")?.to_string())?;
    let provenance = field("provenance")?
        .as_array()
        .ok_or_else(|| Failure::usage("artifact: `provenance` is not an array"))?
        .iter()
        .map(|v| v.as_str().unwrap_or_default().to_string())
        .collect();
    Ok(QPotential::from_parts(model, f0, f1, table, provenance)?)
}

fn emit(args: &RunArgs, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match &args.out {
        Some(path) => write_file(path, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn cmd_build(args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let pot = obtain_potential(args)?;
    for g in 0..2 {
        let c = check_quasi_homogeneity(&pot, g)?;
        if !c.equal {
            writeln!(err, "quasi-homogeneity fails in genus {g}: {}", c.residual)?;
            return Ok(EXIT_FAIL);
        }
    }
    emit(args, &potential_to_artifact(&pot), out)?;
    writeln!(err, "built {} through {}", pot.model().name(), pot.window())?;
    Ok(EXIT_PASS)
}

pub fn cmd_solve_genus1(
    args: &RunArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let model = load_model(&args.model)?;
    let genus0 = if args.tables.is_empty() {
        solve_genus0_wdvv(model.clone(), args.d_max)?.table
    } else {
        read_tables(&args.tables)?
            .into_iter()
            .filter(|e| e.genus == 0)
            .collect()
    };
    let outcome = solve_genus1_getzler(model, &genus0, args.d_max)?;
    for step in &outcome.steps {
        writeln!(
            err,
            "degree {}: {} (unique; {} of {} equations determine it, window {})",
            step.degree,
            pretty(&step.value),
            step.determining,
            step.equations,
            step.window
        )?;
    }
    emit(args, &table_to_json(&outcome.table), out)?;
    Ok(EXIT_PASS)
}

/// Resolves a comma-separated selector into check names.
pub fn resolve_checks(selector: &str) -> Result<Vec<&'static str>, Failure> {
    let mut names = Vec::new();
    for token in selector.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let found = select_checks(token);
        if found.is_empty() {
            return Err(Failure::usage(format!("unknown check `{token}`")));
        }
        names.extend(found);
    }
    if names.is_empty() {
        return Err(Failure::usage("no checks selected"));
    }
    names.sort_unstable();
    names.dedup();
    Ok(names)
}

pub fn format_reports(reports: &[CheckReport], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            for r in reports {
                s.push_str(&r.to_json_line());
                s.push('\n');
            }
        }
        Format::Text => {
            for r in reports {
                let status = if r.pass { "PASS" } else { "FAIL" };
                s.push_str(&format!("{status} {:<24} {}", r.name, r.window));
                if let Some(ms) = r.millis {
                    s.push_str(&format!(" {ms}ms"));
                }
                s.push('\n');
                if !r.pass {
                    let first = r.first_failure.as_deref().unwrap_or(&r.residual);
                    s.push_str(&format!("     first failing monomial: {first}\n"));
                }
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            s.push_str(&format!("{passed}/{} checks passed\n", reports.len()));
        }
    }
    s
}

pub fn cmd_check(args: &RunArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let names = resolve_checks(&args.checks)?;
    let pot = obtain_potential(args)?;
    let workers = args.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let mut reports = run_checks(&pot, &names, workers);
    if !args.timings {
        for r in &mut reports {
            r.millis = None;
        }
    }
    emit(args, &format_reports(&reports, args.format), out)?;
    Ok(if reports.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}
