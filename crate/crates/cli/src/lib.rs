//! Command-line front end: `radius`, `table`, `verify` and `curve`.
//!
//! Exit codes: 0 on success, 1 on usage or parameter errors, 2 when a
//! verification suite reports failures.

// Range checks are written `!(x > 0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod params;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bohrlab::verify::{run_target, Suite, SuiteConfig, VerificationReport, DEFAULT_W_DEGREE};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use params::{expand, parse_grid, parse_params, Target};
use table::{fmt, Row};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BOHRLAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bohrlab", version, about = "Bohr radii for coefficient-constrained harmonic mappings")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bohr radius of one class instance.
    Radius {
        #[arg(long)]
        class: String,
        /// Parameters as name=value pairs, e.g. `C=0,D=1` or `mu=0,rho=0`.
        #[arg(long, default_value = "")]
        params: String,
        /// Series/root tolerance (class `w` only; catalog radii are closed forms).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Radius table over a parameter grid, written as CSV.
    Table {
        #[arg(long)]
        class: String,
        /// Swept parameters as name=lo:hi:step, first varies slowest.
        #[arg(long)]
        grid: String,
        /// Parameters held fixed.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        tol: Option<f64>,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth, Bohr and sharpness checks over the default grid.
    Verify {
        /// all, growth, bohr or sharpness.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random members per instance.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Truncation degree of the W extremal maps.
        #[arg(long, default_value_t = DEFAULT_W_DEGREE)]
        max_degree: u32,
    },
    /// Extremal majorant and boundary-distance bound on r = j/N, j < N.
    Curve {
        #[arg(long)]
        class: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        tol: Option<f64>,
        /// Number of radii (at least 16).
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses arguments and runs the command, returning the exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    let json = cli.json;
    match cli.command {
        Command::Radius { class, params, tol } => cmd_radius(&class, &params, tol, json),
        Command::Table { class, grid, params, tol, out } => {
            cmd_table(&class, &grid, &params, tol, out.as_deref(), json)
        }
        Command::Verify { suite, seed, cases, max_degree } => {
            cmd_verify(&suite, seed, cases, max_degree, json)
        }
        Command::Curve { class, params, tol, samples, out } => {
            cmd_curve(&class, &params, tol, samples, out.as_deref(), json)
        }
    }
}

#[derive(Serialize)]
struct RadiusOut<'a> {
    class: &'a str,
    params: serde_json::Map<String, serde_json::Value>,
    t: Option<f64>,
    #[serde(flatten)]
    result: &'a bohrlab::Radius,
}

fn cmd_radius(class: &str, params: &str, tol: Option<f64>, json: bool) -> Result<i32, String> {
    let target = Target::build(class, &parse_params(params)?, tol)?;
    let (t, r) = table::radius(&target)?;
    let mut out = String::new();
    if json {
        let params = target
            .params()
            .into_iter()
            .map(|(k, v)| (k.to_string(), serde_json::to_value(v).unwrap_or_default()))
            .collect();
        let doc = RadiusOut { class, params, t, result: &r };
        out = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n";
    } else {
        let label = match &target {
            Target::Class(c) => c.label(),
            Target::W(p) => format!("w(mu={},rho={},tol={})", p.mu, p.rho, p.tol),
        };
        out.push_str(&format!("{label}\n"));
        if let Some(t) = t {
            out.push_str(&format!("  t          {}\n", fmt(t)));
        }
        out.push_str(&format!("  radius     {}\n", fmt(r.value)));
        out.push_str(&format!("  method     {}\n", r.method.as_str()));
        out.push_str(&format!("  residual   {}\n", fmt(r.residual)));
        out.push_str(&format!("  tail_bound {}\n", fmt(r.series_tail_bound)));
        if let Some(note) = &r.note {
            out.push_str(&format!("  note       {note}\n"));
        }
    }
    print!("{out}");
    Ok(EXIT_OK)
}

/// Thread pool honoring `BOHRLAB_THREADS`.
fn pool() -> Result<rayon::ThreadPool, String> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| format!("{THREADS_ENV}={v:?} is not a positive integer"))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| e.to_string())
}

/// Writes `contents` to `path` via a temporary file in the same directory,
/// or to standard output when no path is given.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), String> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout.write_all(contents.as_bytes()).map_err(|e| e.to_string());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| format!("cannot write {}: {e}", path.display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| fail(&e))?;
    tmp.flush().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn cmd_table(
    class: &str,
    grid: &str,
    params: &str,
    tol: Option<f64>,
    out: Option<&Path>,
    json: bool,
) -> Result<i32, String> {
    let axes = parse_grid(grid)?;
    let fixed = parse_params(params)?;
    let cells = expand(&axes, &fixed)?;
    // Name errors abort; range errors become invalid rows.
    if let Some(first) = cells.first() {
        params::check_names(class, first)?;
    }
    let rows: Vec<Row> = pool()?.install(|| cells.par_iter().map(|c| table::row(class, c, tol)).collect());
    let invalid = rows.iter().filter(|r| r.method == "invalid").count();
    if invalid > 0 {
        eprintln!("warning: {invalid} of {} cells have invalid parameters", rows.len());
    }
    let text = if json {
        let doc: Vec<_> = rows.iter().map(Row::to_json).collect();
        serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n"
    } else {
        let mut s = String::new();
        if let Some(first) = rows.first() {
            s.push_str(&first.header());
            s.push('\n');
        }
        for r in &rows {
            s.push_str(&r.to_csv());
            s.push('\n');
        }
        s
    };
    write_output(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_verify(suite: &str, seed: u64, cases: usize, w_degree: u32, json: bool) -> Result<i32, String> {
    let suites = Suite::parse_selection(suite).map_err(|e| e.to_string())?;
    if w_degree < 2 {
        return Err("--max-degree must be at least 2".into());
    }
    let mut config = SuiteConfig::<f64>::new(suites);
    config.w_degree = w_degree;
    let start = std::time::Instant::now();
    let parts: Vec<Result<VerificationReport, String>> = pool()?.install(|| {
        (0..config.targets.len())
            .into_par_iter()
            .map(|i| run_target(&config, i, seed, cases).map_err(|e| e.to_string()))
            .collect()
    });
    let mut report = VerificationReport::new(bohrlab::verify::suite_name(&config.suites));
    for part in parts {
        report.absorb(part?);
    }
    report.elapsed = start.elapsed();
    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?);
    } else {
        print!("{}", report.to_text());
        eprintln!("elapsed {:.2?}", report.elapsed);
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_curve(
    class: &str,
    params: &str,
    tol: Option<f64>,
    samples: usize,
    out: Option<&Path>,
    json: bool,
) -> Result<i32, String> {
    if samples < 16 {
        return Err(format!("--samples must be at least 16, got {samples}"));
    }
    let target = Target::build(class, &parse_params(params)?, tol)?;
    let (points, flagged) = table::curve(&target, samples)?;
    if flagged {
        eprintln!("warning: distance_lower <= 0; the instance is degenerate and has no Bohr radius");
    }
    let text = if json {
        serde_json::to_string_pretty(&points).map_err(|e| e.to_string())? + "\n"
    } else {
        let mut s = String::from("r,majorant_extremal,distance_lower\n");
        for p in &points {
            s.push_str(&format!("{},{},{}\n", fmt(p.r), fmt(p.majorant_extremal), fmt(p.distance_lower)));
        }
        s
    };
    write_output(out, &text)?;
    Ok(EXIT_OK)
}
