//! `locus` command-line front end.
//!
//! Every subcommand writes JSON to stdout and diagnostics to stderr.
//! Exit codes: 0 success or pass, 1 usage or schema error, 2 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arrangement::{Arrangement, MultiplicityList};
use crate::checks::{run_suite, Suite};
use crate::error::Error;
use crate::locus::{is_coarsely_symmetric, is_symmetric_about, locus_report, Tolerances};
use crate::plot::{render_svg, PlotStyle, Theme};
use crate::solver::{solve_equilibrium, SolveResultJson, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "locus", version, about = "Charged Calogero-Moser equilibria and 2D locus configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Relative tolerance for the first locus equation
    #[arg(long, default_value_t = crate::locus::DEFAULT_TOL_FIRST)]
    tol_first: f64,
    /// Relative tolerance for the higher locus equations
    #[arg(long, default_value_t = crate::locus::DEFAULT_TOL_LOCUS)]
    tol_locus: f64,
    /// Angle tolerance (radians) for mirror symmetry
    #[arg(long, default_value_t = crate::locus::DEFAULT_TOL_REFLECTION)]
    tol_reflection: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Result<Tolerances, String> {
        for (name, v) in [
            ("--tol-first", self.tol_first),
            ("--tol-locus", self.tol_locus),
            ("--tol-reflection", self.tol_reflection),
        ] {
            if !(v > 0.0) {
                return Err(format!("{name} must be positive"));
            }
        }
        Ok(Tolerances {
            first: self.tol_first,
            locus: self.tol_locus,
            reflection: self.tol_reflection,
        })
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the equilibrium arrangement for a cyclic multiplicity list
    Solve {
        /// Multiplicities in cyclic order (at least two)
        #[arg(required = true, num_args = 2.., value_parser = clap::value_parser!(u32).range(1..))]
        multiplicities: Vec<u32>,
        /// Append the locus verification report
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1e-12)]
        grad_tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Check every locus equation of an arrangement file
    Verify {
        path: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Test whether a multiplicity list is coarsely symmetric
    Coarse {
        #[arg(required = true, num_args = 2.., value_parser = clap::value_parser!(u32).range(1..))]
        multiplicities: Vec<u32>,
    },
    /// Render an arrangement file as SVG (lines drawn at θ/2)
    Plot {
        path: PathBuf,
        out: PathBuf,
        #[arg(long, default_value = "light")]
        style: Theme,
        #[arg(long, default_value_t = 480.0)]
        size: f64,
    },
    /// Run an oracle suite
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2026)]
        seed: u64,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn json(&mut self, v: &Value) {
        let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("json value"));
    }

    fn fail(&mut self, code: i32, msg: &str) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        self.json(&json!({ "error": msg }));
        code
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::Collision { .. } | Error::Bracket { .. } => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

fn read_arrangement(path: &PathBuf) -> Result<Arrangement, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Arrangement::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { out, err };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(io.err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match cli.command {
        Command::Solve { multiplicities, verify, grad_tol, max_iters, tol } => {
            cmd_solve(&mut io, multiplicities, verify, grad_tol, max_iters, &tol)
        }
        Command::Verify { path, tol } => cmd_verify(&mut io, &path, &tol),
        Command::Coarse { multiplicities } => cmd_coarse(&mut io, multiplicities),
        Command::Plot { path, out, style, size } => cmd_plot(&mut io, &path, &out, style, size),
        Command::Check { suite, seed } => cmd_check(&mut io, suite, seed),
    }
}

fn cmd_solve(
    io: &mut Io,
    multiplicities: Vec<u32>,
    verify: bool,
    grad_tol: f64,
    max_iters: usize,
    tol: &TolArgs,
) -> i32 {
    let tolerances = match tol.tolerances() {
        Ok(t) => t,
        Err(msg) => return io.fail(EXIT_USAGE, &msg),
    };
    let m = match MultiplicityList::new(multiplicities) {
        Ok(m) => m,
        Err(e) => return io.fail(EXIT_USAGE, &e.to_string()),
    };
    let cfg = SolverConfig { grad_tol, max_iters, ..Default::default() };
    let result = match solve_equilibrium(&m, &cfg) {
        Ok(r) => r,
        Err(e) => return io.fail(exit_code(&e), &e.to_string()),
    };
    let _ = writeln!(
        io.err,
        "converged in {} iterations (scaled gradient {:e})",
        result.iterations, result.gradient_inf_norm
    );
    let mut v = serde_json::to_value(SolveResultJson::from(&result)).expect("solve result");
    if verify {
        let report = locus_report(&result.arrangement, &tolerances);
        let _ = writeln!(
            io.err,
            "first locus: {}, all locus: {}, coarsely Coxeter: {}",
            report.first_locus_pass, report.all_locus_pass, report.coarsely_coxeter
        );
        v["locus_report"] = serde_json::to_value(report).expect("report");
    }
    io.json(&v);
    EXIT_OK
}

fn cmd_verify(io: &mut Io, path: &PathBuf, tol: &TolArgs) -> i32 {
    let tolerances = match tol.tolerances() {
        Ok(t) => t,
        Err(msg) => return io.fail(EXIT_USAGE, &msg),
    };
    let a = match read_arrangement(path) {
        Ok(a) => a,
        Err(msg) => return io.fail(EXIT_USAGE, &msg),
    };
    let report = locus_report(&a, &tolerances);
    for line in report.lines.iter().filter(|l| l.error.is_some()) {
        let _ = writeln!(io.err, "line {}: {}", line.index, line.error.as_deref().unwrap_or(""));
    }
    let _ = writeln!(
        io.err,
        "first locus: {}, all locus: {}, worst relative residual {:e}",
        report.first_locus_pass,
        report.all_locus_pass,
        report.max_relative_all()
    );
    io.json(&serde_json::to_value(&report).expect("report"));
    if report.all_locus_pass {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    }
}

fn cmd_coarse(io: &mut Io, multiplicities: Vec<u32>) -> i32 {
    let m = match MultiplicityList::new(multiplicities) {
        Ok(m) => m,
        Err(e) => return io.fail(EXIT_USAGE, &e.to_string()),
    };
    let axes: Vec<usize> = (0..m.len()).filter(|&i| is_symmetric_about(&m, i)).collect();
    io.json(&json!({
        "multiplicities": m.as_slice(),
        "coarsely_symmetric": is_coarsely_symmetric(&m),
        "symmetry_axes": axes,
    }));
    EXIT_OK
}

fn cmd_plot(io: &mut Io, path: &PathBuf, out: &PathBuf, theme: Theme, size: f64) -> i32 {
    if !(size > 0.0) {
        return io.fail(EXIT_USAGE, "--size must be positive");
    }
    let a = match read_arrangement(path) {
        Ok(a) => a,
        Err(msg) => return io.fail(EXIT_USAGE, &msg),
    };
    let style = PlotStyle { size, theme, ..Default::default() };
    let svg = render_svg(&a, &style);
    if let Err(e) = std::fs::write(out, svg.as_bytes()) {
        return io.fail(EXIT_USAGE, &format!("{}: {e}", out.display()));
    }
    io.json(&json!({ "output": out.display().to_string(), "lines": a.len() }));
    EXIT_OK
}

fn cmd_check(io: &mut Io, suite: Suite, seed: u64) -> i32 {
    let rows = run_suite(suite, seed);
    let _ = writeln!(io.err, "{:<12} {:<40} {:>12} {:>10}  result", "suite", "case", "metric", "tol");
    for r in &rows {
        let _ = writeln!(
            io.err,
            "{:<12} {:<40} {:>12.3e} {:>10.1e}  {}",
            r.suite,
            r.case,
            r.metric,
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let all_pass = rows.iter().all(|r| r.pass);
    io.json(&json!({ "seed": seed, "pass": all_pass, "rows": rows }));
    if all_pass {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    }
}
