//! `qtm`: compare template-matching strategies, verify optimality, and dump operators.

mod output;
mod strategy;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qtm_core::binary::{
    diagonalizing_operator, estimation_matching_score, majority_voting_score, optimal_binary_pom,
};
use qtm_core::linalg::Matrix;
use qtm_core::multi::shift_operator;
use qtm_core::qstates::BasisTag;
use qtm_core::scoreops::{binary_diff_operator, binary_score_operator, multi_score_operator};

use output::{matrix_csv, matrix_pretty, sig12, MatrixDump};
use strategy::{evaluate, Evaluated, Params, StrategySpec};

const FIG1_MAX_N: usize = 20;

#[derive(Parser)]
#[command(name = "qtm", version, about = "Quantum template matching of qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scores of the optimal, majority-voting and estimation strategies for N = 1..n-max
    Fig1(Opts),
    /// Check the optimality conditions for a strategy's measurement
    Verify {
        /// binary-opt, binary-mv, binary-est, multi-srm, multi-known:m3n3,
        /// multi-known:m3n4 or multi-fixedpoint
        strategy: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print an operator as JSON (or csv/pretty)
    Dump {
        /// w0, w1, w-diff, w-multi, shift, p, pom or gamma
        object: String,
        /// Template index for w-multi; strategy for pom and gamma
        spec: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args)]
struct Opts {
    /// Number of copies
    #[arg(long, conflicts_with = "n_max")]
    n: Option<usize>,
    /// Largest number of copies in a sweep
    #[arg(long)]
    n_max: Option<usize>,
    /// Number of templates (multi) or estimation outcomes (binary-est)
    #[arg(long)]
    m: Option<usize>,
    /// Template angle
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Offset of the estimation grid [default: pi/M]
    #[arg(long, allow_negative_numbers = true)]
    phase: Option<f64>,
    /// Tolerance for the optimality conditions
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Read --theta and --phase in degrees
    #[arg(long)]
    degrees: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<qtm_core::Error> for Failure {
    fn from(e: qtm_core::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl Opts {
    fn angle(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    fn params(&self, default_n: usize) -> Result<Params, Failure> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Failure::usage("--tol must be positive"));
        }
        if self.n_max.is_some() {
            return Err(Failure::usage("--n-max only applies to fig1; use --n"));
        }
        Ok(Params {
            n: self.n.unwrap_or(default_n),
            m: self.m,
            theta: self.angle(self.theta),
            phase: self.phase.map(|p| self.angle(p)),
            tol: self.tol,
        })
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct Fig1Row {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "S_opt")]
    s_opt: f64,
    #[serde(rename = "S_mv")]
    s_mv: f64,
    #[serde(rename = "S_est")]
    s_est: f64,
}

fn fig1(opts: &Opts) -> Result<u8, Failure> {
    let n_max = opts.n_max.or(opts.n).unwrap_or(FIG1_MAX_N);
    if !(1..=FIG1_MAX_N).contains(&n_max) {
        return Err(Failure::usage(format!("--n-max must be in 1..={FIG1_MAX_N}, got {n_max}")));
    }
    let theta = opts.angle(opts.theta);
    let rows = (1..=n_max)
        .map(|n| {
            let count = n + 1;
            let phase = std::f64::consts::PI / count as f64;
            Ok(Fig1Row {
                n,
                s_opt: optimal_binary_pom(n, theta)?.1.score,
                s_mv: majority_voting_score(n, theta)?.score,
                s_est: estimation_matching_score(n, count, phase, theta)?.score,
            })
        })
        .collect::<Result<Vec<_>, qtm_core::Error>>()?;

    let text = match opts.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("N,S_opt,S_mv,S_est\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r.n, sig12(r.s_opt), sig12(r.s_mv), sig12(r.s_est));
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Pretty => {
            let mut s = format!("{:>3}  {:>14}  {:>14}  {:>14}\n", "N", "S_opt", "S_mv", "S_est");
            for r in &rows {
                let _ = writeln!(s, "{:>3}  {:>14.12}  {:>14.12}  {:>14.12}", r.n, r.s_opt, r.s_mv, r.s_est);
            }
            s
        }
    };
    opts.emit(&text)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    strategy: &'a str,
    n: usize,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    score: f64,
    hermiticity_residual: f64,
    min_eig_gaps: &'a [f64],
    tol: f64,
    optimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

fn verify(spec: &str, opts: &Opts) -> Result<u8, Failure> {
    let spec: StrategySpec = spec.parse()?;
    let params = opts.params(3)?;
    let ev = evaluate(spec, &params)?;
    let optimal = ev.report.passes(params.tol, params.tol);
    let text = match opts.format.unwrap_or(Format::Pretty) {
        Format::Pretty => verify_pretty(&ev, params.tol, optimal),
        Format::Csv => format!(
            "strategy,N,M,score,hermiticity_residual,min_gap,optimal\n{},{},{},{},{:e},{:e},{}\n",
            ev.strategy,
            ev.n,
            ev.m,
            sig12(ev.score),
            ev.report.hermiticity_residual,
            ev.report.min_gap(),
            optimal
        ),
        Format::Json => {
            let out = VerifyJson {
                strategy: &ev.strategy,
                n: ev.n,
                m: ev.m,
                theta: ev.theta,
                score: ev.score,
                hermiticity_residual: ev.report.hermiticity_residual,
                min_eig_gaps: &ev.report.min_eig_gaps,
                tol: params.tol,
                optimal,
                note: ev.note.as_deref(),
            };
            serde_json::to_string_pretty(&out)? + "\n"
        }
    };
    opts.emit(&text)?;
    Ok(if optimal { 0 } else { 1 })
}

fn verify_pretty(ev: &Evaluated, tol: f64, optimal: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "strategy             {}", ev.strategy);
    let _ = writeln!(s, "copies (N)           {}", ev.n);
    let _ = writeln!(s, "outcomes (M)         {}", ev.m);
    if let Some(theta) = ev.theta {
        let _ = writeln!(s, "theta                {}", sig12(theta));
    }
    let _ = writeln!(s, "score                {}", sig12(ev.score));
    let _ = writeln!(s, "hermiticity residual {:.3e}", ev.report.hermiticity_residual);
    let gaps: Vec<String> = ev.report.min_eig_gaps.iter().map(|g| format!("{g:.3e}")).collect();
    let _ = writeln!(s, "min eig(Gamma - W_j) {}", gaps.join(" "));
    let _ = writeln!(s, "tolerance            {tol:e}");
    if let Some(note) = &ev.note {
        let _ = writeln!(s, "optimizer            {note}");
    }
    let _ = writeln!(s, "optimal              {}", if optimal { "yes" } else { "no" });
    s
}

fn dump(object: &str, spec: Option<&str>, opts: &Opts) -> Result<u8, Failure> {
    let p = opts.params(3)?;
    let no_spec = |m: Matrix<f64>, basis| {
        if let Some(extra) = spec {
            return Err(Failure::usage(format!("'{object}' takes no argument, got '{extra}'")));
        }
        Ok((m, basis))
    };
    let (matrix, basis) = match object {
        "w0" | "w1" => {
            let j = usize::from(object == "w1");
            no_spec(binary_score_operator(p.n, p.theta, j)?.into_matrix(), BasisTag::UpDown)?
        }
        "w-diff" => no_spec(binary_diff_operator(p.n, p.theta)?, BasisTag::UpDown)?,
        "w-multi" => {
            let index = match spec {
                Some(s) => s
                    .parse::<usize>()
                    .map_err(|_| Failure::usage(format!("w-multi index must be an integer, got '{s}'")))?,
                None => 0,
            };
            let count = p.m.unwrap_or(3);
            (multi_score_operator(p.n, count, index)?.into_matrix(), BasisTag::UpDown)
        }
        "shift" => {
            let count = p.m.unwrap_or(p.n + 1);
            no_spec(shift_operator(p.n, count)?.matrix().clone(), BasisTag::UpDown)?
        }
        "p" => {
            let (_, _, eig) = optimal_binary_pom(p.n, p.theta)?;
            no_spec(diagonalizing_operator(&eig), BasisTag::UpDown)?
        }
        "pom" | "gamma" => {
            let spec = spec.ok_or_else(|| Failure::usage(format!("'{object}' needs a strategy")))?;
            let ev = evaluate(spec.parse()?, &p)?;
            if object == "pom" {
                (ev.first_element, ev.basis)
            } else {
                (ev.report.gamma, ev.basis)
            }
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown object '{other}' (expected w0, w1, w-diff, w-multi, shift, p, pom or gamma)"
            )))
        }
    };
    let text = match opts.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string(&MatrixDump::new(&matrix, basis))? + "\n",
        Format::Pretty => matrix_pretty(&matrix, basis),
        Format::Csv => matrix_csv(&matrix),
    };
    opts.emit(&text)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Fig1(opts) => fig1(opts),
        Command::Verify { strategy, opts } => verify(strategy, opts),
        Command::Dump { object, spec, opts } => dump(object, spec.as_deref(), opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
