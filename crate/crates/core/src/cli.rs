//! Command-line front end: `entgap sweep | measure | check`.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 property/assertion
//! failure. Sweeps are written as CSV (plot-ready), single-state results as
//! JSON; identical (command, flags, seed) produce byte-identical report
//! bodies.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::measures::{eof_two_qubit, hashing_quantity, negativity, ree_ppt, ReeOpts};
use crate::qlinalg::von_neumann_entropy;
use crate::states::{bell_diagonal, detect_mc, io, is_ppt, DensityMatrix, McVerdict};
use crate::thermo::{self, SweepReport};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "entgap",
    about = "Bipartite entanglement measures and the cost/distillation irreversibility gap",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep the Bell-diagonal family and report E_c, E_d^ppt and the gap
    Sweep(SweepArgs),
    /// Evaluate one measure on one state
    Measure(MeasureArgs),
    /// Verdicts and verification suites
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub p_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_end: f64,
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

/// One state, either from a JSON file or from the built-in family.
#[derive(Args, Debug)]
pub struct StateInput {
    /// State file (JSON, see README for the schema)
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Built-in family name (only `bell-diagonal`)
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter p
    #[arg(long)]
    pub p: Option<f64>,
}

impl StateInput {
    fn load(&self) -> Result<DensityMatrix> {
        match (&self.state, &self.family) {
            (Some(path), None) => io::read_state(path),
            (None, Some(name)) => {
                if name != "bell-diagonal" {
                    return Err(Error::BadParameter(format!("unknown family '{name}'")));
                }
                let p = self.p.ok_or_else(|| {
                    Error::BadParameter("--family bell-diagonal needs --p".into())
                })?;
                bell_diagonal(p)
            }
            (Some(_), Some(_)) => Err(Error::BadParameter(
                "--state and --family are mutually exclusive".into(),
            )),
            (None, None) => Err(Error::BadParameter(
                "provide --state <path> or --family bell-diagonal --p <x>".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MeasureName {
    Eof,
    Hashing,
    Negativity,
    Ree,
    Entropy,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[arg(long, value_enum)]
    pub measure: MeasureName,
    #[command(flatten)]
    pub input: StateInput,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the closest PPT state found by `--measure ree`
    #[arg(long)]
    pub sigma_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Detect the maximally-correlated pattern
    Mc(CheckStateArgs),
    /// Peres–Horodecki partial-transpose test
    Ppt(CheckStateArgs),
    /// The three MC-fact property suites
    Facts(FactsArgs),
    /// Relative-entropy contraction under random channels
    Uhlmann(UhlmannArgs),
}

#[derive(Args, Debug)]
pub struct CheckStateArgs {
    /// State file (JSON); equivalent to --state
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub input: StateInput,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CheckStateArgs {
    fn load(&self) -> Result<DensityMatrix> {
        if let Some(path) = &self.file {
            return io::read_state(path);
        }
        self.input.load()
    }
}

#[derive(Args, Debug)]
pub struct FactsArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 2)]
    pub d_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct UhlmannArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Entry point used by `main`; errors map to exit code 2.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Measure(args) => cmd_measure(args),
        Command::Check(check) => match check {
            CheckCommand::Mc(args) => cmd_check_mc(args),
            CheckCommand::Ppt(args) => cmd_check_ppt(args),
            CheckCommand::Facts(args) => cmd_check_facts(args),
            CheckCommand::Uhlmann(args) => cmd_check_uhlmann(args),
        },
    }
}

fn emit(body: &str, out: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = out {
        std::fs::write(path, body)?;
    }
    print!("{body}");
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v:.11e}")
}

fn sweep_csv(report: &SweepReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# entgap sweep p_start={} p_end={} steps={} seed={} max_iters={} tol={:e}",
        report.grid.p_start,
        report.grid.p_end,
        report.grid.steps,
        report.opts.seed,
        report.opts.max_iters,
        report.opts.tol
    );
    let _ = writeln!(
        s,
        "# units: ebits (log2); E_c from single-letter E_f (additive on this family)"
    );
    let _ = writeln!(s, "p,E_c,E_d_ppt,E_R_numeric,negativity,E_b,gap,ree_converged");
    for r in &report.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            num(r.p),
            num(r.e_c),
            num(r.e_d_ppt),
            num(r.e_r_numeric),
            num(r.negativity),
            num(r.e_b),
            num(r.gap),
            r.ree_converged
        );
    }
    s
}

fn sweep_json(report: &SweepReport) -> String {
    let records: Vec<_> = report
        .records
        .iter()
        .map(|r| {
            json!({
                "p": r.p,
                "E_c": r.e_c,
                "E_d_ppt": r.e_d_ppt,
                "E_R_numeric": r.e_r_numeric,
                "negativity": r.negativity,
                "E_b": r.e_b,
                "gap": r.gap,
                "ree_converged": r.ree_converged,
            })
        })
        .collect();
    let doc = json!({
        "command": "sweep",
        "units": "ebits (log2)",
        "p_start": report.grid.p_start,
        "p_end": report.grid.p_end,
        "steps": report.grid.steps,
        "seed": report.opts.seed,
        "max_iters": report.opts.max_iters,
        "tol": report.opts.tol,
        "records": records,
        "violations": report.violations,
        "pass": report.pass,
    });
    format!("{doc:#}\n")
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let opts = ReeOpts {
        max_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
        ..ReeOpts::default()
    };
    let report = thermo::sweep(args.p_start, args.p_end, args.steps, &opts)?;
    let body = match args.format {
        Format::Csv => sweep_csv(&report),
        Format::Json => sweep_json(&report),
    };
    emit(&body, &args.out)?;
    Ok(if report.pass { 0 } else { 3 })
}

fn cmd_measure(args: MeasureArgs) -> Result<i32> {
    let rho = args.input.load()?;
    let seed = args.seed;
    let mc = rho.dims().da == rho.dims().db
        && matches!(detect_mc(&rho, 1e-10), Ok(McVerdict::Mc(_)));

    let (name, value, meta) = match args.measure {
        MeasureName::Eof => {
            let label = if mc {
                "E_f = E_c (single-letter; E_f is additive on MC states)"
            } else {
                "E_f (single-letter; E_c requires regularization)"
            };
            (
                "eof",
                eof_two_qubit(&rho)?,
                json!({ "seed": seed, "note": label }),
            )
        }
        MeasureName::Hashing => (
            "hashing",
            hashing_quantity(&rho),
            json!({
                "seed": seed,
                "note": "S(rho_A) - S(rho); equals E_d^ppt = E_R^ppt on MC states"
            }),
        ),
        MeasureName::Negativity => (
            "negativity",
            negativity(&rho),
            json!({ "seed": seed }),
        ),
        MeasureName::Entropy => (
            "entropy",
            von_neumann_entropy(rho.mat())?,
            json!({ "seed": seed }),
        ),
        MeasureName::Ree => {
            let opts = ReeOpts {
                max_iters: args.max_iters,
                tol: args.tol,
                seed,
                ..ReeOpts::default()
            };
            let res = ree_ppt(&rho, &opts);
            if let Some(path) = &args.sigma_out {
                io::write_state(path, &res.closest_state)?;
            }
            let bound = if mc {
                "upper bound; tight on MC states (E_R^ppt identity)"
            } else {
                "upper bound only (non-MC input)"
            };
            (
                "ree",
                res.value,
                json!({
                    "seed": seed,
                    "converged": res.converged,
                    "iterations": res.iterations,
                    "residual": res.residual,
                    "bound": bound,
                }),
            )
        }
    };

    let doc = json!({
        "measure": name,
        "value": value,
        "units": "ebits (log2)",
        "meta": meta,
    });
    emit(&format!("{doc:#}\n"), &args.out)?;
    Ok(0)
}

fn complex_rows(m: &crate::qlinalg::CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn cmd_check_mc(args: CheckStateArgs) -> Result<i32> {
    let rho = args.load()?;
    let verdict = detect_mc(&rho, args.tol)?;
    let (doc, code) = match verdict {
        McVerdict::Mc(coeffs) => (
            json!({
                "check": "mc",
                "mc": true,
                "tol": args.tol,
                "a": complex_rows(coeffs.a()),
            }),
            0,
        ),
        McVerdict::NotMc { row, col, modulus } => (
            json!({
                "check": "mc",
                "mc": false,
                "tol": args.tol,
                "offending_entry": { "row": row, "col": col, "modulus": modulus },
            }),
            3,
        ),
    };
    emit(&format!("{doc:#}\n"), &args.out)?;
    Ok(code)
}

fn cmd_check_ppt(args: CheckStateArgs) -> Result<i32> {
    let rho = args.load()?;
    let check = is_ppt(&rho, args.tol);
    let doc = json!({
        "check": "ppt",
        "ppt": check.is_ppt,
        "min_pt_eigenvalue": check.min_pt_eigenvalue,
        "tol": args.tol,
    });
    emit(&format!("{doc:#}\n"), &args.out)?;
    Ok(if check.is_ppt { 0 } else { 3 })
}

fn cmd_check_facts(args: FactsArgs) -> Result<i32> {
    let report = thermo::verify_mc_facts(args.samples, args.d_max, args.seed)?;
    let per_d: Vec<_> = report
        .per_d
        .iter()
        .map(|c| {
            json!({
                "d": c.d,
                "samples": c.samples,
                "fact1_passes": c.fact1_passes,
                "fact2_passes": c.fact2_passes,
                "fact3_passes": c.fact3_passes,
                "fact1_worst_defect": c.fact1_worst_defect,
                "fact2_worst_defect": c.fact2_worst_defect,
                "fact3_worst_defect": c.fact3_worst_defect,
            })
        })
        .collect();
    let doc = json!({
        "check": "facts",
        "seed": report.seed,
        "per_d": per_d,
        "pass": report.pass,
    });
    emit(&format!("{doc:#}\n"), &args.out)?;
    Ok(if report.pass { 0 } else { 3 })
}

fn cmd_check_uhlmann(args: UhlmannArgs) -> Result<i32> {
    let report = thermo::uhlmann_suite(args.trials, args.seed)?;
    let doc = json!({
        "check": "uhlmann",
        "seed": report.seed,
        "trials": report.trials,
        "violations": report.violations,
        "max_violation": report.max_violation,
    });
    emit(&format!("{doc:#}\n"), &args.out)?;
    Ok(if report.violations == 0 { 0 } else { 3 })
}
