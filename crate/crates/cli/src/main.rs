//! `qfluct`: command-line front end for entanglement analysis.
//!
//! Exit codes: 0 success, 2 input error, 3 dimension error,
//! 4 orbit minimization did not converge.

mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qfluct_core::io::{parse_state, StateFile};
use qfluct_core::me_analysis::{self, DEFAULT_TOL};
use qfluct_core::oscillator::{self, fock_state, quadrature_total_variance, squeezed_vacuum};
use qfluct_core::{
    check_me, dof_report, me_basis, minimize_orbit, pauli_set, su_d_set, total_variance, Error, PureState,
    SloccOptions,
};

use output::{csv_number, to_json};

const EXIT_INPUT: u8 = 2;
const EXIT_DIMENSION: u8 = 3;
const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Parser)]
#[command(name = "qfluct", version, about = "Entanglement analysis through quantum fluctuations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total variance and maximum-entanglement verdict for a state file.
    Analyze {
        statefile: PathBuf,
        #[arg(long, value_enum, default_value_t = SetChoice::Pauli)]
        set: SetChoice,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Minimal-vector measure over the complexified local-group orbit.
    Measure {
        statefile: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Orthonormal basis of maximally entangled qubit states.
    Basis {
        #[arg(long)]
        qubits: usize,
    },
    /// Scan of the one-parameter three-qubit family on a uniform grid.
    FamilyScan {
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Quadrature variances of Fock or squeezed-vacuum states.
    Oscillator(OscillatorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SetChoice {
    Pauli,
    #[value(name = "su-d", alias = "su_d")]
    SuD,
}

#[derive(Args)]
struct OscillatorArgs {
    /// Fock level n.
    #[arg(long, conflicts_with = "squeeze", required_unless_present = "squeeze")]
    fock: Option<usize>,
    /// Squeezing parameter r.
    #[arg(long, allow_hyphen_values = true)]
    squeeze: Option<f64>,
    /// Truncation level; derived from n or r when absent.
    #[arg(long)]
    nmax: Option<usize>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Dimension(_) => EXIT_DIMENSION,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn load(path: &Path) -> Result<PureState, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok(parse_state(&text)?)
}

/// A successful run prints `stdout`; `code` is non-zero only for
/// non-convergence, which still produces a report.
struct Report {
    stdout: String,
    code: u8,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, code: 0 }
    }
}

fn analyze(path: &Path, set: SetChoice, tol: f64) -> Result<Report, Failure> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(input_error(format!("tolerance must be positive, got {tol}")));
    }
    let psi = load(path)?;
    let (name, set) = match set {
        SetChoice::Pauli => ("pauli", pauli_set(psi.system())?),
        SetChoice::SuD => ("su_d", su_d_set(psi.system())?),
    };
    let variance = total_variance(&psi, &set)?;
    let verdict = check_me(&psi, &set, tol)?;
    Ok(Report::ok(to_json(json!({
        "dims": psi.system().dims(),
        "set": name,
        "tol": tol,
        "variance": variance,
        "verdict": verdict,
        "dof": dof_report(psi.system()),
    }))))
}

fn measure(path: &Path, tol: Option<f64>, max_iters: Option<usize>, seed: u64) -> Result<Report, Failure> {
    let psi = load(path)?;
    let defaults = SloccOptions::default();
    let opts = SloccOptions {
        tol: tol.unwrap_or(defaults.tol),
        max_iters: max_iters.unwrap_or(defaults.max_iters),
        seed,
        ..defaults
    };
    opts.validate()?;
    let result = minimize_orbit(&psi, &opts)?;
    let code = if result.converged || result.null_cone { 0 } else { EXIT_NOT_CONVERGED };
    let summary = serde_json::to_value(result.summary()).expect("summary serializes");
    Ok(Report {
        stdout: to_json(summary),
        code,
    })
}

fn basis(qubits: usize) -> Result<Report, Failure> {
    if !(2..=12).contains(&qubits) {
        return Err(input_error(format!("--qubits must be between 2 and 12, got {qubits}")));
    }
    // One compact state-file object per line.
    let lines: Vec<String> = me_basis(qubits)?
        .iter()
        .map(|el| {
            let file = serde_json::to_value(StateFile::from_state(&el.state, Some(el.label()))).expect("state serializes");
            format!("  {}", output::round_value(file))
        })
        .collect();
    Ok(Report::ok(format!("[\n{}\n]\n", lines.join(",\n"))))
}

fn family_scan(points: usize) -> Result<Report, Failure> {
    if points < 2 {
        return Err(input_error(format!("--points must be at least 2, got {points}")));
    }
    let scan = me_analysis::family_scan(&me_analysis::uniform_grid(points), &SloccOptions::default())?;
    let mut out = String::from("x,total_variance,mu,three_tangle\n");
    for row in &scan.rows {
        let cells = [row.x, row.total_variance, row.mu, row.three_tangle].map(csv_number);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let footer = output::round_value(json!({
        "crossings": scan.crossings,
        "published_endpoints": [scan.published_endpoints.0, scan.published_endpoints.1],
        "v_w": scan.v_w,
    }));
    out.push_str(&format!("# {footer}\n"));
    Ok(Report::ok(out))
}

fn oscillator_report(args: &OscillatorArgs) -> Result<Report, Failure> {
    let (state, mut head) = match (args.fock, args.squeeze) {
        (Some(n), None) => {
            let n_max = args.nmax.unwrap_or((n + 10).max(40));
            let head = json!({
                "state": "fock",
                "n": n,
                "n_max": n_max,
                "formula": oscillator::fock_total_formula(n),
            });
            (fock_state(n, n_max)?, head)
        }
        (None, Some(r)) => {
            let n_max = args.nmax.unwrap_or(oscillator::required_nmax(r).max(40));
            let head = json!({
                "state": "squeezed_vacuum",
                "r": r,
                "n_max": n_max,
                "closed_form": oscillator::squeezed_total_closed_form(r),
                "published_formula": oscillator::squeezed_total_published(r),
            });
            (squeezed_vacuum(r, n_max)?, head)
        }
        _ => return Err(input_error("exactly one of --fock or --squeeze is required")),
    };
    let report = quadrature_total_variance(&state)?;
    let obj = head.as_object_mut().expect("object literal");
    obj.insert("expectations".into(), json!({"q": report.expectations[0], "p": report.expectations[1]}));
    obj.insert("variances".into(), json!({"q": report.variances[0], "p": report.variances[1]}));
    obj.insert("total".into(), json!(report.total));
    Ok(Report::ok(to_json(head)))
}

fn run(cli: Cli) -> Result<Report, Failure> {
    match cli.command {
        Command::Analyze { statefile, set, tol } => analyze(&statefile, set, tol),
        Command::Measure {
            statefile,
            tol,
            max_iters,
            seed,
        } => measure(&statefile, tol, max_iters, seed),
        Command::Basis { qubits } => basis(qubits),
        Command::FamilyScan { points } => family_scan(points),
        Command::Oscillator(args) => oscillator_report(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            let mut stdout = io::stdout().lock();
            let mut text = report.stdout;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Ok(()) => ExitCode::from(report.code),
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::from(report.code),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_INPUT)
                }
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
