use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wickrep_cli::{repl, run, Mode, RunConfig};

#[derive(Parser)]
#[command(name = "wickrep", version, about = "Fock and tail representations of q_ij-commuting isometries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Where to write the JSON report (decay tables go next to it as CSV).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run suites in parallel.
    #[arg(long, global = true)]
    parallel: bool,
    #[arg(long, global = true)]
    tol_exact: Option<f64>,
    #[arg(long, global = true)]
    tol_metric: Option<f64>,
    #[arg(long, global = true)]
    tol_inverted: Option<f64>,
    /// Number of letters, when no config is given.
    #[arg(long, global = true, default_value_t = 2)]
    d: usize,
    /// Uniform q_ij for i < j as `re` or `re,im`, when no config is given.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    q: String,
}

#[derive(Subcommand)]
enum Command {
    /// Fock space: Gram positivity, adjointness, relations, embeddings.
    FockCheck,
    /// Tail window: positivity, adjointness, relations, cross-class zeros.
    TailCheck,
    /// Dual isometries, P_n decay and the vacuum test.
    DualCheck,
    /// Normal-order WORD (e.g. "1* 2 1 2*"), or run the oracle sweep.
    NormalOrder { word: Option<String> },
    /// Every suite.
    All,
}

fn config(cli: &Cli, mode: Mode) -> Result<RunConfig, String> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(|e| e.to_string())?,
        None => {
            let parts: Vec<f64> = cli
                .q
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| format!("--q {:?}: {e}", cli.q)))
                .collect::<Result<_, _>>()?;
            let q = match parts[..] {
                [re] => [re, 0.0],
                [re, im] => [re, im],
                _ => return Err(format!("--q {:?}: expected `re` or `re,im`", cli.q)),
            };
            RunConfig::uniform(cli.d, q)
        }
    };
    c.mode = mode;
    c.parallel |= cli.parallel;
    if let Some(p) = &cli.out {
        c.output = Some(p.clone());
    }
    if let Some(t) = cli.tol_exact {
        c.tolerances.exact = t;
    }
    if let Some(t) = cli.tol_metric {
        c.tolerances.metric = t;
    }
    if let Some(t) = cli.tol_inverted {
        c.tolerances.inverted = t;
    }
    c.validate().map_err(|e| e.to_string())?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = match &cli.command {
        Command::FockCheck => Mode::FockCheck,
        Command::TailCheck => Mode::TailCheck,
        Command::DualCheck => Mode::DualCheck,
        Command::NormalOrder { .. } => Mode::NormalOrder,
        Command::All => Mode::All,
    };
    let cfg = match config(&cli, mode) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Command::NormalOrder { word: Some(w) } = &cli.command {
        let q = cfg.q_matrix().expect("validated");
        return match repl::normal_order_repl(w, &q) {
            Ok(s) => {
                println!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cfg.output {
        Some(p) => {
            if let Err(e) = report.write(p) {
                eprintln!("error: writing {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{}", report.to_json()),
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: value {:?}, tolerance {:?}", c.name, c.value, c.tolerance);
    }
    eprintln!("{} passed, {} failed", report.summary.passed, report.summary.failed);
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
