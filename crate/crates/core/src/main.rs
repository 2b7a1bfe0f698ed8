use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use combproof::formula::{Formula, TAUTOLOGY_VAR_CAP};
use combproof::io::{emit_figure, load_proof, run_differential_with, save_proof, Checkers, FuzzConfig, LoadedProof};
use combproof::proof::{check_net, verify};
use combproof::resolution::cliques;
use combproof::sequent::{prove_combinatorial, ProveError};

/// Exit codes: 0 accepted/valid, 1 rejected/invalid, 2 usage or parse error.
#[derive(Parser, Debug)]
#[command(name = "combproof", version, about = "Check and build combinatorial proofs of propositional formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide validity by truth table
    Taut { formula: String },
    /// Prove a tautology and print its combinatorial proof
    Prove {
        formula: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a proof document
    Check {
        file: PathBuf,
        /// Allow disconnected nets (overrides the document's flag when set)
        #[arg(long)]
        mix: bool,
    },
    /// List the cliques of a formula
    Cliques { formula: String },
    /// Check only the MLL net on the upper formula of a proof document
    NetCheck {
        file: PathBuf,
        #[arg(long)]
        mix: bool,
    },
    /// Print a Graphviz figure of a proof document
    Dot { file: PathBuf },
    /// Run the differential harness
    Fuzz {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_leaves: usize,
        #[arg(long, default_value_t = 3)]
        max_vars: usize,
    },
}

const ACCEPT: ExitCode = ExitCode::SUCCESS;

fn reject() -> ExitCode {
    ExitCode::from(1)
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_formula(text: &str) -> Result<Formula, ExitCode> {
    Formula::parse(text).map_err(usage)
}

fn load(path: &Path) -> Result<LoadedProof, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    load_proof(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Taut { formula } => {
            let f = parse_formula(&formula)?;
            f.check_tautology(TAUTOLOGY_VAR_CAP).map_err(usage)?;
            match f.falsifying_assignment() {
                None => {
                    println!("VALID");
                    Ok(ACCEPT)
                }
                Some(row) => {
                    let row: Vec<String> = row.iter().map(|(v, b)| format!("{v}={b}")).collect();
                    println!("INVALID: falsified by {}", row.join(", "));
                    Ok(reject())
                }
            }
        }
        Command::Prove { formula, out } => {
            let f = parse_formula(&formula)?;
            match prove_combinatorial(&f) {
                Ok(p) => {
                    let text = save_proof(&p);
                    match out {
                        Some(path) => {
                            fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                            println!("PROVED: {}", path.display());
                        }
                        None => print!("{text}"),
                    }
                    Ok(ACCEPT)
                }
                Err(ProveError::NotValid) => {
                    println!("INVALID: not a tautology");
                    Ok(reject())
                }
                Err(e) => {
                    eprintln!("internal error: {e}");
                    Ok(reject())
                }
            }
        }
        Command::Check { file, mix } => {
            let doc = load(&file)?;
            let verdict = verify(&doc.proof, mix || doc.mix);
            println!("{verdict}");
            Ok(if verdict.is_accepted() { ACCEPT } else { reject() })
        }
        Command::Cliques { formula } => {
            let f = parse_formula(&formula)?;
            for c in cliques(&f) {
                let labels: Vec<String> = c.leaves().iter().map(|&l| f.literal(l).to_string()).collect();
                println!("{c}: {}", labels.join(", "));
            }
            Ok(ACCEPT)
        }
        Command::NetCheck { file, mix } => {
            let doc = load(&file)?;
            let verdict = check_net(&doc.proof.upper, &doc.proof.linking, mix || doc.mix);
            println!("{verdict}");
            Ok(if verdict.is_accepted() { ACCEPT } else { reject() })
        }
        Command::Dot { file } => {
            let doc = load(&file)?;
            print!("{}", emit_figure(&doc.proof));
            Ok(ACCEPT)
        }
        Command::Fuzz { n, seed, max_leaves, max_vars } => {
            if max_leaves == 0 || max_vars == 0 {
                return Err(usage("--max-leaves and --max-vars must be at least 1"));
            }
            let config = FuzzConfig { max_leaves, max_vars, ..FuzzConfig::new(n, seed) };
            let report = run_differential_with(&config, &Checkers::default());
            println!("{report}");
            Ok(if report.is_clean() { ACCEPT } else { reject() })
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|code| code)
}
