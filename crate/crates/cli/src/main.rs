use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use aloff_wallach::report::{build_report, family_table, write_family_csv, ReportOptions};
use aloff_wallach::verify::{run_verify, CoefficientFamily, Tamper, VerifyOptions};
use clap::{Parser, Subcommand};

const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Volumes, curvature pinching and injectivity-radius bounds of Aloff-Wallach spaces.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bounds for W(p, q) as JSON.
    Report {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        /// Always run the oracle with this budget (0 disables it).
        #[arg(long)]
        oracle_budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate the W(n, n+1) family as CSV.
    Family {
        #[arg(long)]
        n_max: u64,
        /// Write to this file instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run every oracle-versus-closed-form check.
    Verify {
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        condition_samples: usize,
        /// Shift one coefficient, e.g. `a1:0.01`.
        #[arg(long, hide = true, value_parser = parse_tamper)]
        tamper: Option<Tamper>,
    },
}

fn parse_tamper(s: &str) -> Result<Tamper, String> {
    let (name, delta) = s.split_once(':').ok_or("expected NAME:DELTA")?;
    let mut chars = name.chars();
    let family = match chars.next() {
        Some('a') => CoefficientFamily::A,
        Some('b') => CoefficientFamily::B,
        Some('c') => CoefficientFamily::C,
        Some('d') => CoefficientFamily::D,
        _ => return Err(format!("unknown coefficient {name}")),
    };
    let j: usize = chars.as_str().parse().map_err(|_| format!("bad index in {name}"))?;
    if j > 2 {
        return Err(format!("index {j} out of range 0..=2"));
    }
    let delta = delta.parse().map_err(|_| format!("bad shift {delta}"))?;
    Ok(Tamper { family, j, delta })
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Report {
            p,
            q,
            oracle_budget,
            seed,
        } => {
            let opts = ReportOptions { oracle_budget, seed };
            match build_report(p, q, &opts) {
                Ok(r) => {
                    println!("{}", r.to_json());
                    if let Some(e) = &r.curvature_error {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_INPUT);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_INPUT)
                }
            }
        }
        Command::Family { n_max, csv } => {
            let rows = match family_table(n_max) {
                Ok(rows) => rows,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INPUT);
                }
            };
            let written = match &csv {
                Some(path) => File::create(path)
                    .map_err(|e| e.to_string())
                    .and_then(|f| write_family_csv(&rows, f).map_err(|e| e.to_string())),
                None => write_family_csv(&rows, io::stdout().lock()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_INPUT)
                }
            }
        }
        Command::Verify {
            budget,
            seed,
            tol,
            condition_samples,
            tamper,
        } => {
            let summary = run_verify(&VerifyOptions {
                budget,
                seed,
                tol,
                condition_samples,
                tamper,
            });
            let mut err = io::stderr().lock();
            for c in &summary.checks {
                let tag = match (c.passed, c.informational) {
                    (true, _) => "PASS",
                    (false, true) => "NOTE",
                    (false, false) => "FAIL",
                };
                let _ = writeln!(err, "{tag} {}: {}", c.name, c.detail);
            }
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary is serializable"));
            if summary.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
    }
}
