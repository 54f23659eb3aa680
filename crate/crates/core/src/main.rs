use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

use teamcoil::benchmark::{decode_design, line_profile, BenchmarkConfig, DesignVector};
use teamcoil::field::{EvalPoint, FieldSolver};
use teamcoil::moo::{GenerationStats, NsgaConfig};
use teamcoil::pipeline::{optimize, run_record, write_outputs};
use teamcoil::runio::{default_configs, read_config, write_profile_csv, Timestamps};
use teamcoil::validation::validate_random;

/// Coil field evaluation and TEAM uniform-field benchmark optimization.
#[derive(Parser)]
#[command(name = "teamcoil", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print (Br, Bz) of a 20-turn layout at one point.
    Field {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        /// File with 10 inner radii (m), comma or newline separated.
        /// Defaults to the reference layout.
        #[arg(long)]
        layout_csv: Option<PathBuf>,
    },
    /// Compare the semi-analytical field with brute-force integration.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Write Br, Bz along a vertical line through the region of interest.
    Profile {
        #[arg(long)]
        config: Option<PathBuf>,
        /// 10 inner radii (m), comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 0.003)]
        r_line: f64,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value = "profile.csv")]
        out: PathBuf,
    },
    /// Run NSGA-II on the benchmark and write the run record and fronts.
    Optimize {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Record wall-clock start and end times in the run record.
        #[arg(long)]
        timestamps: bool,
    },
}

/// Exit status: 1 for domain failures, 2 for usage or configuration errors.
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<teamcoil::Error> for Failure {
    fn from(e: teamcoil::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_config(path: Option<&Path>) -> Result<(BenchmarkConfig, NsgaConfig), Failure> {
    match path {
        Some(p) => Ok(read_config(p)?),
        None => Ok(default_configs()),
    }
}

fn read_radii(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Failure::Usage(format!("{}: not a number: `{s}`", path.display())))
        })
        .collect()
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Field {
            config,
            r,
            z,
            layout_csv,
        } => {
            let (bench, _) = load_config(config.as_deref())?;
            let x = match layout_csv {
                Some(p) => DesignVector::new(read_radii(&p)?, &bench)?,
                None => DesignVector::reference(),
            };
            let layout = decode_design(&x, &bench)?;
            let p = EvalPoint::new(r, z)?;
            let s = FieldSolver::new(bench.quad)?
                .field(&layout, p)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            println!("Br={} T, Bz={} T", s.b_r, s.b_z);
        }
        Command::Validate {
            config,
            samples,
            seed,
            tolerance,
        } => {
            if samples == 0 {
                return Err(Failure::Usage("--samples must be at least 1".into()));
            }
            let (bench, _) = load_config(config.as_deref())?;
            let report = validate_random(samples, seed, bench.quad)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            println!(
                "samples={} max_rel_dev={:e} tolerance={:e}",
                report.cases, report.max_rel_dev, tolerance
            );
            if report.max_rel_dev.is_nan() || report.max_rel_dev >= tolerance {
                if let Some(c) = report.worst_case {
                    eprintln!("worst case: {:?} at {:?}", c.turn, c.point);
                }
                return Err(Failure::Domain("deviation exceeds tolerance".into()));
            }
        }
        Command::Profile {
            config,
            radii,
            r_line,
            n,
            out,
        } => {
            let (bench, _) = load_config(config.as_deref())?;
            let x = DesignVector::new(radii, &bench)?;
            let layout = decode_design(&x, &bench)?;
            let h = bench.roi_half_height;
            let samples = line_profile(&layout, r_line, -h, h, n, &bench.quad)?;
            write_profile_csv(&samples, &out)?;
            println!("wrote {} samples to {}", samples.len(), out.display());
        }
        Command::Optimize {
            config,
            out,
            seed,
            timestamps,
        } => {
            let (bench, mut nsga) = load_config(config.as_deref())?;
            if let Some(s) = seed {
                nsga.seed = s;
            }
            let started = now_ms();
            let mut log = |s: &GenerationStats| {
                eprintln!(
                    "gen {:>4} evals {:>6} archive {:>5} best_f1 {:.6e} best_f2 {:.6e} hv {}",
                    s.generation,
                    s.evaluations,
                    s.archive_size,
                    s.best.first().copied().unwrap_or(f64::NAN),
                    s.best.get(1).copied().unwrap_or(f64::NAN),
                    s.hypervolume
                        .map_or("-".to_string(), |v| format!("{v:.6e}")),
                );
            };
            let result = optimize(&bench, &nsga, Some(&mut log));
            let stamp = |finished| {
                timestamps.then_some(Timestamps {
                    started_unix_ms: started,
                    finished_unix_ms: finished,
                })
            };
            match result {
                Ok(outcome) => {
                    let record = run_record(&bench, &nsga, &outcome, stamp(now_ms()));
                    write_outputs(&out, &record, &outcome)?;
                    let min_f1 = outcome.history.last().and_then(|h| h.best.first().copied());
                    println!(
                        "evaluations={} archive={} min_f1={:e}",
                        outcome.evaluations,
                        outcome.archive.len(),
                        min_f1.unwrap_or(f64::NAN)
                    );
                }
                Err(aborted) => {
                    if aborted.partial.evaluations > 0 {
                        let record = run_record(&bench, &nsga, &aborted.partial, stamp(now_ms()));
                        write_outputs(&out, &record, &aborted.partial)?;
                    }
                    return Err(match aborted.error {
                        teamcoil::Error::EvaluatorFailure { .. } => {
                            Failure::Domain(aborted.error.to_string())
                        }
                        e => Failure::Usage(e.to_string()),
                    });
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
