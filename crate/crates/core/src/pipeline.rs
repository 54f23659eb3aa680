//! Benchmark optimization end to end: run, assemble the record, write files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::benchmark::{Benchmark, BenchmarkConfig};
use crate::error::{Error, Result};
use crate::moo::{nsga2_run, GenerationStats, NsgaConfig, RunAborted, RunOutcome, RNG_ALGORITHM};
use crate::runio::{
    write_front_csv, write_pareto_csv, write_run_record, RunRecord, Timestamps, SCHEMA_VERSION,
};

pub const RUN_RECORD_FILE: &str = "run_record.json";
pub const PARETO_FILE: &str = "pareto.csv";
pub const LAST_GENERATION_FILE: &str = "last_generation.csv";

/// NSGA-II on the coil benchmark. Bounds are taken from `bench`.
pub fn optimize(
    bench: &BenchmarkConfig,
    nsga: &NsgaConfig,
    progress: Option<&mut dyn FnMut(&GenerationStats)>,
) -> std::result::Result<RunOutcome, RunAborted> {
    let problem = match Benchmark::new(*bench) {
        Ok(p) => p,
        Err(error) => {
            return Err(RunAborted {
                error,
                partial: Box::default(),
            })
        }
    };
    let mut cfg = nsga.clone();
    cfg.bounds = problem.bounds();
    nsga2_run(
        &cfg,
        |g: &[f64]| problem.evaluate_genes(g).map_err(|e| e.to_string()),
        progress,
    )
}

pub fn run_record(
    bench: &BenchmarkConfig,
    nsga: &NsgaConfig,
    outcome: &RunOutcome,
    timestamps: Option<Timestamps>,
) -> RunRecord {
    let mut nsga = nsga.clone();
    nsga.bounds = vec![(bench.radius_min, bench.radius_max); crate::benchmark::N_RADII];
    RunRecord {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        seed: nsga.seed,
        benchmark: *bench,
        nsga,
        evaluations: outcome.evaluations,
        hv_reference: outcome.hv_reference.clone(),
        history: outcome.history.clone(),
        archive: outcome.archive.members().to_vec(),
        timestamps,
    }
}

/// Writes the run record, cumulative archive and last front into `dir`.
pub fn write_outputs(dir: &Path, record: &RunRecord, outcome: &RunOutcome) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = vec![
        dir.join(RUN_RECORD_FILE),
        dir.join(PARETO_FILE),
        dir.join(LAST_GENERATION_FILE),
    ];
    write_run_record(record, &paths[0])?;
    write_pareto_csv(&outcome.archive, &paths[1])?;
    write_front_csv(&outcome.last_front(), &paths[2])?;
    Ok(paths)
}
