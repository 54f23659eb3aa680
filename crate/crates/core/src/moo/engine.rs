use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{
    crowding_distance, fast_nondominated_sort, hypervolume_2d, polynomial_mutation, sbx_crossover,
    Individual, ParetoArchive,
};

/// Recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsgaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    pub mutation_prob: f64,
    pub mutation_eta: f64,
    pub seed: u64,
    pub bounds: Vec<(f64, f64)>,
    /// Hypervolume reference for 2-objective runs. When absent it is taken
    /// from the initial population: worst value plus 10% of the range.
    pub hv_reference: Option<Vec<f64>>,
    /// `None` keeps every non-dominated point ever evaluated.
    pub archive_capacity: Option<usize>,
}

impl NsgaConfig {
    /// 100 x 100 with SBX(0.9, 15) and polynomial mutation (1/n, 20).
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        let n = bounds.len().max(1);
        Self {
            population: 100,
            generations: 100,
            crossover_prob: 0.9,
            crossover_eta: 15.0,
            mutation_prob: 1.0 / n as f64,
            mutation_eta: 20.0,
            seed: 0,
            bounds,
            hv_reference: None,
            archive_capacity: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.population < 4 || !self.population.is_multiple_of(2) {
            return bad(format!(
                "population must be even and >= 4, got {}",
                self.population
            ));
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        for (name, eta) in [
            ("crossover_eta", self.crossover_eta),
            ("mutation_eta", self.mutation_eta),
        ] {
            if !(eta.is_finite() && eta > 0.0) {
                return bad(format!("{name} must be positive, got {eta}"));
            }
        }
        if self.bounds.is_empty() {
            return bad("no decision variables".into());
        }
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return bad(format!("bounds of gene {i} are empty: [{lo}, {hi}]"));
            }
        }
        if let Some(r) = &self.hv_reference {
            if r.iter().any(|v| !v.is_finite()) {
                return bad("hv_reference must be finite".into());
            }
        }
        Ok(())
    }
}

/// One row of run history, taken after each generation's selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub evaluations: usize,
    pub archive_size: usize,
    /// Per-objective minimum over the archive.
    pub best: Vec<f64>,
    pub hypervolume: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    /// Final population, ordered by front then crowding.
    pub population: Vec<Individual>,
    pub archive: ParetoArchive,
    pub history: Vec<GenerationStats>,
    pub evaluations: usize,
    pub hv_reference: Option<Vec<f64>>,
}

impl RunOutcome {
    /// Rank-0 members of the final population.
    pub fn last_front(&self) -> Vec<Individual> {
        self.population
            .iter()
            .filter(|i| i.rank == 0)
            .cloned()
            .collect()
    }
}

/// A run that stopped early, with everything gathered up to that point.
#[derive(Debug)]
pub struct RunAborted {
    pub error: Error,
    pub partial: Box<RunOutcome>,
}

impl fmt::Display for RunAborted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for RunAborted {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Keeps the best `n` of `combined` by (rank, crowding). Whole fronts are
/// admitted in order; the split front is cut by descending crowding.
pub fn environmental_selection(mut combined: Vec<Individual>, n: usize) -> Result<Vec<Individual>> {
    let fronts = fast_nondominated_sort(&mut combined)?;
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for front in fronts {
        crowding_distance(&mut combined, &front);
        if chosen.len() + front.len() <= n {
            chosen.extend_from_slice(&front);
        } else {
            let mut f = front;
            f.sort_by(|&a, &b| combined[b].crowding.total_cmp(&combined[a].crowding));
            chosen.extend(f.into_iter().take(n - chosen.len()));
        }
        if chosen.len() == n {
            break;
        }
    }
    Ok(chosen.into_iter().map(|i| combined[i].clone()).collect())
}

fn tournament<'a, R: Rng>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    let a = &pop[rng.random_range(0..pop.len())];
    let b = &pop[rng.random_range(0..pop.len())];
    if b.crowded_better(a) {
        b
    } else {
        a
    }
}

fn evaluate_batch<E>(
    genes: Vec<Vec<f64>>,
    evaluator: &E,
    generation: usize,
) -> Result<Vec<Individual>>
where
    E: Fn(&[f64]) -> std::result::Result<Vec<f64>, String> + Sync,
{
    let results: Vec<_> = genes.par_iter().map(|g| evaluator(g)).collect();
    let mut out = Vec::with_capacity(genes.len());
    let mut width = None;
    for (g, r) in genes.into_iter().zip(results) {
        let objectives = r.map_err(|message| Error::EvaluatorFailure {
            generation,
            message,
        })?;
        if objectives.is_empty() || objectives.iter().any(|v| !v.is_finite()) {
            return Err(Error::EvaluatorFailure {
                generation,
                message: format!("evaluator returned {objectives:?}"),
            });
        }
        if *width.get_or_insert(objectives.len()) != objectives.len() {
            return Err(Error::EvaluatorFailure {
                generation,
                message: "inconsistent objective count".into(),
            });
        }
        out.push(Individual::new(g, objectives));
    }
    Ok(out)
}

fn derived_reference(pop: &[Individual]) -> Vec<f64> {
    let m = pop[0].objectives.len();
    (0..m)
        .map(|k| {
            let (lo, hi) = pop
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
                    (lo.min(i.objectives[k]), hi.max(i.objectives[k]))
                });
            let span = hi - lo;
            if span > 0.0 {
                hi + 0.1 * span
            } else {
                hi + 0.1 * hi.abs().max(1.0)
            }
        })
        .collect()
}

fn stats(
    generation: usize,
    evaluations: usize,
    archive: &ParetoArchive,
    reference: Option<&[f64]>,
) -> Result<GenerationStats> {
    let m = archive.members().first().map_or(0, |i| i.objectives.len());
    let best = (0..m)
        .map(|k| {
            archive
                .members()
                .iter()
                .map(|i| i.objectives[k])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let hypervolume = match reference {
        Some(r) if r.len() == 2 && m == 2 => {
            let pts: Vec<[f64; 2]> = archive
                .members()
                .iter()
                .map(|i| [i.objectives[0], i.objectives[1]])
                .filter(|p| p[0] <= r[0] && p[1] <= r[1])
                .collect();
            Some(hypervolume_2d(&pts, [r[0], r[1]])?)
        }
        _ => None,
    };
    Ok(GenerationStats {
        generation,
        evaluations,
        archive_size: archive.len(),
        best,
        hypervolume,
    })
}

/// Runs NSGA-II. The evaluator is called concurrently on each batch; all
/// random draws happen sequentially, so results depend only on the config.
pub fn nsga2_run<E>(
    cfg: &NsgaConfig,
    evaluator: E,
    mut progress: Option<&mut dyn FnMut(&GenerationStats)>,
) -> std::result::Result<RunOutcome, RunAborted>
where
    E: Fn(&[f64]) -> std::result::Result<Vec<f64>, String> + Sync,
{
    let mut out = RunOutcome {
        archive: ParetoArchive::new(cfg.archive_capacity),
        ..Default::default()
    };
    macro_rules! bail {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(error) => {
                    return Err(RunAborted {
                        error,
                        partial: Box::new(out),
                    })
                }
            }
        };
    }
    bail!(cfg.validate());

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.population;
    let init: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            cfg.bounds
                .iter()
                .map(|&(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
                .collect()
        })
        .collect();
    let pop = bail!(evaluate_batch(init, &evaluator, 0));
    out.evaluations += pop.len();
    for ind in &pop {
        bail!(out.archive.insert(ind));
    }
    out.hv_reference = match &cfg.hv_reference {
        Some(r) => Some(r.clone()),
        None if pop[0].objectives.len() == 2 => Some(derived_reference(&pop)),
        None => None,
    };
    out.population = bail!(environmental_selection(pop, n));
    let row = bail!(stats(
        0,
        out.evaluations,
        &out.archive,
        out.hv_reference.as_deref()
    ));
    if let Some(sink) = progress.as_mut() {
        sink(&row);
    }
    out.history.push(row);

    for generation in 1..=cfg.generations {
        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let a = tournament(&out.population, &mut rng);
            let b = tournament(&out.population, &mut rng);
            let (c1, c2) = sbx_crossover(&a.genes, &b.genes, cfg, &mut rng);
            children.push(polynomial_mutation(&c1, cfg, &mut rng));
            children.push(polynomial_mutation(&c2, cfg, &mut rng));
        }
        let offspring = bail!(evaluate_batch(children, &evaluator, generation));
        out.evaluations += offspring.len();
        for ind in &offspring {
            bail!(out.archive.insert(ind));
        }
        let mut combined = std::mem::take(&mut out.population);
        combined.extend(offspring);
        out.population = bail!(environmental_selection(combined, n));
        let row = bail!(stats(
            generation,
            out.evaluations,
            &out.archive,
            out.hv_reference.as_deref()
        ));
        if let Some(sink) = progress.as_mut() {
            sink(&row);
        }
        out.history.push(row);
    }
    Ok(out)
}
