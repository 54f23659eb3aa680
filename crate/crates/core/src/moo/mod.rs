//! Real-coded NSGA-II with box bounds.

mod archive;
mod dominance;
mod engine;
mod hypervolume;
mod operators;
mod sorting;

pub use archive::ParetoArchive;
pub use dominance::dominates;
pub use engine::{
    environmental_selection, nsga2_run, GenerationStats, NsgaConfig, RunAborted, RunOutcome,
    RNG_ALGORITHM,
};
pub use hypervolume::hypervolume_2d;
pub use operators::{polynomial_mutation, sbx_crossover};
pub use sorting::{crowding_distance, crowding_distances, fast_nondominated_sort};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genes: Vec<f64>,
    pub objectives: Vec<f64>,
    /// Front index, 0 for the non-dominated front.
    #[serde(skip)]
    pub rank: usize,
    /// Infinite at front extremes.
    #[serde(skip)]
    pub crowding: f64,
}

impl Individual {
    pub fn new(genes: Vec<f64>, objectives: Vec<f64>) -> Self {
        Self {
            genes,
            objectives,
            rank: 0,
            crowding: 0.0,
        }
    }

    /// Crowded-comparison order: lower rank wins, then larger crowding.
    pub fn crowded_better(&self, other: &Individual) -> bool {
        self.rank < other.rank || (self.rank == other.rank && self.crowding > other.crowding)
    }
}
