use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{crowding_distances, dominates, Individual};

/// Mutually non-dominated set of evaluated individuals.
///
/// Candidates equal in every objective to an existing member are rejected.
/// With a finite capacity the most crowded member is evicted on overflow.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParetoArchive {
    members: Vec<Individual>,
    capacity: Option<usize>,
}

impl ParetoArchive {
    pub fn new(capacity: Option<usize>) -> Self {
        Self {
            members: Vec::new(),
            capacity,
        }
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    /// Returns whether `candidate` was admitted.
    pub fn insert(&mut self, candidate: &Individual) -> Result<bool> {
        for m in &self.members {
            if m.objectives == candidate.objectives
                || dominates(&m.objectives, &candidate.objectives)?
            {
                return Ok(false);
            }
        }
        let mut kept = Vec::with_capacity(self.members.len() + 1);
        for m in self.members.drain(..) {
            if !dominates(&candidate.objectives, &m.objectives)? {
                kept.push(m);
            }
        }
        self.members = kept;
        let mut c = candidate.clone();
        c.rank = 0;
        self.members.push(c);
        if let Some(cap) = self.capacity {
            while self.members.len() > cap.max(1) {
                self.evict_most_crowded();
            }
        }
        Ok(true)
    }

    fn evict_most_crowded(&mut self) {
        let dist = {
            let objs: Vec<&[f64]> = self
                .members
                .iter()
                .map(|m| m.objectives.as_slice())
                .collect();
            crowding_distances(&objs)
        };
        let mut worst = 0;
        for (i, d) in dist.iter().enumerate() {
            if *d <= dist[worst] {
                worst = i;
            }
        }
        self.members.remove(worst);
    }

    /// Exhaustive pairwise check.
    pub fn is_mutually_nondominated(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !dominates(&a.objectives, &b.objectives).unwrap_or(true))
        })
    }
}
