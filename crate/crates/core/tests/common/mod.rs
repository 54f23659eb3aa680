//! Helpers shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamcoil::moo::{dominates, hypervolume_2d, nsga2_run, Individual, NsgaConfig, RunOutcome};

/// Peels off non-dominated sets by checking every pair again each round.
pub fn brute_force_fronts(objs: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..objs.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(&objs[j], &objs[i]).unwrap()))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Integer-valued objectives in a small range so ties and duplicates occur.
pub fn random_population(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Individual> {
    (0..n)
        .map(|_| {
            let obj = (0..m).map(|_| rng.random_range(0..6) as f64).collect();
            Individual::new(vec![0.0], obj)
        })
        .collect()
}

pub fn sort_matches_brute_force(populations: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..populations).all(|k| {
        let m = 2 + k % 2;
        let mut pop = random_population(&mut rng, 20, m);
        let objs: Vec<Vec<f64>> = pop.iter().map(|i| i.objectives.clone()).collect();
        let fast = teamcoil::moo::fast_nondominated_sort(&mut pop).unwrap();
        let brute = brute_force_fronts(&objs);
        let ranks_ok = brute
            .iter()
            .enumerate()
            .all(|(r, f)| f.iter().all(|&i| pop[i].rank == r));
        fast == brute && ranks_ok
    })
}

pub fn schaffer(x: &[f64]) -> Result<Vec<f64>, String> {
    Ok(vec![x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)])
}

pub fn schaffer_run(seed: u64) -> RunOutcome {
    let mut cfg = NsgaConfig::new(vec![(-10.0, 10.0)]);
    cfg.seed = seed;
    nsga2_run(&cfg, schaffer, None).expect("schaffer run")
}

/// Largest distance from an evenly spaced probe of the analytic front
/// `f2 = (sqrt(f1) - 2)^2`, `x` in `[0, 2]`, to its nearest archive point.
pub fn schaffer_front_gap(archive: &[Individual], probes: usize) -> f64 {
    (0..probes)
        .map(|k| {
            let x = 2.0 * k as f64 / (probes - 1) as f64;
            let (p1, p2) = (x * x, (x - 2.0) * (x - 2.0));
            archive
                .iter()
                .map(|m| (m.objectives[0] - p1).hypot(m.objectives[1] - p2))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Largest distance of an archive point above or below the analytic front.
pub fn schaffer_front_error(archive: &[Individual]) -> f64 {
    archive
        .iter()
        .map(|m| {
            let f1 = m.objectives[0];
            (m.objectives[1] - (f1.sqrt() - 2.0).powi(2)).abs()
        })
        .fold(0.0, f64::max)
}

pub fn hv_non_decreasing(run: &RunOutcome) -> bool {
    let hv: Vec<f64> = run.history.iter().map(|h| h.hypervolume.unwrap()).collect();
    hv.len() == run.history.len() && hv.windows(2).all(|w| w[1] >= w[0])
}

/// Archive hypervolume recomputed from scratch; points outside the
/// reference box add nothing.
pub fn archive_hypervolume(run: &RunOutcome) -> f64 {
    let r = run.hv_reference.as_ref().unwrap();
    let pts: Vec<[f64; 2]> = run
        .archive
        .members()
        .iter()
        .map(|m| [m.objectives[0], m.objectives[1]])
        .filter(|p| p[0] <= r[0] && p[1] <= r[1])
        .collect();
    hypervolume_2d(&pts, [r[0], r[1]]).unwrap()
}

pub fn pairwise_nondominated(members: &[Individual]) -> bool {
    members.iter().all(|a| {
        members
            .iter()
            .all(|b| !dominates(&a.objectives, &b.objectives).unwrap())
    })
}
