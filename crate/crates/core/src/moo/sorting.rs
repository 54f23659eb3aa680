use crate::error::Result;

use super::{dominates, Individual};

/// Fast non-dominated sort. Returns fronts as index lists into `pop` and
/// writes each individual's rank.
pub fn fast_nondominated_sort(pop: &mut [Individual]) -> Result<Vec<Vec<usize>>> {
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&pop[i].objectives, &pop[j].objectives)? {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&pop[j].objectives, &pop[i].objectives)? {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            pop[i].rank = rank;
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
        rank += 1;
    }
    Ok(fronts)
}

/// Crowding distances of a set of objective vectors. Objectives with zero
/// range contribute nothing, extremes included.
pub fn crowding_distances(objectives: &[&[f64]]) -> Vec<f64> {
    let n = objectives.len();
    let mut dist = vec![0.0; n];
    if n == 0 {
        return dist;
    }
    let m = objectives[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    #[allow(clippy::needless_range_loop)]
    for k in 0..m {
        order.sort_by(|&a, &b| objectives[a][k].total_cmp(&objectives[b][k]));
        let lo = objectives[order[0]][k];
        let hi = objectives[order[n - 1]][k];
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        for w in 1..n.saturating_sub(1) {
            let i = order[w];
            if dist[i].is_finite() {
                let gap = objectives[order[w + 1]][k] - objectives[order[w - 1]][k];
                dist[i] += gap / range;
            }
        }
    }
    dist
}

/// Assigns crowding distance to the members of one front.
pub fn crowding_distance(pop: &mut [Individual], front: &[usize]) {
    let dist = {
        let objs: Vec<&[f64]> = front
            .iter()
            .map(|&i| pop[i].objectives.as_slice())
            .collect();
        crowding_distances(&objs)
    };
    for (&i, d) in front.iter().zip(dist) {
        pop[i].crowding = d;
    }
}
