//! Simulated binary crossover and polynomial mutation.

use rand::Rng;

use super::NsgaConfig;

fn clip(v: f64, (lo, hi): (f64, f64)) -> f64 {
    v.clamp(lo, hi)
}

/// SBX with distribution index `crossover_eta`. Fires with probability
/// `crossover_prob`; each gene is then recombined with probability 0.5 and
/// the two children are swapped with probability 0.5, so each child is
/// distributed symmetrically about the parents' midpoint.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    cfg: &NsgaConfig,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() >= cfg.crossover_prob {
        return (c1, c2);
    }
    let exponent = 1.0 / (cfg.crossover_eta + 1.0);
    for i in 0..p1.len() {
        if rng.random::<f64>() > 0.5 {
            continue;
        }
        let (y1, y2) = (p1[i], p2[i]);
        if (y1 - y2).abs() <= 1e-14 {
            continue;
        }
        let u: f64 = rng.random();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(exponent)
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(exponent)
        };
        let mid = 0.5 * (y1 + y2);
        let half = 0.5 * (y2 - y1).abs();
        let (mut a, mut b) = (mid - beta * half, mid + beta * half);
        if rng.random::<f64>() <= 0.5 {
            std::mem::swap(&mut a, &mut b);
        }
        c1[i] = clip(a, cfg.bounds[i]);
        c2[i] = clip(b, cfg.bounds[i]);
    }
    (c1, c2)
}

/// Bounded polynomial mutation with index `mutation_eta`, each gene with
/// probability `mutation_prob`.
pub fn polynomial_mutation<R: Rng + ?Sized>(g: &[f64], cfg: &NsgaConfig, rng: &mut R) -> Vec<f64> {
    let exponent = 1.0 / (cfg.mutation_eta + 1.0);
    g.iter()
        .zip(&cfg.bounds)
        .map(|(&y, &(lo, hi))| {
            if rng.random::<f64>() >= cfg.mutation_prob {
                return y;
            }
            let span = hi - lo;
            let d1 = (y - lo) / span;
            let d2 = (hi - y) / span;
            let r: f64 = rng.random();
            let dq = if r <= 0.5 {
                let xy = 1.0 - d1;
                let val = 2.0 * r + (1.0 - 2.0 * r) * xy.powf(cfg.mutation_eta + 1.0);
                val.powf(exponent) - 1.0
            } else {
                let xy = 1.0 - d2;
                let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * xy.powf(cfg.mutation_eta + 1.0);
                1.0 - val.powf(exponent)
            };
            clip(y + dq * span, (lo, hi))
        })
        .collect()
}
