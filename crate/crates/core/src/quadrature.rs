//! Gauss–Legendre rules.

use std::f64::consts::PI;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on P_n from the Chebyshev-like
    /// initial guesses. Panics if `n == 0`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Node/weight pairs mapped affinely onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A composite rule: `subintervals` uniform panels of `nodes_per_subinterval`
/// Gauss–Legendre points each.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    rule: GaussLegendre,
    subintervals: usize,
}

impl CompositeRule {
    pub fn new(nodes_per_subinterval: usize, subintervals: usize) -> Self {
        assert!(subintervals > 0);
        Self {
            rule: GaussLegendre::new(nodes_per_subinterval),
            subintervals,
        }
    }

    /// All (abscissa, weight) pairs over [a, b].
    pub fn points(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let h = (b - a) / self.subintervals as f64;
        (0..self.subintervals)
            .flat_map(|k| {
                let lo = a + h * k as f64;
                self.rule.mapped(lo, lo + h)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule() {
        let gl = GaussLegendre::new(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((gl.nodes()[0] + x).abs() < 1e-15);
        assert!((gl.nodes()[1] - x).abs() < 1e-15);
        assert!((gl.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials_up_to_2n_minus_1() {
        for n in [3usize, 8, 17, 32, 64] {
            let gl = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            // int_0^1 x^deg dx = 1/(deg+1)
            let v = gl.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1usize, 5, 32, 128, 256] {
            let s: f64 = GaussLegendre::new(n).weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn composite_covers_interval() {
        let rule = CompositeRule::new(4, 3);
        let pts = rule.points(0.0, 2.0 * PI);
        assert_eq!(pts.len(), 12);
        let v: f64 = pts.iter().map(|(x, w)| w * x.cos().powi(2)).sum();
        assert!((v - PI).abs() < 1e-3);
    }
}
