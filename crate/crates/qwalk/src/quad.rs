//! Gauss-Legendre quadrature.
//!
//! The weak-limit densities integrate smooth functions after a sine
//! substitution absorbs the inverse-square-root endpoint singularities, so a
//! fixed-order rule applied over a modest number of panels reaches full
//! double precision without adaptivity.

/// Nodes and weights of the n-point Gauss-Legendre rule on `[-1, 1]`.
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Legendre polynomial value and derivative at `x` by the three-term
/// recurrence; the derivative uses the standard endpoint-safe identity only
/// away from `x = ±1` (Newton iterates stay strictly inside).
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration from the Chebyshev-angle seeds.
    ///
    /// Panics if `n == 0`. Convergence takes a handful of iterations for any
    /// practical order; a fixed cap guards against stagnation on exotic
    /// inputs.
    pub fn new(n: usize) -> GaussLegendre {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..60 {
                let (p, d) = legendre_pair(n, x);
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_pair(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        // The seeds enumerate roots from the positive end; sort ascending so
        // callers see a canonical order.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]));
        let nodes_sorted = idx.iter().map(|&i| nodes[i]).collect();
        let weights_sorted = idx.iter().map(|&i| weights[i]).collect();
        GaussLegendre { nodes: nodes_sorted, weights: weights_sorted }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]` with a single application of the rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrates `f` over `[a, b]` split into `panels` equal subintervals.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        assert!(panels >= 1, "need at least one panel");
        let width = (b - a) / panels as f64;
        let mut acc = 0.0;
        for k in 0..panels {
            let lo = a + width * k as f64;
            acc += self.integrate(lo, lo + width, &mut f);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn two_point_rule_is_classical() {
        let gl = GaussLegendre::new(2);
        let r = 1.0 / 3.0f64.sqrt();
        assert!((gl.nodes()[0] + r).abs() < 1e-15);
        assert!((gl.nodes()[1] - r).abs() < 1e-15);
        assert!((gl.weights()[0] - 1.0).abs() < 1e-15);
        assert!((gl.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn five_point_rule_matches_tables() {
        let gl = GaussLegendre::new(5);
        assert!((gl.nodes()[4] - 0.906_179_845_938_664_0).abs() < 1e-14);
        assert!((gl.weights()[4] - 0.236_926_885_056_189_08).abs() < 1e-14);
        assert!((gl.nodes()[2]).abs() < 1e-15);
        assert!((gl.weights()[2] - 128.0 / 225.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 3, 10, 50] {
            let gl = GaussLegendre::new(n);
            let total: f64 = gl.weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "order {n}");
        }
    }

    #[test]
    fn exact_on_high_degree_polynomials() {
        // An n-point rule integrates degree 2n-1 exactly.
        let gl = GaussLegendre::new(50);
        let got = gl.integrate(-1.0, 1.0, |x| x.powi(98));
        assert!((got - 2.0 / 99.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_integral_to_machine_precision() {
        let gl = GaussLegendre::new(20);
        let got = gl.integrate(0.0, PI, f64::sin);
        assert!((got - 2.0).abs() < 1e-14);
    }

    #[test]
    fn composite_agrees_with_single_panel() {
        let gl = GaussLegendre::new(30);
        let single = gl.integrate(0.0, 2.0, |x| (3.0 * x).cos() * x.exp());
        let split = gl.integrate_composite(0.0, 2.0, 7, |x| (3.0 * x).cos() * x.exp());
        assert!((single - split).abs() < 1e-13);
    }

    #[test]
    fn arcsine_substitution_integrates_singular_density() {
        // After x = r sin t the two-peaked density with parameter r becomes
        // smooth, and its total mass is exactly 1.
        for &r in &[0.5f64.sqrt(), 0.8, 0.3] {
            let gl = GaussLegendre::new(50);
            let root = (1.0 - r * r).sqrt();
            let total = gl.integrate_composite(-FRAC_PI_2, FRAC_PI_2, 4, |t| {
                let s = r * t.sin();
                root / (PI * (1.0 - s * s))
            });
            assert!((total - 1.0).abs() < 1e-12, "r = {r}");
        }
    }
}
