//! Adaptive composite Gauss–Legendre quadrature.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared 20-point rule.
    pub fn standard() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(20))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Single application of the rule on `[a, b]`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    /// Maximum bisection depth.
    pub max_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-13,
            max_refinements: 30,
        }
    }
}

const ROUNDOFF_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Integrates `f` over `[a, b]` by recursive bisection until the one-panel and
/// two-panel estimates agree to the panel's share of `abs_tol` (or to a few
/// ulps of the panel value, whichever is larger).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(cfg.abs_tol > 0.0) {
        return Err(Error::Config("quadrature tolerance must be positive"));
    }
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::standard();
    let whole = rule.apply(&f, a, b);
    refine(&f, rule, a, b, whole, cfg.abs_tol, cfg.max_refinements).map_err(|_| Error::Quadrature {
        tol: cfg.abs_tol,
        refinements: cfg.max_refinements,
    })
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth_left: usize,
) -> std::result::Result<f64, ()> {
    let mid = 0.5 * (a + b);
    let left = rule.apply(f, a, mid);
    let right = rule.apply(f, mid, b);
    let split = left + right;
    if !split.is_finite() {
        return Err(());
    }
    // below the roundoff floor further bisection cannot help
    if (split - whole).abs() <= tol.max(ROUNDOFF_FLOOR * split.abs()) {
        return Ok(split);
    }
    if depth_left == 0 {
        return Err(());
    }
    let left = refine(f, rule, a, mid, left, 0.5 * tol, depth_left - 1)?;
    Ok(left + refine(f, rule, mid, b, right, 0.5 * tol, depth_left - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // exact through degree 9
        let got = rule.apply(&|x: f64| x.powi(8) + x.powi(3), -1.0, 1.0);
        assert!((got - 2.0 / 9.0).abs() < 1e-15);
        let weights: f64 = GaussLegendre::new(20).weights.iter().sum();
        assert!((weights - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // ∫_0^1 dx / (1e-4 + x^2) = atan(100) * 100
        let got = integrate(
            |x| 1.0 / (1e-4 + x * x),
            0.0,
            1.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        let exact = 100.0 * 100f64.atan();
        assert!((got - exact).abs() < 1e-10, "{got} vs {exact}");
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let cfg = QuadratureConfig::default();
        let a = integrate(f64::sin, 0.0, 2.0, &cfg).unwrap();
        let b = integrate(f64::sin, 2.0, 0.0, &cfg).unwrap();
        assert!((a + b).abs() < 1e-15);
        assert!((a - (1.0 - 2f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn failure_when_depth_exhausted() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-13,
            max_refinements: 1,
        };
        let r = integrate(|x: f64| x.abs().sqrt().recip(), 1e-12, 1.0, &cfg);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
