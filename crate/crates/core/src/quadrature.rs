//! Gauss–Legendre rules and a recursive adaptive panel integrator.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tuning knobs shared by the singular-integral routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Points per Gauss–Legendre panel.
    pub gauss_order: usize,
    /// Radius of the graded region around the kernel singularity, in units of
    /// the integrand's length scale.
    pub split_radius_factor: f64,
    /// Minimum truncation radius for oscillatory tails (0 = chosen from the data).
    pub tail_radius: f64,
    /// Relative tolerance per panel / per matrix entry.
    pub per_entry_rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { gauss_order: 16, split_radius_factor: 1.0, tail_radius: 0.0, per_entry_rel_tol: 1e-8 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.gauss_order < 4 {
            return Err(Error::precondition(format!("gauss_order must be >= 4, got {}", self.gauss_order)));
        }
        if !(self.split_radius_factor > 0.0 && self.per_entry_rel_tol > 0.0 && self.tail_radius >= 0.0) {
            return Err(Error::precondition("quadrature tolerances and radii must be positive"));
        }
        Ok(())
    }
}

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
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
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the rule on [a, b].
    pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(&self, a: f64, b: f64, mut f: F) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }

    /// Mapped nodes and weights on [a, b].
    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + half * x, w * half))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Values an integrator can accumulate (real or complex).
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Globally adaptive bisection: the panel with the largest error estimate
/// (one-panel versus two-half difference) is split until the summed
/// estimate drops below `tol` (absolute).
pub struct Adaptive<'a> {
    pub rule: &'a GaussLegendre,
    pub max_panels: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    left: T,
    right: T,
    err: f64,
}

impl<'a> Adaptive<'a> {
    pub fn new(rule: &'a GaussLegendre) -> Self {
        Self { rule, max_panels: 2000 }
    }

    fn panel<T: QuadValue, F: FnMut(f64) -> T>(&self, f: &mut F, a: f64, b: f64, whole: T) -> Panel<T> {
        let m = 0.5 * (a + b);
        let left = self.rule.integrate(a, m, &mut *f);
        let right = self.rule.integrate(m, b, &mut *f);
        let err = (left + right - whole).magnitude();
        Panel { a, b, left, right, err }
    }

    pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(&self, f: &mut F, a: f64, b: f64, tol: f64) -> Result<T> {
        let whole = self.rule.integrate(a, b, &mut *f);
        let mut panels = vec![self.panel(f, a, b, whole)];
        loop {
            let total_err: f64 = panels.iter().map(|p| p.err).sum();
            if total_err <= tol {
                break;
            }
            let (worst, _) = panels
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
                .expect("panel list is never empty");
            let p = panels.swap_remove(worst);
            let m = 0.5 * (p.a + p.b);
            if panels.len() + 2 > self.max_panels || m <= p.a || m >= p.b {
                return Err(Error::numeric(format!(
                    "adaptive quadrature on [{a:.6e}, {b:.6e}] did not reach tolerance {tol:.3e} (estimate {total_err:.3e})"
                )));
            }
            panels.push(self.panel(f, p.a, m, p.left));
            panels.push(self.panel(f, m, p.b, p.right));
        }
        Ok(panels.iter().fold(T::default(), |acc, p| acc + p.left + p.right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        for n in [4, 7, 16, 32] {
            let g = GaussLegendre::new(n);
            let wsum: f64 = g.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14);
            for p in 0..(2 * n) {
                let got = g.integrate(0.0, 1.0, |x| x.powi(p as i32));
                assert!((got - 1.0 / (p as f64 + 1.0)).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let g = GaussLegendre::new(8);
        let ad = Adaptive::new(&g);
        let got: f64 = ad.integrate(&mut |x: f64| x.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert!((got - 2.0).abs() < 1e-8);
    }

    #[test]
    fn adaptive_complex() {
        let g = GaussLegendre::new(16);
        let ad = Adaptive::new(&g);
        let z: Complex64 = ad
            .integrate(&mut |x: f64| Complex64::new(0.0, 3.0 * x).exp(), 0.0, 2.0, 1e-13)
            .unwrap();
        let want = (Complex64::new(0.0, 6.0).exp() - 1.0) / Complex64::new(0.0, 3.0);
        assert!((z - want).norm() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        assert!(QuadratureSpec { gauss_order: 3, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { per_entry_rel_tol: 0.0, ..Default::default() }.validate().is_err());
    }
}
