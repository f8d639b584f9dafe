//! The boundary cutoff `w_σ = η0(ρ/σ)` on an interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::profile::CompactProfile;
use crate::params::Domain1D;

/// Cubic smoothstep `3t^2 - 2t^3` clamped to [0, 1].
pub fn eta0(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * (3.0 - 2.0 * t)
    }
}

fn eta0_d1(t: f64) -> f64 {
    if (0.0..1.0).contains(&t) { 6.0 * t * (1.0 - t) } else { 0.0 }
}

fn eta0_d2(t: f64) -> f64 {
    if (0.0..1.0).contains(&t) { 6.0 - 12.0 * t } else { 0.0 }
}

/// `max |η0'|`.
pub const K1: f64 = 1.5;
/// `max |η0''|`.
pub const K2: f64 = 6.0;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CutoffFunction {
    sigma: f64,
    domain: Domain1D,
}

impl CutoffFunction {
    /// Needs `0 < σ ≤ (b-a)/2` so the two transition layers do not overlap.
    pub fn new(domain: Domain1D, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= 0.5 * domain.volume()) {
            return Err(Error::precondition(format!(
                "cutoff width must lie in (0, {}], got {sigma}",
                0.5 * domain.volume()
            )));
        }
        Ok(Self { sigma, domain })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn domain(&self) -> &Domain1D {
        &self.domain
    }

    pub fn k1(&self) -> f64 {
        K1
    }

    pub fn k2(&self) -> f64 {
        K2
    }

    /// Distance to the complement, with `∂ρ/∂x`.
    fn rho(&self, x: f64) -> (f64, f64) {
        let (a, b) = (self.domain.a(), self.domain.b());
        if x <= a || x >= b {
            return (0.0, 0.0);
        }
        if x - a <= b - x { (x - a, 1.0) } else { (b - x, -1.0) }
    }
}

impl CompactProfile for CutoffFunction {
    fn value(&self, x: f64) -> f64 {
        eta0(self.rho(x).0 / self.sigma)
    }

    fn first_derivative(&self, x: f64) -> Option<f64> {
        let (r, dr) = self.rho(x);
        Some(eta0_d1(r / self.sigma) * dr / self.sigma)
    }

    fn second_derivative(&self, x: f64) -> Option<f64> {
        let (r, _) = self.rho(x);
        if x <= self.domain.a() || x >= self.domain.b() {
            return Some(0.0);
        }
        Some(eta0_d2(r / self.sigma) / (self.sigma * self.sigma))
    }

    fn support(&self) -> (f64, f64) {
        (self.domain.a(), self.domain.b())
    }

    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = (self.domain.a(), self.domain.b());
        vec![a, a + self.sigma, b - self.sigma, b]
    }

    fn length_scale(&self) -> f64 {
        self.sigma
    }

    fn sup_abs(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_constants() {
        let k1 = (0..=1000).map(|k| eta0_d1(k as f64 / 1000.0)).fold(0.0, f64::max);
        assert!((k1 - K1).abs() < 1e-12);
        assert!((eta0_d2(0.0) - K2).abs() < 1e-15);
        assert_eq!(eta0(-1.0), 0.0);
        assert_eq!(eta0(2.0), 1.0);
    }

    #[test]
    fn cutoff_shape() {
        let dom = Domain1D::new(-1.0, 1.0, 4).unwrap();
        let w = CutoffFunction::new(dom, 0.2).unwrap();
        assert_eq!(w.value(0.0), 1.0);
        assert_eq!(w.value(0.8), 1.0);
        assert_eq!(w.value(1.2), 0.0);
        assert!((w.value(-0.9) - 0.5).abs() < 1e-15);
        for k in 0..400 {
            let v = w.value(-1.2 + 0.006 * k as f64);
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(CutoffFunction::new(dom, 1.5).is_err());
        assert!(CutoffFunction::new(dom, 0.0).is_err());
    }
}
