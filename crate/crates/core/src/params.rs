//! Validated problem parameters and domain descriptors.

use serde::Serialize;

use crate::error::{Error, Result};

/// Scalar data of the mixed problem: dimension `N`, orders `s1 > s2`, shift `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    dim: u32,
    s1: f64,
    s2: f64,
    mu: f64,
}

impl ProblemParams {
    /// Requires `N ≥ 1`, `0 < s2 < s1 < 1` and a finite `μ`.
    pub fn new(dim: u32, s1: f64, s2: f64, mu: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension N must be at least 1"));
        }
        if !(s2 > 0.0 && s2 < s1 && s1 < 1.0) {
            return Err(Error::domain(format!(
                "orders must satisfy 0 < s2 < s1 < 1, got s1 = {s1}, s2 = {s2}"
            )));
        }
        if !mu.is_finite() {
            return Err(Error::domain(format!("shift mu must be finite, got {mu}")));
        }
        Ok(Self { dim, s1, s2, mu })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Same orders and dimension with another shift.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.dim, self.s1, self.s2, mu)
    }

    /// Order gap `s1 - s2`.
    pub fn gap(&self) -> f64 {
        self.s1 - self.s2
    }

    /// Standing assumption of every closed-form bound: `N > 2 s1`.
    pub fn require_bound_regime(&self) -> Result<()> {
        if (self.dim as f64) <= 2.0 * self.s1 {
            return Err(Error::precondition(format!(
                "bound formulas need N > 2 s1, got N = {}, s1 = {}",
                self.dim, self.s1
            )));
        }
        Ok(())
    }

    pub fn require_nonnegative_mu(&self) -> Result<()> {
        if self.mu < 0.0 {
            return Err(Error::precondition(format!("this bound needs mu >= 0, got {}", self.mu)));
        }
        Ok(())
    }

    /// Hypothesis of the upper bound: `s1 < (1 + s2) / 2`.
    pub fn require_upper_regime(&self) -> Result<()> {
        if self.s1 >= 0.5 * (1.0 + self.s2) {
            return Err(Error::precondition(format!(
                "upper bound needs s1 < (1 + s2)/2, got s1 = {}, s2 = {}",
                self.s1, self.s2
            )));
        }
        Ok(())
    }
}

/// Interval `(a, b)` with `n` interior nodes `x_i = a + i h`, `h = (b - a)/(n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain1D {
    a: f64,
    b: f64,
    n: usize,
}

impl Domain1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::domain(format!("interval needs finite a < b, got ({a}, {b})")));
        }
        if n == 0 {
            return Err(Error::domain("grid needs at least one interior node"));
        }
        Ok(Self { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of interior nodes (= number of hat functions).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.n + 1) as f64
    }

    pub fn volume(&self) -> f64 {
        self.b - self.a
    }

    /// Node `x_i`, `i = 0..=n+1` (the endpoints are `i = 0` and `i = n + 1`).
    pub fn node(&self, i: usize) -> f64 {
        if i == self.n + 1 {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    /// Same interval, different resolution.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.a, self.b, n)
    }

    /// Smallest `R ≥ 1` with the interval inside the ball `B_R(0)`.
    pub fn enclosing_radius(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(1.0)
    }

    pub fn formula_domain(&self) -> FormulaDomain {
        FormulaDomain { dim: 1, volume: self.volume() }
    }
}

/// Volume-only descriptor used when evaluating bound formulas in any dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormulaDomain {
    dim: u32,
    volume: f64,
}

impl FormulaDomain {
    pub fn new(dim: u32, volume: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::domain(format!("volume must be positive and finite, got {volume}")));
        }
        Ok(Self { dim, volume })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }
}
