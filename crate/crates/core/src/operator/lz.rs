//! The commutator remainder
//! `L^s_z w(x) = c_{1,s} ∫ (w(x) - w(y)) (e^{iyz} - e^{ixz}) |x-y|^{-1-2s} dy`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::cutoff::CutoffFunction;
use crate::operator::pointwise::panel_edges;
use crate::operator::profile::CompactProfile;
use crate::quadrature::{Adaptive, GaussLegendre, QuadratureSpec};
use crate::special::{check_order, frac_norm_const};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LzValue {
    pub re: f64,
    pub im: f64,
    /// Bound on the truncated asymptotic tails, already scaled by `c_{1,s}`.
    pub tail_bound: f64,
}

impl LzValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(&self) -> f64 {
        self.value().norm()
    }
}

const TARGET: f64 = 1e-10;

/// `∫_T^∞ e^{izζ} ζ^{-α} dζ` by repeated integration by parts, with the
/// magnitude of the first omitted term.
fn oscillatory_tail(z: f64, alpha: f64, t: f64) -> (Complex64, f64) {
    let izt = Complex64::new(0.0, z * t);
    let lead = -Complex64::from_polar(1.0, z * t) * t.powf(-alpha) / Complex64::new(0.0, z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        let next = term * (alpha + k) / izt;
        if next.norm() >= term.norm() || k > 60.0 {
            return (lead * sum, (lead * next).norm());
        }
        term = next;
        sum += term;
        k += 1.0;
        if term.norm() < 1e-18 {
            return (lead * sum, (lead * term * (alpha + k) / izt).norm());
        }
    }
}

/// `E(d, z) = ∫_d^∞ (e^{izζ} - 1) ζ^{-α} dζ`, with the tail truncation bound.
fn exterior_phase_integral(d: f64, z: f64, s: f64, rule: &GaussLegendre, tol: f64) -> Result<(Complex64, f64)> {
    let alpha = 1.0 + 2.0 * s;
    let period = 2.0 * PI / z.abs();
    let t = (2.0 * d).max(d + 32.0 * period);
    let scale = (0.25 * period).min(d.max(1e-300) * 64.0);
    let edges = panel_edges(d, t, scale.min(0.25 * period), std::iter::empty());
    let adaptive = Adaptive::new(rule);
    let mut f = |zeta: f64| Complex64::from_polar(zeta.powf(-alpha), z * zeta);
    let per = tol / (edges.len() - 1) as f64;
    let mut body = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        body += adaptive.integrate(&mut f, w[0], w[1], per)?;
    }
    let (tail, bound) = oscillatory_tail(z, alpha, t);
    Ok((body + tail - d.powf(-2.0 * s) / (2.0 * s), bound))
}

/// Evaluates `L^s_z w_σ(x)` for `x` inside the cutoff's interval.
pub fn lz_apply(w: &CutoffFunction, s: f64, z: f64, x: f64, quad: &QuadratureSpec) -> Result<LzValue> {
    check_order(s, "order s")?;
    quad.validate()?;
    let (a, b) = w.support();
    if !(x > a && x < b) {
        return Err(Error::precondition(format!("evaluation point {x} must lie inside ({a}, {b})")));
    }
    if !z.is_finite() {
        return Err(Error::precondition("frequency must be finite"));
    }
    if z == 0.0 {
        return Ok(LzValue { re: 0.0, im: 0.0, tail_bound: 0.0 });
    }
    let c = frac_norm_const(1, s)?;
    let alpha = 1.0 + 2.0 * s;
    let ell = w.sigma().min(1.0 / z.abs());
    let wx = w.value(x);
    let Some(dw) = w.first_derivative(x) else {
        return Err(Error::precondition("cutoff carries no derivative data"));
    };
    let rule = GaussLegendre::new(quad.gauss_order);
    let adaptive = Adaptive::new(&rule);
    let tol = TARGET * ell.powf(-2.0 * s) * (1.0 + z.abs() * ell);

    let mut total = Complex64::new(0.0, 0.0);
    let mut tail_bound = 0.0;
    for sign in [1.0, -1.0] {
        let d = if sign > 0.0 { b - x } else { x - a };
        let zz = sign * z;
        let core = (1e-4 * ell).min(0.25 * d);
        total += Complex64::new(0.0, -z * dw * core.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s));
        let knots = w.breakpoints().into_iter().map(|p| sign * (p - x));
        let edges = panel_edges(core, d, ell, knots);
        let per = tol / (edges.len() - 1) as f64;
        let mut f = |zeta: f64| {
            let dw = wx - w.value(x + sign * zeta);
            Complex64::new((zz * zeta).cos() - 1.0, (zz * zeta).sin()) * (dw * zeta.powf(-alpha))
        };
        for e in edges.windows(2) {
            total += adaptive.integrate(&mut f, e[0], e[1], per)?;
        }
        if wx != 0.0 {
            let (ext, bound) = exterior_phase_integral(d, zz, s, &rule, tol)?;
            total += wx * ext;
            tail_bound += wx.abs() * bound;
        }
    }
    let value = c * Complex64::from_polar(1.0, x * z) * total;
    Ok(LzValue { re: value.re, im: value.im, tail_bound: c * tail_bound })
}
