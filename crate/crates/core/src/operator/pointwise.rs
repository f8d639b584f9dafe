//! Pointwise `(-Δ)^s u(x)` through the second-difference form
//! `c_{1,s} ∫_0^∞ (2u(x) - u(x+ζ) - u(x-ζ)) ζ^{-1-2s} dζ`.

use crate::error::{Error, Result};
use crate::operator::profile::CompactProfile;
use crate::quadrature::{Adaptive, GaussLegendre, QuadratureSpec};
use crate::special::{check_order, frac_norm_const};

/// Relative size of the Taylor-regularized core `[0, δ]` against the profile's length scale.
const CORE_FRACTION: f64 = 1e-4;
/// Absolute accuracy target for the quadrature part, relative to `sup|u| ℓ^{-2s}`.
const TARGET: f64 = 1e-10;

/// Sorted, deduplicated panel edges on `[start, end]`: geometric from `start`
/// up to `scale`, the given interior knots, and chunks no longer than `scale`.
pub(crate) fn panel_edges(start: f64, end: f64, scale: f64, knots: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut edges = vec![start, end];
    let mut g = 2.0 * start;
    while g < scale.min(end) {
        edges.push(g);
        g *= 2.0;
    }
    edges.extend(knots.into_iter().filter(|&k| k > start && k < end));
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * end.abs().max(1.0));
    let mut out = Vec::with_capacity(edges.len());
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = ((hi - lo) / scale).ceil().max(1.0) as usize;
        for p in 0..pieces {
            out.push(lo + (hi - lo) * p as f64 / pieces as f64);
        }
    }
    out.push(end);
    out
}

pub fn pointwise_fraclap<P: CompactProfile + ?Sized>(u: &P, s: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_order(s, "order s")?;
    quad.validate()?;
    if !x.is_finite() {
        return Err(Error::precondition("evaluation point must be finite"));
    }
    let ell = u.length_scale();
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::precondition("profile length scale must be positive"));
    }
    let core = CORE_FRACTION * ell;
    let (Some(d2p), Some(d2m)) = (u.second_derivative(x + 0.5 * core), u.second_derivative(x - 0.5 * core)) else {
        return Err(Error::precondition("pointwise evaluation needs second-derivative data on the profile"));
    };
    let (lo, hi) = u.support();
    let ux = u.value(x);
    let tail_start = (x - lo).abs().max((hi - x).abs()).max(quad.tail_radius).max(2.0 * core);

    let near = -0.5 * (d2p + d2m) * core.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    let knots = u.breakpoints().into_iter().chain([lo, hi]).map(|p| (x - p).abs());
    let edges = panel_edges(core, tail_start, ell, knots);
    let rule = GaussLegendre::new(quad.gauss_order);
    let adaptive = Adaptive::new(&rule);
    let tol = TARGET * u.sup_abs().max(f64::MIN_POSITIVE) * ell.powf(-2.0 * s) / (edges.len() - 1) as f64;
    let mut f = |z: f64| (2.0 * ux - u.value(x + z) - u.value(x - z)) * z.powf(-1.0 - 2.0 * s);
    let mut body = 0.0;
    for w in edges.windows(2) {
        body += adaptive.integrate(&mut f, w[0], w[1], tol)?;
    }
    let tail = 2.0 * ux * tail_start.powf(-2.0 * s) / (2.0 * s);
    Ok(frac_norm_const(1, s)? * (near + body + tail))
}
