//! Closed-form constants and the two sides of every eigenvalue inequality.
//!
//! All functions are pure; parameter validation goes through
//! [`ProblemParams`] so no gamma call ever sees a non-positive argument.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{FormulaDomain, ProblemParams};
use crate::special::{check_order, gamma, sphere_area, unit_ball_volume};

/// Weyl constant `a(N, s) = (2π)^{2s} |B_1|^{-2s/N}`.
pub fn weyl_const(n: u32, s: f64) -> Result<f64> {
    check_order(s, "order s")?;
    let ball = unit_ball_volume(n)?;
    Ok((2.0 * PI).powf(2.0 * s) * ball.powf(-2.0 * s / n as f64))
}

/// Sum-law constant `N/(N+2s) · a(N, s)`; also the `s2 → 0` limit of `b1`.
pub fn bly_limit_constant(n: u32, s: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(nf / (nf + 2.0 * s) * weyl_const(n, s)?)
}

/// Every explicit constant attached to a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    /// `a(N, s1 - s2)`.
    pub a_weyl_gap: f64,
    /// `a(N, s1)`.
    pub a_weyl_s1: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    /// Fundamental-solution constant `a_{N,s2}` of `(-Δ)^{s2}`.
    pub a_ns2: f64,
    /// `ã_{N,s2} = a_{N,s2} / s2`.
    pub a_ns2_tilde: f64,
    /// Rearrangement constant `a_0`.
    pub a0: f64,
}

/// `2^{-(N+1+2s2)} π^{-3N/2} ω^{2-2s2/N} Γ((N-2s2)/2)/Γ(s2+1) N^{2s2/N}`,
/// the bracket raised to a power in the `b1` and `b2` displays.
fn bly_bracket(params: &ProblemParams) -> Result<f64> {
    let nf = params.dim() as f64;
    let s2 = params.s2();
    let omega = sphere_area(params.dim())?;
    Ok(2f64.powf(-(nf + 1.0 + 2.0 * s2))
        * PI.powf(-1.5 * nf)
        * omega.powf(2.0 - 2.0 * s2 / nf)
        * gamma((nf - 2.0 * s2) / 2.0)?
        / gamma(s2 + 1.0)?
        * nf.powf(2.0 * s2 / nf))
}

fn b1_prefactor(params: &ProblemParams) -> f64 {
    let nf = params.dim() as f64;
    let (s1, s2) = (params.s1(), params.s2());
    (2.0 * s2 + nf).powf((2.0 * s1 + nf) / (2.0 * s2 + nf)) / (2.0 * s1 + nf)
}

/// `a_{N,s2} = 2^{-2s2} π^{-N/2} Γ((N-2s2)/2) / Γ(s2)`.
pub fn fundamental_solution_const(n: u32, s2: f64) -> Result<f64> {
    check_order(s2, "order s2")?;
    let nf = n as f64;
    if nf <= 2.0 * s2 {
        return Err(Error::precondition(format!("a_(N,s2) needs N > 2 s2, got N = {n}, s2 = {s2}")));
    }
    Ok(4f64.powf(-s2) * PI.powf(-nf / 2.0) * gamma((nf - 2.0 * s2) / 2.0)? / gamma(s2)?)
}

/// `a_0 = N^{2s2/N} ω^{1-2s2/N} / (2 s2)`.
pub fn rearrangement_const(n: u32, s2: f64) -> Result<f64> {
    check_order(s2, "order s2")?;
    let nf = n as f64;
    let omega = sphere_area(n)?;
    Ok(nf.powf(2.0 * s2 / nf) * omega.powf(1.0 - 2.0 * s2 / nf) / (2.0 * s2))
}

/// `b1` through the intermediate constants of the lower-bound argument:
/// `(2s2+N)^{(2s1+N)/(2s2+N)}/(2s1+N) · ((2π)^{-N} a_{N,s2} a_0 ω)^{-2(s1-s2)/(2s2+N)}`.
pub fn b1_via_intermediates(params: &ProblemParams) -> Result<f64> {
    params.require_bound_regime()?;
    let n = params.dim();
    let nf = n as f64;
    let m1_unit = (2.0 * PI).powf(-nf)
        * fundamental_solution_const(n, params.s2())?
        * rearrangement_const(n, params.s2())?
        * sphere_area(n)?;
    Ok(b1_prefactor(params) * m1_unit.powf(-2.0 * params.gap() / (2.0 * params.s2() + nf)))
}

/// `b3 = (2π)^{2(s1-s2)} ω^{-2(s1-s2)/N} N^{1+2(s1-s2)/N} / (N + 2(s1-s2))`.
fn b3_const(params: &ProblemParams) -> Result<f64> {
    let nf = params.dim() as f64;
    let d = params.gap();
    let omega = sphere_area(params.dim())?;
    Ok((2.0 * PI).powf(2.0 * d) * omega.powf(-2.0 * d / nf) * nf.powf(1.0 + 2.0 * d / nf) / (nf + 2.0 * d))
}

/// All constants for `params` (requires `N > 2 s1`).
pub fn bly_constants(params: &ProblemParams) -> Result<BoundConstants> {
    params.require_bound_regime()?;
    let n = params.dim();
    let nf = n as f64;
    let (s1, s2) = (params.s1(), params.s2());
    let bracket = bly_bracket(params)?;
    let b1 = b1_prefactor(params) * bracket.powf(-2.0 * (s1 - s2) / (2.0 * s2 + nf));
    let b2 = b1 * (2.0 * s1 + nf) / (nf * (2.0 * s2 + nf).powf(2.0 * s2 / (2.0 * s2 + nf)))
        * bracket.powf(2.0 * s2 / (nf + 2.0 * s2));
    let a_ns2 = fundamental_solution_const(n, s2)?;
    Ok(BoundConstants {
        a_weyl_gap: weyl_const(n, s1 - s2)?,
        a_weyl_s1: weyl_const(n, s1)?,
        b1,
        b2,
        b3: b3_const(params)?,
        a_ns2,
        a_ns2_tilde: a_ns2 / s2,
        a0: rearrangement_const(n, s2)?,
    })
}

fn check_k(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::precondition("eigenvalue index k must be at least 1"));
    }
    Ok(k as f64)
}

fn check_domain(params: &ProblemParams, dom: &FormulaDomain) -> Result<()> {
    if dom.dim() != params.dim() {
        return Err(Error::precondition(format!(
            "domain dimension {} does not match problem dimension {}",
            dom.dim(),
            params.dim()
        )));
    }
    Ok(())
}

/// Volume exponent attached to the `μ b2` term of the lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShiftTermScaling {
    /// `|Ω|^{-2 s1 / N}`, as stated with the theorem.
    Stated,
    /// `|Ω|^{-(2 s1 - 4 s2) / N}`, what the constants in the argument produce
    /// (and the only exponent compatible with dilations of Ω at fixed `μ`).
    Derived,
}

impl ShiftTermScaling {
    fn exponent(self, params: &ProblemParams) -> f64 {
        let nf = params.dim() as f64;
        match self {
            ShiftTermScaling::Stated => -2.0 * params.s1() / nf,
            ShiftTermScaling::Derived => -(2.0 * params.s1() - 4.0 * params.s2()) / nf,
        }
    }
}

/// Lower bound for `Σ_{j≤k} λ_j(μ)`:
/// `b1 |Ω|^{-2(s1-s2)/N} k^{1+2(s1-s2)/(2s2+N)} - μ b2 |Ω|^{-2s1/N} k^{1+(2s1-4s2)/(2s2+N)}`.
///
/// Negative values are legitimate (the bound is then vacuous).
pub fn lower_bound_sum(params: &ProblemParams, dom: &FormulaDomain, k: usize) -> Result<f64> {
    lower_bound_sum_scaled(params, dom, k, ShiftTermScaling::Stated)
}

pub fn lower_bound_sum_scaled(
    params: &ProblemParams,
    dom: &FormulaDomain,
    k: usize,
    scaling: ShiftTermScaling,
) -> Result<f64> {
    params.require_nonnegative_mu()?;
    check_domain(params, dom)?;
    let kf = check_k(k)?;
    let c = bly_constants(params)?;
    let nf = params.dim() as f64;
    let (s1, s2) = (params.s1(), params.s2());
    let lead = c.b1 * dom.volume().powf(-2.0 * (s1 - s2) / nf) * kf.powf(1.0 + 2.0 * (s1 - s2) / (2.0 * s2 + nf));
    if params.mu() == 0.0 {
        return Ok(lead);
    }
    let shift = params.mu()
        * c.b2
        * dom.volume().powf(scaling.exponent(params))
        * kf.powf(1.0 + (2.0 * s1 - 4.0 * s2) / (2.0 * s2 + nf));
    Ok(lead - shift)
}

/// Lower bound for the single eigenvalue `λ_k(μ)`; the sum bound divided by `k`.
pub fn lower_bound_single(params: &ProblemParams, dom: &FormulaDomain, k: usize) -> Result<f64> {
    lower_bound_single_scaled(params, dom, k, ShiftTermScaling::Stated)
}

pub fn lower_bound_single_scaled(
    params: &ProblemParams,
    dom: &FormulaDomain,
    k: usize,
    scaling: ShiftTermScaling,
) -> Result<f64> {
    params.require_nonnegative_mu()?;
    check_domain(params, dom)?;
    let kf = check_k(k)?;
    let c = bly_constants(params)?;
    let nf = params.dim() as f64;
    let (s1, s2) = (params.s1(), params.s2());
    let lead = c.b1 * dom.volume().powf(-2.0 * (s1 - s2) / nf) * kf.powf(2.0 * (s1 - s2) / (2.0 * s2 + nf));
    if params.mu() == 0.0 {
        return Ok(lead);
    }
    let shift = params.mu()
        * c.b2
        * dom.volume().powf(scaling.exponent(params))
        * kf.powf((2.0 * s1 - 4.0 * s2) / (2.0 * s2 + nf));
    Ok(lead - shift)
}

/// Leading term `b3 |Ω|^{-2(s1-s2)/N} k^{1+2(s1-s2)/N}` of the upper bound at `μ = 0`.
///
/// The remainder `c0 k^{δ3}` has no explicit constants and is not evaluated.
pub fn upper_bound_leading(params: &ProblemParams, dom: &FormulaDomain, k: usize) -> Result<f64> {
    if params.mu() != 0.0 {
        return Err(Error::precondition(format!("upper bound is for mu = 0, got {}", params.mu())));
    }
    params.require_upper_regime()?;
    params.require_bound_regime()?;
    check_domain(params, dom)?;
    let kf = check_k(k)?;
    let nf = params.dim() as f64;
    let d = params.gap();
    Ok(b3_const(params)? * dom.volume().powf(-2.0 * d / nf) * kf.powf(1.0 + 2.0 * d / nf))
}

/// Asymptote of `Σ_{j≤k} λ_{s,j}` for the single operator:
/// `N/(N+2s) a(N,s) |Ω|^{-2s/N} k^{1+2s/N}`.
pub fn single_frac_sum_asymptote(n: u32, s: f64, dom: &FormulaDomain, k: usize) -> Result<f64> {
    if dom.dim() != n {
        return Err(Error::precondition("domain dimension does not match N"));
    }
    let kf = check_k(k)?;
    let nf = n as f64;
    Ok(bly_limit_constant(n, s)? * dom.volume().powf(-2.0 * s / nf) * kf.powf(1.0 + 2.0 * s / nf))
}

/// Weyl asymptote of `λ_{s,k}`: `a(N,s) |Ω|^{-2s/N} k^{2s/N}`.
pub fn single_frac_weyl_asymptote(n: u32, s: f64, dom: &FormulaDomain, k: usize) -> Result<f64> {
    if dom.dim() != n {
        return Err(Error::precondition("domain dimension does not match N"));
    }
    let kf = check_k(k)?;
    let nf = n as f64;
    Ok(weyl_const(n, s)? * dom.volume().powf(-2.0 * s / nf) * kf.powf(2.0 * s / nf))
}

/// Split radius and right-hand side of the moment majorant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentMajorant {
    /// `R` with `R^{2s1+N} = (2s1+N) M2 / (M1 ω)`; `M1 χ_{B_R}` is the extremal function.
    pub radius: f64,
    /// `(ω M1/(2s2+N)) R^{2s2+N} [1 + μ (2s2+N)/N R^{-2s2}]`.
    pub rhs: f64,
}

/// Upper bound of `∫(|z|^{2s2} + μ) f` over `0 ≤ f ≤ M1`, `∫|z|^{2s1} f ≤ M2`.
pub fn prop21_rhs(params: &ProblemParams, m1: f64, m2: f64) -> Result<MomentMajorant> {
    params.require_nonnegative_mu()?;
    if !(m1 > 0.0 && m2 > 0.0 && m1.is_finite() && m2.is_finite()) {
        return Err(Error::precondition(format!("M1 and M2 must be positive, got {m1}, {m2}")));
    }
    let nf = params.dim() as f64;
    let (s1, s2) = (params.s1(), params.s2());
    let omega = sphere_area(params.dim())?;
    let radius = ((2.0 * s1 + nf) * m2 / (m1 * omega)).powf(1.0 / (2.0 * s1 + nf));
    let rhs = omega * m1 / (2.0 * s2 + nf)
        * radius.powf(2.0 * s2 + nf)
        * (1.0 + params.mu() * (2.0 * s2 + nf) / nf * radius.powf(-2.0 * s2));
    Ok(MomentMajorant { radius, rhs })
}

/// Root of `r^{τ1}(1 + r^{-τ2}) = d1` with its a-priori bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketResult {
    pub root: f64,
    /// `d1^{1/τ1} (1 - d1^{-τ2/τ1}/τ1)_+`.
    pub lower: f64,
    /// `d1^{1/τ1}`.
    pub upper: f64,
}

/// `f(r) = r^{τ1} + r^{τ1-τ2}`.
pub fn lemma21_f(tau1: f64, tau2: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    r.powf(tau1) + r.powf(tau1 - tau2)
}

/// Solves the bracketed equation by bisection (f is increasing and concave on (0, ∞)).
pub fn lemma21_solve(tau1: f64, tau2: f64, d1: f64) -> Result<BracketResult> {
    if !(tau1 < 1.0 && tau2 > 0.0 && tau2 < tau1) {
        return Err(Error::precondition(format!("need 1 > tau1 > tau2 > 0, got tau1 = {tau1}, tau2 = {tau2}")));
    }
    if !(d1 > 0.0 && d1.is_finite()) {
        return Err(Error::precondition(format!("d1 must be positive, got {d1}")));
    }
    let upper = d1.powf(1.0 / tau1);
    let lower = (upper * (1.0 - d1.powf(-tau2 / tau1) / tau1)).max(0.0);
    // f ≤ 2 r^{τ1-τ2} on (0, 1] and f ≤ 2 r^{τ1} on [1, ∞) give a positive
    // lower end, so the search can run on a geometric scale.
    let mut lo = (0.5 * d1).powf(1.0 / (tau1 - tau2)).min((0.5 * d1).powf(1.0 / tau1));
    let mut hi = upper;
    if !(lo > 0.0) {
        return Err(Error::numeric(format!("root of the bracketed equation underflows for d1 = {d1}")));
    }
    let mut iterations = 0;
    while hi > lo * (1.0 + 4.0 * f64::EPSILON) {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if lemma21_f(tau1, tau2, mid) < d1 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations > 400 {
            return Err(Error::numeric("bisection for the bracketed root did not converge"));
        }
    }
    Ok(BracketResult { root: (lo * hi).sqrt(), lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, s1: f64, s2: f64, mu: f64) -> ProblemParams {
        ProblemParams::new(n, s1, s2, mu).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn weyl_values() {
        assert!(rel(weyl_const(1, 0.5).unwrap(), PI) < 1e-14);
        assert!(rel(weyl_const(1, 0.25).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(weyl_const(2, 0.5).unwrap(), 2.0 * PI.sqrt()) < 1e-14);
        assert!(weyl_const(1, 1.0).is_err());
    }

    #[test]
    fn b1_reference_value() {
        // 40-digit evaluation of the display.
        let c = bly_constants(&p(1, 0.4, 0.2, 0.0)).unwrap();
        assert!(rel(c.b1, 1.169_264_503_585_614_596_242_423_5) < 1e-12);
        assert!(rel(c.b2, 1.4) < 1e-12);
        assert!(rel(b1_via_intermediates(&p(1, 0.4, 0.2, 0.0)).unwrap(), c.b1) < 1e-12);
    }

    #[test]
    fn small_s2_limits() {
        let lim = bly_limit_constant(1, 0.25).unwrap();
        assert!(rel(lim, PI.sqrt() / 1.5) < 1e-14);
        let b1 = bly_constants(&p(1, 0.25, 1e-9, 0.0)).unwrap().b1;
        assert!(rel(b1, lim) < 1e-7);
        // b3 at s2 -> 0 is the same sum-law constant with s = s1.
        let b3 = bly_constants(&p(1, 0.25, 1e-12, 0.0)).unwrap().b3;
        assert!(rel(b3, lim) < 1e-10);
    }

    #[test]
    fn b1_gap_to_limit_shrinks() {
        for n in 1..=3 {
            let lim = bly_limit_constant(n, 0.4).unwrap();
            let gaps: Vec<f64> = [0.1, 0.01, 0.001]
                .iter()
                .map(|&s2| (bly_constants(&p(n, 0.4, s2, 0.0)).unwrap().b1 - lim).abs())
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "N={n}: {gaps:?}");
        }
    }

    #[test]
    fn lower_bounds() {
        let prm = p(1, 0.4, 0.2, 0.0);
        let dom = FormulaDomain::new(1, 2.0).unwrap();
        let b1 = bly_constants(&prm).unwrap().b1;
        assert!(rel(lower_bound_sum(&prm, &dom, 1).unwrap(), b1 * 2f64.powf(-0.4)) < 1e-14);
        // 40-digit reference.
        assert!(rel(lower_bound_sum(&prm, &dom, 10).unwrap(), 17.108_622_866_946_146_144_813) < 1e-12);
        assert!(rel(lower_bound_sum(&prm, &dom, 10).unwrap(), b1 * 2f64.powf(-0.4) * 10f64.powf(9.0 / 7.0)) < 1e-13);
        for k in 1..30 {
            let sum = lower_bound_sum(&prm, &dom, k).unwrap();
            let single = lower_bound_single(&prm, &dom, k).unwrap();
            assert!(rel(single, sum / k as f64) < 1e-13);
        }
        let shifted = p(1, 0.4, 0.2, 1.0);
        assert!(rel(lower_bound_single(&shifted, &dom, 5).unwrap(), 0.599_391_974_537_743_465_569) < 1e-12);
        assert!(lower_bound_sum(&p(1, 0.4, 0.2, -0.5), &dom, 3).is_err());
        assert!(lower_bound_sum(&p(1, 0.6, 0.2, 0.0), &dom, 3).is_err());
        assert!(lower_bound_sum(&prm, &dom, 0).is_err());
        assert!(lower_bound_sum(&prm, &FormulaDomain::new(2, 2.0).unwrap(), 1).is_err());
    }

    #[test]
    fn large_shift_makes_bound_vacuous() {
        let dom = FormulaDomain::new(1, 2.0).unwrap();
        assert!(lower_bound_sum(&p(1, 0.4, 0.2, 1e3), &dom, 2).unwrap() < 0.0);
    }

    #[test]
    fn derived_shift_scaling_differs_only_in_volume() {
        let prm = p(1, 0.4, 0.1, 0.7);
        let unit = FormulaDomain::new(1, 1.0).unwrap();
        let a = lower_bound_sum_scaled(&prm, &unit, 4, ShiftTermScaling::Stated).unwrap();
        let b = lower_bound_sum_scaled(&prm, &unit, 4, ShiftTermScaling::Derived).unwrap();
        assert!(rel(a, b) < 1e-14);
    }

    #[test]
    fn upper_leading() {
        let prm = p(1, 0.3, 0.05, 0.0);
        let dom = FormulaDomain::new(1, 2.0).unwrap();
        let b3 = bly_constants(&prm).unwrap().b3;
        assert!(rel(b3, 1.181_635_900_603_677_351_532) < 1e-12);
        let one = upper_bound_leading(&prm, &dom, 1).unwrap();
        assert!(rel(one, b3 * 2f64.powf(-0.5)) < 1e-14);
        assert!(rel(one, 0.835_542_758_210_333_500_805) < 1e-12);
        let two = upper_bound_leading(&prm, &dom, 2).unwrap();
        assert!(rel(two / one, 2f64.powf(1.0 + 2.0 * 0.25)) < 1e-14);
        assert!(upper_bound_leading(&p(1, 0.3, 0.05, 1.0), &dom, 1).is_err());
        assert!(upper_bound_leading(&p(1, 0.49, 0.0001, 0.0), &dom, 1).is_ok());
        assert!(upper_bound_leading(&p(2, 0.7, 0.3, 0.0), &FormulaDomain::new(2, 1.0).unwrap(), 1).is_err());
    }

    #[test]
    fn sum_asymptote() {
        let dom = FormulaDomain::new(1, 2.0).unwrap();
        assert!(rel(single_frac_sum_asymptote(1, 0.5, &dom, 1).unwrap(), PI / 4.0) < 1e-14);
        let disc = FormulaDomain::new(2, PI).unwrap();
        assert!(rel(single_frac_sum_asymptote(2, 0.5, &disc, 4).unwrap(), 32.0 / 3.0) < 1e-13);
        let prm = p(1, 0.45, 0.15, 0.0);
        assert!(
            rel(upper_bound_leading(&prm, &dom, 7).unwrap(), single_frac_sum_asymptote(1, 0.3, &dom, 7).unwrap())
                < 1e-13
        );
        for k in [1, 5, 40] {
            let ratio = single_frac_sum_asymptote(1, 0.25, &dom, k).unwrap()
                / (k as f64 * single_frac_weyl_asymptote(1, 0.25, &dom, k).unwrap());
            assert!(rel(ratio, 1.0 / 1.5) < 1e-14);
        }
    }

    #[test]
    fn moment_majorant_values() {
        let prm = p(1, 0.4, 0.2, 0.0);
        let m = prop21_rhs(&prm, 1.0, 2.0 / 1.8).unwrap();
        assert!((m.radius - 1.0).abs() < 1e-14);
        assert!(rel(m.rhs, 2.0 / 1.4) < 1e-14);
        let m = prop21_rhs(&p(1, 0.4, 0.2, 1.0), 1.0, 2.0 / 1.8).unwrap();
        assert!(rel(m.rhs, 2.0 / 1.4 * 2.4) < 1e-14);
        assert!(prop21_rhs(&prm, 0.0, 1.0).is_err());
        assert!(prop21_rhs(&prm, 1.0, -1.0).is_err());
    }

    #[test]
    fn bracketed_root_anchors() {
        let r = lemma21_solve(0.5, 0.25, 2.0).unwrap();
        assert!((r.root - 1.0).abs() < 1e-12);
        assert_eq!(r.lower, 0.0);
        assert!((r.upper - 4.0).abs() < 1e-13);

        let r = lemma21_solve(0.5, 0.25, 16.0).unwrap();
        let y = (-1.0 + 65f64.sqrt()) / 2.0;
        assert!(rel(r.root, y.powi(4)) < 1e-12);
        assert!(rel(r.lower, 128.0) < 1e-14 && rel(r.upper, 256.0) < 1e-14);

        // 40-digit reference root.
        let r = lemma21_solve(0.8, 0.3, 10.0).unwrap();
        assert!(rel(r.root, 10.805_252_898_630_372_628_89) < 1e-11);
        assert!(rel(r.lower, 8.409_116_483_733_530_170_98) < 1e-12);
        assert!(rel(r.upper, 17.782_794_100_389_228_012_25) < 1e-12);

        assert!(lemma21_solve(0.3, 0.5, 1.0).is_err());
        assert!(lemma21_solve(1.0, 0.5, 1.0).is_err());
        assert!(lemma21_solve(0.5, 0.2, 0.0).is_err());
    }
}
