//! The verification suites. Every suite is a pure function of its
//! configuration; parallel sections collect in input order, so outputs do
//! not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bounds::{
    b1_via_intermediates, bly_constants, bly_limit_constant, lemma21_f, lemma21_solve, lower_bound_single_scaled,
    lower_bound_sum_scaled, prop21_rhs, single_frac_sum_asymptote, single_frac_weyl_asymptote, upper_bound_leading,
    ShiftTermScaling,
};
use crate::eigen::{gen_eigenvalues, gen_eigs, spectrum_checks, GenEigProblem, Spectrum, SpectrumChecks};
use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, MuEntry, Suite};
use crate::harness::report::{BoundReport, BoundRow, Cell, SuiteReport, Table};
use crate::matrix::{MatrixLabel, SymmetricMatrix};
use crate::operator::{
    assemble_mass, assemble_stiffness_with, lemma22_bound, lemma23_bound, lz_apply, pointwise_fraclap,
    CompactProfile, CutoffFunction, SampledFunction, WindowedPlaneWave, K1, K2,
};
use crate::par::{self, Exec};
use crate::params::{Domain1D, FormulaDomain, ProblemParams};
use crate::quadrature::QuadratureSpec;
use crate::special::sphere_area;

/// Residual tolerances on a computed spectrum.
pub const ORTHONORMALITY_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const A_OFFDIAG_TOL: f64 = 1e-7;
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Relative slack when comparing eigenvalues across grids.
pub const REFINEMENT_SLACK: f64 = 1e-12;

pub fn run_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    match cfg.suite {
        Suite::Constants => run_constants(cfg),
        Suite::Spectrum => run_spectrum(cfg),
        Suite::Lower => verify_lower(cfg),
        Suite::Upper => verify_upper(cfg),
        Suite::SweepMu => sweep_mu(cfg),
        Suite::Lemmas => verify_lemmas(cfg),
        Suite::Weyl => run_weyl_diagnostic(cfg),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn trial_rng(seed: u64, stream: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    rng.set_stream(stream);
    rng
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

// ---------------------------------------------------------------- constants

/// Largest relative gap between the two `b1` routes over a 5×5×5 grid of
/// `(N, s1, s2)` with `N ∈ 1..=5`, all inside `N > 2 s1`.
pub fn b1_route_grid_gap() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=5u32 {
        let s1_cap = (n as f64 / 2.0).min(1.0);
        for f1 in [0.2, 0.4, 0.6, 0.8, 0.95] {
            let s1 = f1 * s1_cap;
            for f2 in [0.05, 0.25, 0.5, 0.75, 0.95] {
                let p = ProblemParams::new(n, s1, f2 * s1, 0.0)?;
                worst = worst.max(rel(b1_via_intermediates(&p)?, bly_constants(&p)?.b1));
            }
        }
    }
    Ok(worst)
}

pub const CONSTANT_TOL: f64 = 1e-10;
pub const LIMIT_S2: f64 = 1e-6;
pub const LIMIT_GAP_TOL: f64 = 1e-6;

pub fn run_constants(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let p = &cfg.params;
    let c = bly_constants(p)?;
    let n = p.dim();
    let route_gap = b1_route_grid_gap()?;
    let own_route_gap = rel(b1_via_intermediates(p)?, c.b1);
    let limit = bly_limit_constant(n, p.s1())?;
    let near_zero = bly_constants(&ProblemParams::new(n, p.s1(), LIMIT_S2, 0.0)?)?.b1;
    let limit_gap = rel(near_zero, limit);
    let b3_gap = rel(c.b3, bly_limit_constant(n, p.gap())?);
    let pass = route_gap <= CONSTANT_TOL && own_route_gap <= CONSTANT_TOL && limit_gap < LIMIT_GAP_TOL && b3_gap <= CONSTANT_TOL;

    let mut t = Table::new("constants", &["name", "value"]);
    for (name, v) in [
        ("a_weyl_gap", c.a_weyl_gap),
        ("a_weyl_s1", c.a_weyl_s1),
        ("b1", c.b1),
        ("b2", c.b2),
        ("b3", c.b3),
        ("a_ns2", c.a_ns2),
        ("a_ns2_tilde", c.a_ns2_tilde),
        ("a0", c.a0),
        ("b1_limit", limit),
    ] {
        t.push(vec![name.into(), v.into()]);
    }
    Ok(SuiteReport {
        suite: Suite::Constants,
        pass,
        details: json!({
            "constants": c,
            "b1_two_route": {"grid": "N in 1..=5, 5 s1 values, 5 s2 values", "max_rel_gap": route_gap,
                              "this_point_rel_gap": own_route_gap, "tolerance": CONSTANT_TOL},
            "b1_small_s2_limit": {"s2": LIMIT_S2, "b1": near_zero, "limit": limit, "rel_gap": limit_gap,
                                   "tolerance": LIMIT_GAP_TOL},
            "b3_vs_sum_law": {"rel_gap": b3_gap, "tolerance": CONSTANT_TOL},
        }),
        tables: vec![t],
    })
}

// ---------------------------------------------------------------- assembly

/// The three matrices of the mixed problem on one grid.
pub struct Assembled {
    pub a1: SymmetricMatrix,
    pub a2: SymmetricMatrix,
    pub mass: SymmetricMatrix,
}

pub fn assemble_problem(exec: Exec, p: &ProblemParams, dom: &Domain1D, quad: &QuadratureSpec) -> Result<Assembled> {
    Ok(Assembled {
        a1: assemble_stiffness_with(exec, dom, p.s1(), quad)?,
        a2: assemble_stiffness_with(exec, dom, p.s2(), quad)?,
        mass: assemble_mass(dom),
    })
}

impl Assembled {
    /// `E_{s2} + μ·mass`.
    pub fn rhs_form(&self, mu: f64) -> SymmetricMatrix {
        let label = MatrixLabel::Combination(format!("E_s2 + {mu}*mass"));
        self.a2.combine(1.0, &self.mass, mu, label).expect("matrices share one grid")
    }

    /// Smallest eigenvalue of `A_{s2} x = λ M x`.
    pub fn lambda_hat(&self) -> Result<f64> {
        Ok(gen_eigenvalues(&GenEigProblem::new(&self.a2, &self.mass, 1)?)?[0])
    }

    fn check_shift(&self, mu: f64, lambda_hat: f64) -> Result<()> {
        if mu <= -lambda_hat {
            return Err(Error::precondition(format!(
                "shift mu = {mu} is at or below -lambda_hat = {:.12e}; E_s2 + mu*mass is not positive definite",
                -lambda_hat
            )));
        }
        Ok(())
    }

    fn attach_lambda_hat(e: Error, lambda_hat: f64) -> Error {
        match e {
            Error::NotPositiveDefinite { index, pivot, threshold } => Error::precondition(format!(
                "E_s2 + mu*mass failed its factorization at pivot {index} ({pivot:.3e} <= {threshold:.3e}); \
                 discrete lambda_hat_s2_1 = {lambda_hat:.12e}"
            )),
            other => other,
        }
    }

    pub fn spectrum(&self, mu: f64, k: usize, lambda_hat: f64) -> Result<Spectrum> {
        self.check_shift(mu, lambda_hat)?;
        let b = self.rhs_form(mu);
        gen_eigs(&GenEigProblem::new(&self.a1, &b, k)?).map_err(|e| Self::attach_lambda_hat(e, lambda_hat))
    }

    pub fn eigenvalues(&self, mu: f64, k: usize, lambda_hat: f64) -> Result<Vec<f64>> {
        self.check_shift(mu, lambda_hat)?;
        let b = self.rhs_form(mu);
        gen_eigenvalues(&GenEigProblem::new(&self.a1, &b, k)?).map_err(|e| Self::attach_lambda_hat(e, lambda_hat))
    }
}

fn structural_pass(c: &SpectrumChecks, eigenvalues: &[f64]) -> bool {
    let lk = eigenvalues.last().copied().unwrap_or(0.0).abs();
    let growth = eigenvalues.windows(2).all(|w| w[1] >= w[0] - DEGENERACY_TOL * w[1].abs());
    c.ascending
        && c.positive
        && growth
        && c.b_orthonormality <= ORTHONORMALITY_TOL
        && c.relative_residual <= RESIDUAL_TOL
        && c.a_offdiagonal <= A_OFFDIAG_TOL * lk
}

fn near_degenerate_pairs(eigenvalues: &[f64]) -> usize {
    eigenvalues.windows(2).filter(|w| (w[1] - w[0]).abs() <= DEGENERACY_TOL * w[1].abs()).count()
}

fn checks_json(c: &SpectrumChecks, eigenvalues: &[f64]) -> Value {
    json!({
        "ascending": c.ascending,
        "positive": c.positive,
        "b_orthonormality_residual": c.b_orthonormality,
        "a_offdiagonal_max": c.a_offdiagonal,
        "relative_residual": c.relative_residual,
        "near_degenerate_pairs": near_degenerate_pairs(eigenvalues),
        "tolerances": {"b_orthonormality": ORTHONORMALITY_TOL, "residual": RESIDUAL_TOL,
                       "a_offdiagonal_relative_to_lambda_k": A_OFFDIAG_TOL, "degeneracy": DEGENERACY_TOL},
        "pass": structural_pass(c, eigenvalues),
    })
}

/// `λ_j(coarse) ≥ λ_j(fine)` for `j ≤ k`, up to [`REFINEMENT_SLACK`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct RefinementCheck {
    pub n_coarse: usize,
    pub n_fine: usize,
    /// `true` when the fine mesh contains every coarse node.
    pub nested: bool,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub worst_increase: f64,
    pub pass: bool,
}

pub fn refinement_check(
    p: &ProblemParams,
    a: f64,
    b: f64,
    n_coarse: usize,
    n_fine: usize,
    k: usize,
    quad: &QuadratureSpec,
) -> Result<RefinementCheck> {
    let solve = |n: usize| -> Result<Vec<f64>> {
        let dom = Domain1D::new(a, b, n)?;
        let asm = assemble_problem(Exec::default(), p, &dom, quad)?;
        let lhat = asm.lambda_hat()?;
        asm.eigenvalues(p.mu(), k, lhat)
    };
    let coarse = solve(n_coarse)?;
    let fine = solve(n_fine)?;
    let worst_increase = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (f - c) / c.abs())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(RefinementCheck {
        n_coarse,
        n_fine,
        nested: (n_fine + 1).is_multiple_of(n_coarse + 1),
        coarse,
        fine,
        worst_increase,
        pass: worst_increase <= REFINEMENT_SLACK,
    })
}

// ---------------------------------------------------------------- spectrum

pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let dom = &cfg.domain;
    let mut table = Table::new("eigenvalues", &["j", "lambda"]);
    if let Some(s) = cfg.single {
        let a = assemble_stiffness_with(Exec::default(), dom, s, &cfg.quad)?;
        let m = assemble_mass(dom);
        let sp = gen_eigs(&GenEigProblem::new(&a, &m, cfg.k_max)?)?;
        let checks = spectrum_checks(&a, &m, &sp);
        for (j, l) in sp.eigenvalues.iter().enumerate() {
            table.push(vec![(j + 1).into(), (*l).into()]);
        }
        let pass = structural_pass(&checks, &sp.eigenvalues);
        return Ok(SuiteReport {
            suite: Suite::Spectrum,
            pass,
            details: json!({
                "mode": "single",
                "s": s,
                "problem": "A_s x = lambda M x",
                "lambda_1": sp.eigenvalues[0],
                "structure": checks_json(&checks, &sp.eigenvalues),
            }),
            tables: vec![table],
        });
    }
    let p = &cfg.params;
    let asm = assemble_problem(Exec::default(), p, dom, &cfg.quad)?;
    let lhat = asm.lambda_hat()?;
    let sp = asm.spectrum(p.mu(), cfg.k_max, lhat)?;
    let b = asm.rhs_form(p.mu());
    let checks = spectrum_checks(&asm.a1, &b, &sp);
    for (j, l) in sp.eigenvalues.iter().enumerate() {
        table.push(vec![(j + 1).into(), (*l).into()]);
    }
    let structure_ok = structural_pass(&checks, &sp.eigenvalues);
    let refinement = if dom.n() >= 4 {
        let coarse_n = dom.n() / 2;
        let k = cfg.k_max.min(coarse_n);
        let coarse = refinement_check(p, dom.a(), dom.b(), coarse_n, dom.n(), k, &cfg.quad)?;
        Some(coarse)
    } else {
        None
    };
    let refinement_ok = refinement.as_ref().is_none_or(|r| r.pass);
    Ok(SuiteReport {
        suite: Suite::Spectrum,
        pass: structure_ok && refinement_ok,
        details: json!({
            "mode": "mixed",
            "problem": "A_s1 x = lambda (A_s2 + mu M) x",
            "mu": p.mu(),
            "lambda_hat_s2_1": lhat,
            "lambda_hat_note": "discrete estimate of the first eigenvalue of A_s2 x = lambda M x (an overestimate)",
            "lambda_1": sp.eigenvalues[0],
            "structure": checks_json(&checks, &sp.eigenvalues),
            "refinement": refinement,
        }),
        tables: vec![table],
    })
}

// ---------------------------------------------------------------- lower bound

fn resolve_mu_list(list: &[MuEntry], asm: &Assembled) -> Result<(Vec<f64>, Option<f64>)> {
    let lhat = if list.iter().any(|m| matches!(m, MuEntry::RelativeToLhat(_))) { Some(asm.lambda_hat()?) } else { None };
    Ok((list.iter().map(|m| m.resolve(lhat.unwrap_or(f64::NAN))).collect(), lhat))
}

pub fn lower_reports(
    p: &ProblemParams,
    dom: &FormulaDomain,
    eigenvalues: &[f64],
    n_grid: usize,
    scaling: ShiftTermScaling,
) -> Result<(BoundReport, BoundReport)> {
    let mut sum = 0.0;
    let mut sum_rows = Vec::with_capacity(eigenvalues.len());
    let mut single_rows = Vec::with_capacity(eigenvalues.len());
    for (j, &l) in eigenvalues.iter().enumerate() {
        let k = j + 1;
        sum += l;
        sum_rows.push(BoundRow::new(k, sum, lower_bound_sum_scaled(p, dom, k, scaling)?));
        single_rows.push(BoundRow::new(k, l, lower_bound_single_scaled(p, dom, k, scaling)?));
    }
    Ok((
        BoundReport { kind: "sum".into(), mu: p.mu(), n_grid, rows: sum_rows },
        BoundReport { kind: "single".into(), mu: p.mu(), n_grid, rows: single_rows },
    ))
}

pub fn verify_lower(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let p = &cfg.params;
    p.require_bound_regime()?;
    let asm = assemble_problem(Exec::default(), p, &cfg.domain, &cfg.quad)?;
    let (mus, _) = resolve_mu_list(&cfg.mu_list, &asm)?;
    for &mu in &mus {
        p.with_mu(mu)?.require_nonnegative_mu()?;
    }
    let lhat = asm.lambda_hat()?;
    let spectra: Vec<Result<Vec<f64>>> = par::map_slice(Exec::default(), &mus, |&mu| asm.eigenvalues(mu, cfg.k_max, lhat));
    let fd = cfg.domain.formula_domain();
    let mut table = Table::new(
        "lower",
        &["mu", "kind", "k", "computed", "bound", "margin", "vacuous", "pass", "bound_derived_volume_scaling"],
    );
    let mut blocks = Vec::new();
    let mut pass = true;
    for (&mu, eig) in mus.iter().zip(spectra) {
        let eig = eig?;
        let pm = p.with_mu(mu)?;
        let (sum, single) = lower_reports(&pm, &fd, &eig, cfg.domain.n(), ShiftTermScaling::Stated)?;
        let (sum_d, single_d) = lower_reports(&pm, &fd, &eig, cfg.domain.n(), ShiftTermScaling::Derived)?;
        for (rep, alt) in [(&sum, &sum_d), (&single, &single_d)] {
            for (r, d) in rep.rows.iter().zip(&alt.rows) {
                table.push(vec![
                    mu.into(),
                    rep.kind.as_str().into(),
                    r.k.into(),
                    r.sum_computed.into(),
                    r.bound_value.into(),
                    r.margin.into(),
                    r.vacuous.into(),
                    r.pass.into(),
                    d.bound_value.into(),
                ]);
            }
        }
        pass &= sum.all_pass() && single.all_pass();
        blocks.push(json!({
            "mu": mu,
            "sum": {"all_pass": sum.all_pass(), "worst_margin": sum.worst_margin(),
                    "vacuous_rows": sum.rows.iter().filter(|r| r.vacuous).count(), "rows": sum.rows},
            "single": {"all_pass": single.all_pass(), "worst_margin": single.worst_margin(),
                       "vacuous_rows": single.rows.iter().filter(|r| r.vacuous).count(), "rows": single.rows},
            "derived_volume_scaling": {"sum_all_pass": sum_d.all_pass(), "single_all_pass": single_d.all_pass(),
                                       "note": "mu*b2 term with |Omega|^(-(2 s1 - 4 s2)/N); reported, not gating"},
        }));
    }
    Ok(SuiteReport {
        suite: Suite::Lower,
        pass,
        details: json!({
            "n_grid": cfg.domain.n(),
            "k_max": cfg.k_max,
            "constants": bly_constants(p)?,
            "by_mu": blocks,
        }),
        tables: vec![table],
    })
}

// ---------------------------------------------------------------- upper bound

pub const UPPER_EXPONENT_TOL: f64 = 0.1;

pub fn verify_upper(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let p = &cfg.params;
    if p.mu() != 0.0 {
        return Err(Error::precondition(format!("upper-bound diagnostic runs at mu = 0, got {}", p.mu())));
    }
    p.require_upper_regime()?;
    p.require_bound_regime()?;
    let asm = assemble_problem(Exec::default(), p, &cfg.domain, &cfg.quad)?;
    let lhat = asm.lambda_hat()?;
    let eig = asm.eigenvalues(0.0, cfg.k_max, lhat)?;
    let fd = cfg.domain.formula_domain();
    let mut table = Table::new("upper", &["k", "sum", "leading_term", "ratio"]);
    let mut sum = 0.0;
    let mut ratios = Vec::with_capacity(eig.len());
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let k_lo = (cfg.k_max / 4).max(1);
    for (j, &l) in eig.iter().enumerate() {
        let k = j + 1;
        sum += l;
        let lead = upper_bound_leading(p, &fd, k)?;
        ratios.push(sum / lead);
        table.push(vec![k.into(), sum.into(), lead.into(), (sum / lead).into()]);
        if k >= k_lo {
            xs.push((k as f64).ln());
            ys.push(sum.ln());
        }
    }
    let expected = 1.0 + 2.0 * p.gap() / p.dim() as f64;
    let exponent = if xs.len() >= 2 { least_squares_slope(&xs, &ys) } else { f64::NAN };
    let top = ratios.len().saturating_sub(10);
    let tail = &ratios[top..];
    let decreasing_steps = tail.windows(2).filter(|w| w[1] < w[0]).count();
    let trend: Vec<f64> = (top..ratios.len()).map(|k| (k + 1) as f64).collect();
    let trend_slope = if tail.len() >= 2 { least_squares_slope(&trend, tail) } else { f64::NAN };
    let exponent_ok = (exponent - expected).abs() <= UPPER_EXPONENT_TOL;
    let trend_ok = trend_slope < 0.0;
    let doubled = FormulaDomain::new(p.dim(), fd.volume() * 2f64.powi(p.dim() as i32))?;
    let volume_ratio = upper_bound_leading(p, &doubled, 1)? / upper_bound_leading(p, &fd, 1)?;
    Ok(SuiteReport {
        suite: Suite::Upper,
        pass: exponent_ok && trend_ok,
        details: json!({
            "gating": false,
            "note": "only the leading term b3 |Omega|^(-2(s1-s2)/N) k^(1+2(s1-s2)/N) is computable; the remainder \
                     constants c0 and delta3 are existential, so the full upper bound is not checked",
            "n_grid": cfg.domain.n(),
            "exponent_fit": {"k_range": [k_lo, cfg.k_max], "fitted": exponent, "expected": expected,
                             "tolerance": UPPER_EXPONENT_TOL, "within": exponent_ok},
            "ratio_trend": {"k_range": [top + 1, ratios.len()], "decreasing_steps": decreasing_steps,
                            "steps": tail.len().saturating_sub(1), "slope": trend_slope, "decreasing": trend_ok},
            "leading_term_ratio_domain_doubled": volume_ratio,
            "leading_term_ratio_expected": 2f64.powf(-2.0 * p.gap()),
        }),
        tables: vec![table],
    })
}

// ---------------------------------------------------------------- mu sweep

/// `λ_1(μ)` for every shift, computed in parallel under `exec`.
pub fn first_eigenvalues_with(exec: Exec, asm: &Assembled, mus: &[f64], lambda_hat: f64) -> Result<Vec<f64>> {
    par::map_slice(exec, mus, |&mu| asm.eigenvalues(mu, 1, lambda_hat).map(|v| v[0])).into_iter().collect()
}

pub fn sweep_mu(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let p = &cfg.params;
    let asm = assemble_problem(Exec::default(), p, &cfg.domain, &cfg.quad)?;
    let lhat = asm.lambda_hat()?;
    let mus: Vec<f64> = cfg.mu_list.iter().map(|m| m.resolve(lhat)).collect();
    if mus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::precondition("mu_list must be sorted ascending"));
    }
    if let Some(bad) = mus.iter().find(|&&m| m <= -lhat) {
        return Err(Error::precondition(format!(
            "shift {bad} is at or below -lambda_hat_s2_1 = {:.12e}",
            -lhat
        )));
    }
    let lams = first_eigenvalues_with(Exec::default(), &asm, &mus, lhat)?;
    let mut table = Table::new("sweep_mu", &["entry", "mu", "lambda_1"]);
    let mut monotone = true;
    let mut equal_ok = true;
    for i in 0..mus.len() {
        let label = match cfg.mu_list[i] {
            MuEntry::Absolute(v) => format!("{v}"),
            MuEntry::RelativeToLhat(f) => format!("{f}lhat"),
        };
        table.push(vec![Cell::Text(label), mus[i].into(), lams[i].into()]);
        if i > 0 {
            if mus[i] > mus[i - 1] {
                monotone &= lams[i] < lams[i - 1];
            } else {
                equal_ok &= lams[i] == lams[i - 1];
            }
        }
    }
    let large: Vec<(f64, f64)> = mus.iter().zip(&lams).filter(|(m, _)| **m >= 10.0).map(|(m, l)| (*m, *l)).collect();
    let large_ok = large.windows(2).all(|w| w[1].1 < w[0].1) && large.iter().all(|(_, l)| *l > 0.0);
    Ok(SuiteReport {
        suite: Suite::SweepMu,
        pass: monotone && equal_ok && large_ok,
        details: json!({
            "lambda_hat_s2_1": lhat,
            "lambda_hat_note": "discrete overestimate of the first eigenvalue of A_s2 x = lambda M x; \
                                the admissible shift range is therefore slightly conservative",
            "mu": mus,
            "lambda_1": lams,
            "strictly_decreasing": monotone,
            "equal_shifts_equal_values": equal_ok,
            "large_mu_decay_to_zero": {"points": large, "decreasing_and_positive": large_ok},
            "lambda_1_nearest_left_endpoint": lams.first(),
        }),
        tables: vec![table],
    })
}

// ---------------------------------------------------------------- lemmas

pub const EQUALITY_TOL: f64 = 1e-8;
pub const ROOT_TOL: f64 = 1e-9;
pub const SYMBOL_TOL: f64 = 0.02;
pub const SLOPE_TOL: f64 = 0.15;
pub const LZ_SAFETY: f64 = 4.0;

const STREAM_PROP21: u64 = 1;
const STREAM_LEMMA21: u64 = 2;
const STREAM_BESSEL: u64 = 3;

/// `(lhs, rhs)` of the moment inequality for one random radial shell function.
fn prop21_trial(p: &ProblemParams, seed: u64, index: usize) -> Result<(f64, f64)> {
    let mut rng = trial_rng(seed, STREAM_PROP21, index);
    let m1: f64 = rng.gen_range(0.25..4.0);
    let m2: f64 = rng.gen_range(0.25..4.0);
    let maj = prop21_rhs(p, m1, m2)?;
    let nf = p.dim() as f64;
    let omega = sphere_area(p.dim())?;
    let (e1, e2) = (nf + 2.0 * p.s1(), nf + 2.0 * p.s2());
    let shells = 32;
    let dr = 3.0 * maj.radius / shells as f64;
    let values: Vec<f64> = (0..shells).map(|_| rng.gen_range(0.0..=m1)).collect();
    let shell_moment = |r0: f64, r1: f64, e: f64| (r1.powf(e) - r0.powf(e)) / e;
    let moment: f64 = values
        .iter()
        .enumerate()
        .map(|(j, v)| omega * v * shell_moment(j as f64 * dr, (j + 1) as f64 * dr, e1))
        .sum();
    if moment == 0.0 {
        return Ok((0.0, maj.rhs));
    }
    // Radial dilation keeps 0 ≤ f ≤ M1 and sets the moment to u·M2.
    let u = 1.0 - rng.gen::<f64>();
    let t = (u * m2 / moment).powf(1.0 / e1);
    let lhs: f64 = values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let (r0, r1) = (t * j as f64 * dr, t * (j + 1) as f64 * dr);
            omega * v * (shell_moment(r0, r1, e2) + p.mu() * shell_moment(r0, r1, nf))
        })
        .sum();
    Ok((lhs, maj.rhs))
}

pub fn prop21_trials_with(exec: Exec, p: &ProblemParams, seed: u64, trials: usize) -> Result<Vec<(f64, f64)>> {
    par::map_range(exec, trials, |i| prop21_trial(p, seed, i)).into_iter().collect()
}

/// `|LHS - RHS|` for the extremal `M1 χ_{B_R}`, relative to RHS.
pub fn prop21_extremal_gap(p: &ProblemParams, m1: f64, m2: f64) -> Result<f64> {
    let maj = prop21_rhs(p, m1, m2)?;
    let nf = p.dim() as f64;
    let omega = sphere_area(p.dim())?;
    let r = maj.radius;
    let lhs = omega * m1 * (r.powf(nf + 2.0 * p.s2()) / (nf + 2.0 * p.s2()) + p.mu() * r.powf(nf) / nf);
    Ok(((lhs - maj.rhs) / maj.rhs).abs())
}

fn prop21_block(cfg: &ExperimentConfig) -> Result<Value> {
    let mut per_mu = Vec::new();
    let mut pass = true;
    for mu in [0.0, 1.0] {
        let p = cfg.params.with_mu(mu)?;
        let trials = prop21_trials_with(Exec::default(), &p, cfg.seed, cfg.trials)?;
        let holds = trials.iter().filter(|(l, r)| l <= r).count();
        let worst = trials.iter().map(|(l, r)| (r - l) / r).fold(f64::INFINITY, f64::min);
        let extremal = prop21_extremal_gap(&p, 1.0, 2.0)?;
        let ok = holds == trials.len() && extremal <= EQUALITY_TOL;
        pass &= ok;
        per_mu.push(json!({"mu": mu, "trials": trials.len(), "holding": holds,
                           "worst_relative_slack": worst, "extremal_rel_gap": extremal, "pass": ok}));
    }
    Ok(json!({"name": "moment majorant", "equality_tolerance": EQUALITY_TOL, "by_mu": per_mu, "pass": pass}))
}

fn lemma21_trial(seed: u64, index: usize) -> Result<(f64, f64, f64, bool, f64)> {
    let mut rng = trial_rng(seed, STREAM_LEMMA21, index);
    let tau1: f64 = rng.gen_range(0.1..0.95);
    let tau2: f64 = tau1 * rng.gen_range(0.1..0.9);
    let d1: f64 = 10f64.powf(rng.gen_range(-1.0..3.0));
    let r = lemma21_solve(tau1, tau2, d1)?;
    let residual = ((lemma21_f(tau1, tau2, r.root) - d1) / d1).abs();
    let bracket = r.lower < r.root && r.root < r.upper;
    Ok((tau1, tau2, d1, bracket, residual))
}

fn lemma21_block(cfg: &ExperimentConfig) -> Result<Value> {
    let trials: Vec<_> = par::map_range(Exec::default(), cfg.trials, |i| lemma21_trial(cfg.seed, i))
        .into_iter()
        .collect::<Result<_>>()?;
    let bracketed = trials.iter().filter(|t| t.3).count();
    let worst_residual = trials.iter().map(|t| t.4).fold(0.0, f64::max);
    let a = lemma21_solve(0.5, 0.25, 2.0)?;
    let b = lemma21_solve(0.5, 0.25, 16.0)?;
    let y = (-1.0 + 65f64.sqrt()) / 2.0;
    let anchor_a = (a.root - 1.0).abs();
    let anchor_b = rel(b.root, y.powi(4));
    let pass = bracketed == trials.len() && worst_residual <= ROOT_TOL && anchor_a <= ROOT_TOL && anchor_b <= ROOT_TOL;
    Ok(json!({
        "name": "bracketed root",
        "trials": trials.len(),
        "bracketed": bracketed,
        "worst_relative_residual": worst_residual,
        "anchor_d1_2": {"root": a.root, "error": anchor_a},
        "anchor_d1_16": {"root": b.root, "expected": y.powi(4), "rel_error": anchor_b},
        "tolerance": ROOT_TOL,
        "pass": pass,
    }))
}

/// Relative symbol error `(-Δ)^s u(0) / (|z|^{2s} u(0)) - 1` for the sampled windowed wave.
pub fn symbol_error(s: f64, z: f64, half_width: f64, n: usize, quad: &QuadratureSpec) -> Result<f64> {
    let wave = WindowedPlaneWave::new(z, half_width, 0.25 * half_width)?;
    let sampled = SampledFunction::from_fn(-half_width, half_width, n, |x| wave.value(x))?;
    let v = pointwise_fraclap(&sampled, s, 0.0, quad)?;
    Ok(v / z.abs().powf(2.0 * s) - 1.0)
}

fn symbol_block(cfg: &ExperimentConfig) -> Result<Value> {
    let cases: Vec<(f64, f64)> = [0.25, 0.4].iter().flat_map(|&s| [1.0, 2.0].map(|z| (s, z))).collect();
    let errs: Vec<Result<f64>> = par::map_slice(Exec::default(), &cases, |&(s, z)| symbol_error(s, z, 40.0, 4096, &cfg.quad));
    let mut rows = Vec::new();
    let mut pass = true;
    for (&(s, z), e) in cases.iter().zip(errs) {
        let e = e?;
        pass &= e.abs() <= SYMBOL_TOL;
        rows.push(json!({"s": s, "z": z, "L": 40.0, "n": 4096, "rel_error": e}));
    }
    // Refinement study: window and grid grow together at fixed spacing.
    let widths = [10.0, 20.0, 40.0];
    let mut studies = Vec::new();
    for &(s, z) in &cases {
        let errs: Vec<f64> = widths
            .iter()
            .map(|&l| symbol_error(s, z, l, (4096.0 * l / 40.0) as usize, &cfg.quad).map(f64::abs))
            .collect::<Result<_>>()?;
        let xs: Vec<f64> = widths.iter().map(|l: &f64| l.ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.max(1e-300).ln()).collect();
        let slope = least_squares_slope(&xs, &ys);
        studies.push(json!({"s": s, "z": z, "L": widths, "abs_error": errs, "loglog_slope": slope, "decays": slope < 0.0}));
    }
    Ok(json!({"name": "plane-wave symbol", "tolerance": SYMBOL_TOL, "cases": rows,
              "refinement": studies, "pass": pass}))
}

/// `sup_i |(-Δ)^s w_σ(x_i)|` over `points` midpoints of Ω.
pub fn cutoff_sup(dom: &Domain1D, s: f64, sigma: f64, points: usize, quad: &QuadratureSpec) -> Result<f64> {
    let w = CutoffFunction::new(*dom, sigma)?;
    let xs: Vec<f64> = (0..points).map(|i| dom.a() + dom.volume() * (i as f64 + 0.5) / points as f64).collect();
    let vals: Vec<Result<f64>> = par::map_slice(Exec::default(), &xs, |&x| pointwise_fraclap(&w, s, x, quad));
    let mut sup = 0.0f64;
    for v in vals {
        sup = sup.max(v?.abs());
    }
    Ok(sup)
}

fn lemma22_block(cfg: &ExperimentConfig) -> Result<Value> {
    let dom = &cfg.domain;
    let sigmas = [0.05, 0.1, 0.2];
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut pass = true;
    for s in [0.25, 0.4] {
        let mut logs = Vec::new();
        for sigma in sigmas {
            let sup = cutoff_sup(dom, s, sigma, 200, &cfg.quad)?;
            let b = lemma22_bound(s, sigma, K2)?;
            pass &= sup <= b.derived;
            logs.push(sup.ln());
            rows.push(json!({"s": s, "sigma": sigma, "sup": sup, "derived_bound": b.derived,
                             "stated_bound": b.stated, "within_derived": sup <= b.derived,
                             "within_stated": sup <= b.stated}));
        }
        let xs: Vec<f64> = sigmas.iter().map(|v| v.ln()).collect();
        let slope = least_squares_slope(&xs, &logs);
        let ok = (slope + 2.0 * s).abs() <= SLOPE_TOL;
        pass &= ok;
        fits.push(json!({"s": s, "fitted_exponent": slope, "expected": -2.0 * s, "tolerance": SLOPE_TOL, "within": ok}));
    }
    Ok(json!({"name": "cutoff Laplacian bound", "samples": 200, "K2": K2, "cases": rows, "exponent_fits": fits,
              "gated_on": "derived parametric bound and exponent fit; stated constant reported only", "pass": pass}))
}

fn lemma23_block(cfg: &ExperimentConfig) -> Result<Value> {
    let dom = &cfg.domain;
    let sigma = 0.1;
    let r = dom.enclosing_radius();
    let w = CutoffFunction::new(*dom, sigma)?;
    let points = 64;
    let xs: Vec<f64> = (0..points).map(|i| dom.a() + dom.volume() * (i as f64 + 0.5) / points as f64).collect();
    let mut rows = Vec::new();
    let mut pass = true;
    for s in [0.25, 0.5, 0.75] {
        for z in [2.0, 4.0, 8.0] {
            let vals: Vec<Result<f64>> = par::map_slice(Exec::default(), &xs, |&x| lz_apply(&w, s, z, x, &cfg.quad).map(|v| v.norm()));
            let mut sup = 0.0f64;
            for v in vals {
                sup = sup.max(v?);
            }
            let b = lemma23_bound(s, sigma, z, r, K1)?;
            let ok = sup <= LZ_SAFETY * b.stated;
            pass &= ok;
            rows.push(json!({"s": s, "z": z, "sup": sup, "stated_bound": b.stated, "parametric_bound": b.parametric,
                             "within_safety_times_stated": ok, "within_parametric": sup <= b.parametric}));
        }
    }
    Ok(json!({"name": "commutator remainder bound", "sigma": sigma, "R": r, "samples": points,
              "safety_factor": LZ_SAFETY, "cases": rows, "pass": pass}))
}

fn bessel_block(cfg: &ExperimentConfig) -> Result<Value> {
    let p = &cfg.params;
    let asm = assemble_problem(Exec::default(), p, &cfg.domain, &cfg.quad)?;
    let lhat = asm.lambda_hat()?;
    let sp = asm.spectrum(p.mu(), cfg.k_max, lhat)?;
    let b = asm.rhs_form(p.mu());
    let n = cfg.domain.n();
    let vectors = 50;
    let ratios: Vec<f64> = par::map_range(Exec::default(), vectors, |i| {
        let mut rng = trial_rng(cfg.seed, STREAM_BESSEL, i);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bx = b.matvec(&x);
        let norm2: f64 = x.iter().zip(&bx).map(|(a, b)| a * b).sum();
        let coeffs: f64 = sp.eigenvectors.iter().map(|v| v.iter().zip(&bx).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum();
        coeffs / norm2
    });
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    Ok(json!({"name": "Bessel inequality", "vectors": vectors, "eigenvectors": sp.eigenvectors.len(),
              "max_partial_sum_over_norm": worst, "pass": worst <= 1.0 + 1e-10}))
}

pub fn verify_lemmas(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let blocks = vec![
        prop21_block(cfg)?,
        lemma21_block(cfg)?,
        symbol_block(cfg)?,
        lemma22_block(cfg)?,
        lemma23_block(cfg)?,
        bessel_block(cfg)?,
    ];
    let pass = blocks.iter().all(|b| b["pass"] == Value::Bool(true));
    let mut table = Table::new("lemmas", &["block", "pass"]);
    for b in &blocks {
        table.push(vec![Cell::Text(b["name"].as_str().unwrap_or("").to_string()), (b["pass"] == Value::Bool(true)).into()]);
    }
    Ok(SuiteReport { suite: Suite::Lemmas, pass, details: json!({"seed": cfg.seed, "blocks": blocks}), tables: vec![table] })
}

// ---------------------------------------------------------------- Weyl

pub const WEYL_TOL: f64 = 0.3;

pub fn run_weyl_diagnostic(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let s = cfg.single.ok_or_else(|| Error::precondition("the Weyl diagnostic needs a single-operator order"))?;
    let dom = &cfg.domain;
    let a = assemble_stiffness_with(Exec::default(), dom, s, &cfg.quad)?;
    let m = assemble_mass(dom);
    let eig = gen_eigenvalues(&GenEigProblem::new(&a, &m, cfg.k_max)?)?;
    let fd = dom.formula_domain();
    let mut table = Table::new("weyl", &["k", "lambda", "pointwise_ratio", "sum_ratio"]);
    let mut sum = 0.0;
    let (mut last_point, mut last_sum) = (f64::NAN, f64::NAN);
    for (j, &l) in eig.iter().enumerate() {
        let k = j + 1;
        sum += l;
        last_point = l / single_frac_weyl_asymptote(1, s, &fd, k)?;
        last_sum = sum / single_frac_sum_asymptote(1, s, &fd, k)?;
        table.push(vec![k.into(), l.into(), last_point.into(), last_sum.into()]);
    }
    let within = |r: f64| (r - 1.0).abs() <= WEYL_TOL;
    let law_ratio = single_frac_sum_asymptote(1, s, &fd, 1)? / single_frac_weyl_asymptote(1, s, &fd, 1)?;
    Ok(SuiteReport {
        suite: Suite::Weyl,
        pass: within(last_point) && within(last_sum),
        details: json!({
            "gating": false,
            "s": s,
            "n_grid": dom.n(),
            "k_max": cfg.k_max,
            "pointwise_constant": single_frac_weyl_asymptote(1, s, &fd, 1)?,
            "sum_constant": single_frac_sum_asymptote(1, s, &fd, 1)?,
            "sum_over_pointwise_constant": law_ratio,
            "sum_over_pointwise_expected": 1.0 / (1.0 + 2.0 * s),
            "ratio_at_k_max": {"pointwise": last_point, "sum": last_sum},
            "tolerance": WEYL_TOL,
            "tolerance_note": "engineering choice: discretization and preasymptotic effects dominate at k <= 40",
        }),
        tables: vec![table],
    })
}
