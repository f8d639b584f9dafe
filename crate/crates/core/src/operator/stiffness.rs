//! Galerkin matrices on the uniform hat-function basis of a [`Domain1D`].
//!
//! Hats vanish outside Ω, so the restricted form equals the full-line
//! Gagliardo form, and on a uniform grid that form is translation invariant:
//! `A_ij = c_{1,s} h^{1-2s} T_{|i-j|}` with `T_m` independent of the grid.
//! `T_m` is closed form for `m ≤ 4` (a fourth difference of the kernel's
//! double antiderivative) and smooth-kernel Gauss quadrature beyond.

use crate::error::{Error, Result};
use crate::matrix::{MatrixLabel, SymmetricMatrix};
use crate::par::{self, Exec};
use crate::params::Domain1D;
use crate::quadrature::{GaussLegendre, QuadratureSpec};
use crate::special::{check_order, frac_norm_const};

const CLOSED_FORM_MAX_OFFSET: usize = 4;

/// `g(m) = m^2 (m^ε - 1)/ε`, `ε = 1 - 2s`, continued by `m^2 ln m` at `ε = 0`.
fn g(m: f64, s: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    let eps = 1.0 - 2.0 * s;
    let l = m.ln();
    if eps.abs() < 1e-14 {
        m * m * l
    } else {
        m * m * (eps * l).exp_m1() / eps
    }
}

fn closed_form_offset(m: usize, s: f64) -> f64 {
    let gm = |k: isize| g(k.unsigned_abs() as f64, s);
    let m = m as isize;
    let d4 = gm(m + 2) - 4.0 * gm(m + 1) + 6.0 * gm(m) - 4.0 * gm(m - 1) + gm(m - 2);
    d4 / (2.0 * s * (2.0 - 2.0 * s) * (3.0 - 2.0 * s))
}

/// `-∬ φ_0(x) φ_m(y) |x-y|^{-1-2s}` on the unit grid, element pair by element pair.
fn separated_offset(m: usize, s: f64, rule: &GaussLegendre) -> f64 {
    let hat = |x: f64| (1.0 - x.abs()).max(0.0);
    let mf = m as f64;
    let mut total = 0.0;
    for (x0, x1) in [(-1.0, 0.0), (0.0, 1.0)] {
        for (y0, y1) in [(mf - 1.0, mf), (mf, mf + 1.0)] {
            total += rule.integrate(x0, x1, |x: f64| {
                rule.integrate(y0, y1, |y: f64| hat(x) * hat(y - mf) * (y - x).powf(-1.0 - 2.0 * s))
            });
        }
    }
    -total
}

/// Grid-independent Toeplitz symbol `T_0, …, T_{n-1}` (without `c_{1,s} h^{1-2s}`).
pub fn stiffness_symbol(n: usize, s: f64, quad: &QuadratureSpec) -> Result<Vec<f64>> {
    check_order(s, "order s")?;
    quad.validate()?;
    let coarse = GaussLegendre::new(quad.gauss_order);
    let fine = GaussLegendre::new(2 * quad.gauss_order);
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        if m <= CLOSED_FORM_MAX_OFFSET {
            out.push(closed_form_offset(m, s));
            continue;
        }
        let lo = separated_offset(m, s, &coarse);
        let hi = separated_offset(m, s, &fine);
        if (lo - hi).abs() > quad.per_entry_rel_tol * hi.abs() {
            return Err(Error::numeric(format!(
                "stiffness entry at offset |i-j| = {m} (s = {s}) missed tolerance {:.1e}: {lo:.17e} vs {hi:.17e}",
                quad.per_entry_rel_tol
            )));
        }
        out.push(hi);
    }
    Ok(out)
}

/// Discrete `E_s(φ_i, φ_j)` including the exterior contribution.
pub fn assemble_stiffness(dom: &Domain1D, s: f64, quad: &QuadratureSpec) -> Result<SymmetricMatrix> {
    assemble_stiffness_with(Exec::default(), dom, s, quad)
}

pub fn assemble_stiffness_with(exec: Exec, dom: &Domain1D, s: f64, quad: &QuadratureSpec) -> Result<SymmetricMatrix> {
    let n = dom.n();
    let symbol = stiffness_symbol(n, s, quad)?;
    let scale = frac_norm_const(1, s)? * dom.h().powf(1.0 - 2.0 * s);
    Ok(SymmetricMatrix::from_upper_fn_with(exec, n, MatrixLabel::Stiffness { s }, |i, j| {
        scale * symbol[j - i]
    }))
}

/// P1 mass matrix: `2h/3` on the diagonal, `h/6` next to it.
pub fn assemble_mass(dom: &Domain1D) -> SymmetricMatrix {
    let h = dom.h();
    SymmetricMatrix::from_upper_fn_with(Exec::Sequential, dom.n(), MatrixLabel::Mass, |i, j| match j - i {
        0 => 2.0 * h / 3.0,
        1 => h / 6.0,
        _ => 0.0,
    })
}

/// `κ(x) = ((x-a)^{-2s} + (b-x)^{-2s}) / 2s`, the exterior kernel mass.
pub fn exterior_weight(dom: &Domain1D, s: f64, x: f64) -> f64 {
    ((x - dom.a()).powf(-2.0 * s) + (dom.b() - x).powf(-2.0 * s)) / (2.0 * s)
}

/// `c_{1,s} ∫_Ω φ_i φ_j κ`; tridiagonal and positive semidefinite.
///
/// The singular factor of κ is integrated exactly on the element that
/// touches its endpoint; everything else is smooth and goes to Gauss.
pub fn assemble_exterior(dom: &Domain1D, s: f64, quad: &QuadratureSpec) -> Result<SymmetricMatrix> {
    check_order(s, "order s")?;
    quad.validate()?;
    let n = dom.n();
    let h = dom.h();
    let c = frac_norm_const(1, s)?;
    let rule = GaussLegendre::new(2 * quad.gauss_order);
    let p = -2.0 * s;
    let (a, b) = (dom.a(), dom.b());
    // Element e spans nodes e and e+1, e = 0..=n; local coordinate t in [0, 1].
    // m[e] = [∫(1-t)^2 κ, ∫(1-t) t κ, ∫ t^2 κ] over the element, times h.
    let moments: Vec<[f64; 3]> = par::map_range(Exec::Sequential, n + 1, |e| {
        let x0 = dom.node(e);
        let smooth = |weight: &dyn Fn(f64) -> f64| -> [f64; 3] {
            let mut out = [0.0; 3];
            for (t, wt) in rule.points(0.0, 1.0) {
                let v = wt * weight(x0 + h * t);
                out[0] += (1.0 - t) * (1.0 - t) * v;
                out[1] += (1.0 - t) * t * v;
                out[2] += t * t * v;
            }
            out.map(|q| h * q)
        };
        let hp = h.powf(p);
        let beta = |q: f64| 1.0 / (q + p + 1.0);
        // (x-a)^p = h^p t^p on the first element, (b-x)^p = h^p (1-t)^p on the last.
        let near_a = if e == 0 {
            [beta(0.0) - 2.0 * beta(1.0) + beta(2.0), beta(1.0) - beta(2.0), beta(2.0)].map(|q| h * hp * q)
        } else {
            smooth(&|x: f64| (x - a).powf(p))
        };
        let near_b = if e == n {
            [beta(2.0), beta(1.0) - beta(2.0), beta(0.0) - 2.0 * beta(1.0) + beta(2.0)].map(|q| h * hp * q)
        } else {
            smooth(&|x: f64| (b - x).powf(p))
        };
        let m = [near_a[0] + near_b[0], near_a[1] + near_b[1], near_a[2] + near_b[2]];
        m
    });
    let scale = c / (2.0 * s);
    // Interior node i (1..=n) is the right end of element i-1 and the left end of element i.
    Ok(SymmetricMatrix::from_upper_fn_with(Exec::Sequential, n, MatrixLabel::Exterior { s }, |r, col| {
        let i = r + 1;
        match col - r {
            0 => scale * (moments[i - 1][2] + moments[i][0]),
            1 => scale * moments[i][1],
            _ => 0.0,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAT_ENERGY_HALF: f64 = 0.882_542_400_610_606_373_59;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn single_hat_energy() {
        let dom = Domain1D::new(0.0, 1.0, 1).unwrap();
        let a = assemble_stiffness(&dom, 0.5, &quad()).unwrap();
        assert!(((a.get(0, 0) - HAT_ENERGY_HALF) / HAT_ENERGY_HALF).abs() < 1e-14);
    }

    #[test]
    fn closed_form_continuous_in_s_across_half() {
        for m in 0..=4 {
            let lo = closed_form_offset(m, 0.5 - 1e-7);
            let mid = closed_form_offset(m, 0.5);
            let hi = closed_form_offset(m, 0.5 + 1e-7);
            assert!((lo - mid).abs() < 1e-5 && (hi - mid).abs() < 1e-5, "m={m}");
        }
    }

    #[test]
    fn closed_form_matches_quadrature_where_both_apply() {
        let fine = GaussLegendre::new(48);
        for s in [0.1, 0.25, 0.4, 0.6, 0.75] {
            for m in 3..=4 {
                let cf = closed_form_offset(m, s);
                let q = separated_offset(m, s, &fine);
                assert!(((cf - q) / q).abs() < 1e-9, "s={s} m={m}: {cf} vs {q}");
            }
        }
    }

    #[test]
    fn symbol_row_sum_is_positive_and_far_entries_negative() {
        let t = stiffness_symbol(40, 0.3, &quad()).unwrap();
        assert!(t[0] > 0.0);
        assert!(t[1..].iter().all(|&v| v < 0.0));
        // Full-line sum of a partition of unity vanishes; interior rows are
        // therefore small and positive on a finite truncation.
        let row: f64 = t[0] + 2.0 * t[1..].iter().sum::<f64>();
        assert!(row > 0.0);
    }

    #[test]
    fn mass_entries() {
        let dom = Domain1D::new(0.0, 1.0, 2).unwrap();
        let m = assemble_mass(&dom);
        assert!((m.get(0, 0) - 2.0 / 9.0).abs() < 1e-16);
        assert!((m.get(0, 1) - 1.0 / 18.0).abs() < 1e-16);
        let dom = Domain1D::new(-1.0, 1.0, 9).unwrap();
        let m = assemble_mass(&dom);
        for i in 1..8 {
            assert!((m.row(i).iter().sum::<f64>() - dom.h()).abs() < 1e-15);
        }
    }

    #[test]
    fn exterior_single_hat_exact() {
        // One hat on (0,1), s = 1/2: κ = 1/x + 1/(1-x), hat = 2x on [0, 1/2].
        // c ∫ φ² κ = (1/π) · 2 ∫_0^{1/2} 4x² (1/x + 1/(1-x)) dx = (1/π)(4 ln 2 - 2)... evaluated below.
        let dom = Domain1D::new(0.0, 1.0, 1).unwrap();
        let x = assemble_exterior(&dom, 0.5, &quad()).unwrap();
        let half = 0.5f64;
        // ∫_0^{1/2} 4x dx + ∫_0^{1/2} 4x²/(1-x) dx
        let first = 2.0 * half * half;
        let second = 4.0 * (-(half * half) / 2.0 - half - (1.0 - half).ln());
        let expected = (1.0 / std::f64::consts::PI) * 2.0 * (first + second);
        assert!(((x.get(0, 0) - expected) / expected).abs() < 1e-13);
    }
}
