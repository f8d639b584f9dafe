//! Dense symmetric-definite pencils `A x = λ B x`.
//!
//! `B = L Lᵀ` by Cholesky, `C = L⁻¹ A L⁻ᵀ` is diagonalized by Householder
//! tridiagonalization and implicit QL, and vectors map back through `L⁻ᵀ`.
//! Each solve is single-threaded; independent solves can run concurrently.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{dot, MatrixLabel, SymmetricMatrix};

/// Pivots at or below this fraction of the largest diagonal entry reject `B`.
pub const DEFINITENESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GenEigProblem<'a> {
    a: &'a SymmetricMatrix,
    b: &'a SymmetricMatrix,
    k: usize,
}

impl<'a> GenEigProblem<'a> {
    pub fn new(a: &'a SymmetricMatrix, b: &'a SymmetricMatrix, k: usize) -> Result<Self> {
        if a.order() != b.order() {
            return Err(Error::precondition(format!(
                "pencil orders differ: A is {}, B is {}",
                a.order(),
                b.order()
            )));
        }
        if k == 0 || k > a.order() {
            return Err(Error::precondition(format!("requested {k} pairs from a pencil of order {}", a.order())));
        }
        Ok(Self { a, b, k })
    }

    pub fn a(&self) -> &SymmetricMatrix {
        self.a
    }

    pub fn b(&self) -> &SymmetricMatrix {
        self.b
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Leading eigenpairs, ascending, with `B`-orthonormal vectors.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    #[serde(serialize_with = "label_as_string")]
    pub b_label: MatrixLabel,
}

fn label_as_string<S: serde::Serializer>(label: &MatrixLabel, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&label.to_string())
}

/// Lower Cholesky factor, row-major.
struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    fn factor(b: &SymmetricMatrix) -> Result<Self> {
        let n = b.order();
        let threshold = DEFINITENESS_TOL * b.max_abs_diagonal();
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let s = b.get(i, j) - dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
                if i == j {
                    if !(s > threshold) {
                        return Err(Error::NotPositiveDefinite { index: i, pivot: s, threshold });
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(Self { n, l })
    }

    /// Overwrites the rows of `m` (an `n × n` row-major block) with `L⁻¹ m`.
    fn forward_rows(&self, m: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[i * n + k];
                if lik != 0.0 {
                    let (head, tail) = m.split_at_mut(i * n);
                    let src = &head[k * n..k * n + n];
                    for (t, s) in tail[..n].iter_mut().zip(src) {
                        *t -= lik * s;
                    }
                }
            }
            let d = 1.0 / self.l[i * n + i];
            m[i * n..i * n + n].iter_mut().for_each(|v| *v *= d);
        }
    }

    /// Solves `Lᵀ x = z` in place.
    fn backward(&self, x: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            x[i] /= self.l[i * n + i];
            let xi = x[i];
            for (xk, lik) in x[..i].iter_mut().zip(&self.l[i * n..i * n + i]) {
                *xk -= lik * xi;
            }
        }
    }
}

fn transpose(n: usize, m: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = m[i * n + j];
        }
    }
    t
}

/// Symmetric eigendecomposition of `C` (row-major). Returns eigenvalues in
/// algorithm order and, when asked, eigenvectors as rows of an `n × n` buffer.
fn symmetric_eigen(n: usize, c: Vec<f64>, vectors: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    // `vt` holds Vᵀ: V[k][j] lives at vt[j * n + k], so the column sweeps of
    // the classic algorithm become contiguous row sweeps. C is symmetric, so
    // the initial V = C needs no transpose.
    let mut vt = c;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut vt, &mut d, &mut e, vectors);
    tql2(n, &mut vt, &mut d, &mut e, vectors)?;
    Ok((d, vt))
}

macro_rules! v {
    ($vt:expr, $n:expr, $k:expr, $j:expr) => {
        $vt[($j) * $n + ($k)]
    };
}

fn tred2(n: usize, vt: &mut [f64], d: &mut [f64], e: &mut [f64], vectors: bool) {
    for j in 0..n {
        d[j] = v!(vt, n, n - 1, j);
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v!(vt, n, i - 1, j);
                v!(vt, n, i, j) = 0.0;
                v!(vt, n, j, i) = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);
            for j in 0..i {
                f = d[j];
                v!(vt, n, j, i) = f;
                g = e[j] + v!(vt, n, j, j) * f;
                let col = &vt[j * n..j * n + i];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut vt[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = v!(vt, n, i - 1, j);
                v!(vt, n, i, j) = 0.0;
            }
        }
        d[i] = h;
    }
    if !vectors {
        // The tridiagonal's diagonal sits on the diagonal of the workspace.
        for j in 0..n {
            d[j] = v!(vt, n, j, j);
        }
        e[0] = 0.0;
        return;
    }
    {
        for i in 0..n.saturating_sub(1) {
            v!(vt, n, n - 1, i) = v!(vt, n, i, i);
            v!(vt, n, i, i) = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = v!(vt, n, k, i + 1) / h;
                }
                for j in 0..=i {
                    let (lo, hi) = vt.split_at_mut((i + 1) * n);
                    let src = &hi[..i + 1];
                    let dst = &mut lo[j * n..j * n + i + 1];
                    let g = dot(src, dst);
                    for (x, dk) in dst.iter_mut().zip(&d[..=i]) {
                        *x -= g * dk;
                    }
                }
            }
            for k in 0..=i {
                v!(vt, n, k, i + 1) = 0.0;
            }
        }
    }
    for j in 0..n {
        d[j] = v!(vt, n, n - 1, j);
        v!(vt, n, n - 1, j) = 0.0;
    }
    v!(vt, n, n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

fn tql2(n: usize, vt: &mut [f64], d: &mut [f64], e: &mut [f64], vectors: bool) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::numeric(format!("implicit QL did not converge for eigenvalue {l}")));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..].iter_mut() {
                    *x -= h;
                }
                f += h;
                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if vectors {
                        let (lo, hi) = vt.split_at_mut((i + 1) * n);
                        let row_i = &mut lo[i * n..];
                        let row_j = &mut hi[..n];
                        for (a, b) in row_i.iter_mut().zip(row_j.iter_mut()) {
                            let t = *b;
                            *b = s * *a + c * t;
                            *a = c * *a - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn reduced(problem: &GenEigProblem<'_>) -> Result<(Cholesky, Vec<f64>)> {
    let n = problem.a.order();
    let chol = Cholesky::factor(problem.b)?;
    let mut y = problem.a.as_slice().to_vec();
    chol.forward_rows(&mut y);
    let mut c = transpose(n, &y);
    chol.forward_rows(&mut c);
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (c[i * n + j] + c[j * n + i]);
            c[i * n + j] = avg;
            c[j * n + i] = avg;
        }
    }
    Ok((chol, c))
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    idx
}

/// The `k` smallest eigenpairs of the pencil.
pub fn gen_eigs(problem: &GenEigProblem<'_>) -> Result<Spectrum> {
    let n = problem.a.order();
    let (chol, c) = reduced(problem)?;
    let (values, vt) = symmetric_eigen(n, c, true)?;
    let order = ascending_order(&values);
    let mut eigenvalues = Vec::with_capacity(problem.k);
    let mut eigenvectors = Vec::with_capacity(problem.k);
    for &j in order.iter().take(problem.k) {
        let mut x = vt[j * n..j * n + n].to_vec();
        chol.backward(&mut x);
        eigenvalues.push(values[j]);
        eigenvectors.push(x);
    }
    Ok(Spectrum { eigenvalues, eigenvectors, b_label: problem.b.label().clone() })
}

/// The `k` smallest eigenvalues only; skips vector accumulation.
pub fn gen_eigenvalues(problem: &GenEigProblem<'_>) -> Result<Vec<f64>> {
    let n = problem.a.order();
    let (_, c) = reduced(problem)?;
    let (values, _) = symmetric_eigen(n, c, false)?;
    let order = ascending_order(&values);
    Ok(order.iter().take(problem.k).map(|&j| values[j]).collect())
}

/// `xᵀAx / xᵀBx`.
pub fn rayleigh(a: &SymmetricMatrix, b: &SymmetricMatrix, x: &[f64]) -> Result<f64> {
    if a.order() != b.order() || x.len() != a.order() {
        return Err(Error::precondition("Rayleigh quotient dimensions do not match"));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::precondition("Rayleigh quotient of the zero vector"));
    }
    Ok(a.quadratic_form(x) / b.quadratic_form(x))
}

/// Structural residuals of a computed spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumChecks {
    /// `max |x_iᵀ B x_j - δ_ij|`.
    pub b_orthonormality: f64,
    /// `max_{i≠j} |x_iᵀ A x_j|`.
    pub a_offdiagonal: f64,
    /// `max ‖Ax - λBx‖ / ((‖A‖ + |λ|‖B‖) ‖x‖)`, Frobenius norms on the matrices.
    pub relative_residual: f64,
    pub ascending: bool,
    pub positive: bool,
}

pub fn spectrum_checks(a: &SymmetricMatrix, b: &SymmetricMatrix, spec: &Spectrum) -> SpectrumChecks {
    let bx: Vec<Vec<f64>> = spec.eigenvectors.iter().map(|x| b.matvec(x)).collect();
    let ax: Vec<Vec<f64>> = spec.eigenvectors.iter().map(|x| a.matvec(x)).collect();
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    let k = spec.eigenvalues.len();
    let mut orth = 0.0f64;
    let mut off = 0.0f64;
    let mut res = 0.0f64;
    for i in 0..k {
        let xi = &spec.eigenvectors[i];
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            orth = orth.max((dot(xi, &bx[j]) - target).abs());
            if i != j {
                off = off.max(dot(xi, &ax[j]).abs());
            }
        }
        let lam = spec.eigenvalues[i];
        let r: f64 = ax[i].iter().zip(&bx[i]).map(|(p, q)| (p - lam * q).powi(2)).sum::<f64>().sqrt();
        let xn = dot(xi, xi).sqrt();
        res = res.max(r / ((na + lam.abs() * nb) * xn));
    }
    SpectrumChecks {
        b_orthonormality: orth,
        a_offdiagonal: off,
        relative_residual: res,
        ascending: spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]),
        positive: spec.eigenvalues.iter().all(|&l| l > 0.0),
    }
}
