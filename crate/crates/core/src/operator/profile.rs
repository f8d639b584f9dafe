//! Compactly supported 1-D functions that the pointwise evaluator accepts.

use crate::error::{Error, Result};

/// A real function on ℝ vanishing outside [`support`](CompactProfile::support).
pub trait CompactProfile: Sync {
    fn value(&self, x: f64) -> f64;

    /// `None` when the profile carries no derivative data.
    fn first_derivative(&self, x: f64) -> Option<f64>;

    /// `None` when the profile carries no second-derivative data.
    fn second_derivative(&self, x: f64) -> Option<f64>;

    /// Closed interval outside of which the value is zero.
    fn support(&self) -> (f64, f64);

    /// Points where the second derivative may jump.
    fn breakpoints(&self) -> Vec<f64>;

    /// Length over which the profile varies appreciably; sets panel size.
    fn length_scale(&self) -> f64;

    fn sup_abs(&self) -> f64;
}

/// Clamped cubic spline through uniform samples, zero slope at both ends.
///
/// Samples at the two ends should be zero for the extension by zero to be
/// continuous; this is not enforced.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    lo: f64,
    h: f64,
    values: Vec<f64>,
    moments: Vec<f64>,
    sup: f64,
}

impl SampledFunction {
    /// `values[k]` is the sample at `lo + k (hi - lo)/(len-1)`.
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::precondition(format!("sample interval needs lo < hi, got ({lo}, {hi})")));
        }
        if values.len() < 3 {
            return Err(Error::precondition("a sampled function needs at least three samples"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::precondition("samples must be finite"));
        }
        let h = (hi - lo) / (values.len() - 1) as f64;
        let moments = clamped_moments(&values, h);
        let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self { lo, h, values, moments, sup })
    }

    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::precondition("need at least two grid intervals"));
        }
        let h = (hi - lo) / n as f64;
        Self::new(lo, hi, (0..=n).map(|k| f(lo + h * k as f64)).collect())
    }

    fn hi(&self) -> f64 {
        self.lo + self.h * (self.values.len() - 1) as f64
    }

    fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if x < self.lo || x > self.hi() {
            return None;
        }
        let last = self.values.len() - 2;
        let k = (((x - self.lo) / self.h).floor() as usize).min(last);
        Some((k, x - (self.lo + self.h * k as f64)))
    }
}

/// Second derivatives of the clamped spline (`S'(lo) = S'(hi) = 0`), Thomas algorithm.
fn clamped_moments(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut diag = vec![4.0; n];
    diag[0] = 2.0;
    diag[n - 1] = 2.0;
    let mut rhs = vec![0.0; n];
    let k = 6.0 / (h * h);
    rhs[0] = k * (y[1] - y[0]);
    rhs[n - 1] = -k * (y[n - 1] - y[n - 2]);
    for i in 1..n - 1 {
        rhs[i] = k * (y[i + 1] - 2.0 * y[i] + y[i - 1]);
    }
    // Off-diagonals are all 1.
    for i in 1..n {
        let w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - m[i + 1]) / diag[i];
    }
    m
}

impl CompactProfile for SampledFunction {
    fn value(&self, x: f64) -> f64 {
        let Some((k, t)) = self.locate(x) else { return 0.0 };
        let h = self.h;
        let (m0, m1) = (self.moments[k], self.moments[k + 1]);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let u = h - t;
        m0 * u * u * u / (6.0 * h) + m1 * t * t * t / (6.0 * h) + (y0 / h - m0 * h / 6.0) * u + (y1 / h - m1 * h / 6.0) * t
    }

    fn first_derivative(&self, x: f64) -> Option<f64> {
        let Some((k, t)) = self.locate(x) else { return Some(0.0) };
        let h = self.h;
        let (m0, m1) = (self.moments[k], self.moments[k + 1]);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let u = h - t;
        Some(-m0 * u * u / (2.0 * h) + m1 * t * t / (2.0 * h) + (y1 - y0) / h - (m1 - m0) * h / 6.0)
    }

    fn second_derivative(&self, x: f64) -> Option<f64> {
        let Some((k, t)) = self.locate(x) else { return Some(0.0) };
        let h = self.h;
        Some((self.moments[k] * (h - t) + self.moments[k + 1] * t) / h)
    }

    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi())
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.lo, self.hi()]
    }

    fn length_scale(&self) -> f64 {
        16.0 * self.h
    }

    fn sup_abs(&self) -> f64 {
        self.sup
    }
}

/// Quintic smoothstep `6t^5 - 15t^4 + 10t^3` with its first two derivatives.
fn smoothstep5(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let t2 = t * t;
    (
        t2 * t * (10.0 - 15.0 * t + 6.0 * t2),
        30.0 * t2 * (1.0 - t) * (1.0 - t),
        60.0 * t * (1.0 - t) * (1.0 - 2.0 * t),
    )
}

/// `cos(z x) W(x)`, where `W = 1` on `|x| ≤ L - τ` and falls to 0 at `|x| = L`.
#[derive(Debug, Clone, Copy)]
pub struct WindowedPlaneWave {
    z: f64,
    half_width: f64,
    taper: f64,
}

impl WindowedPlaneWave {
    pub fn new(z: f64, half_width: f64, taper: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::precondition("frequency must be finite"));
        }
        if !(half_width > 0.0 && taper > 0.0 && taper <= half_width) {
            return Err(Error::precondition(format!(
                "window needs 0 < taper <= L, got L = {half_width}, taper = {taper}"
            )));
        }
        Ok(Self { z, half_width, taper })
    }

    pub fn frequency(&self) -> f64 {
        self.z
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    fn window(&self, x: f64) -> (f64, f64, f64) {
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let (w, d1, d2) = smoothstep5((self.half_width - x.abs()) / self.taper);
        (w, -sign * d1 / self.taper, d2 / (self.taper * self.taper))
    }
}

impl CompactProfile for WindowedPlaneWave {
    fn value(&self, x: f64) -> f64 {
        (self.z * x).cos() * self.window(x).0
    }

    fn first_derivative(&self, x: f64) -> Option<f64> {
        let (w, dw, _) = self.window(x);
        let (s, c) = (self.z * x).sin_cos();
        Some(c * dw - self.z * s * w)
    }

    fn second_derivative(&self, x: f64) -> Option<f64> {
        let (w, dw, ddw) = self.window(x);
        let (s, c) = (self.z * x).sin_cos();
        Some(c * ddw - 2.0 * self.z * s * dw - self.z * self.z * c * w)
    }

    fn support(&self) -> (f64, f64) {
        (-self.half_width, self.half_width)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let inner = self.half_width - self.taper;
        vec![-self.half_width, -inner, inner, self.half_width]
    }

    fn length_scale(&self) -> f64 {
        let mut l = self.taper.min(self.half_width);
        if self.z != 0.0 {
            l = l.min(1.0 / self.z.abs());
        }
        l
    }

    fn sup_abs(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_smooth_function() {
        let f = |x: f64| (std::f64::consts::PI * x).cos() + 1.0;
        let sp = SampledFunction::from_fn(-1.0, 1.0, 400, f).unwrap();
        for k in 0..97 {
            let x = -0.97 + 0.02 * k as f64;
            assert!((sp.value(x) - f(x)).abs() < 1e-9, "x={x}");
            let d2 = -std::f64::consts::PI.powi(2) * (std::f64::consts::PI * x).cos();
            assert!((sp.second_derivative(x).unwrap() - d2).abs() < 1e-3);
        }
        assert_eq!(sp.value(1.5), 0.0);
        assert!(sp.first_derivative(-1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn spline_interpolates_nodes() {
        let sp = SampledFunction::new(0.0, 3.0, vec![0.0, 1.0, -2.0, 0.0]).unwrap();
        assert!((sp.value(1.0) - 1.0).abs() < 1e-14);
        assert!((sp.value(2.0) + 2.0).abs() < 1e-14);
        assert!(SampledFunction::new(0.0, 1.0, vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn window_derivatives_by_differences() {
        let w = WindowedPlaneWave::new(2.0, 5.0, 1.5).unwrap();
        let h = 1e-5;
        for x in [-4.6, -3.7, 0.3, 3.9, 4.2] {
            let fd1 = (w.value(x + h) - w.value(x - h)) / (2.0 * h);
            let fd2 = (w.value(x + h) - 2.0 * w.value(x) + w.value(x - h)) / (h * h);
            assert!((fd1 - w.first_derivative(x).unwrap()).abs() < 1e-8);
            assert!((fd2 - w.second_derivative(x).unwrap()).abs() < 1e-4);
        }
        assert_eq!(w.value(5.0), 0.0);
    }
}
