//! Real gamma function, unit-sphere and unit-ball measures, and the
//! normalisation constant of the fractional Laplacian.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

// g = 7, n = 9 (Godfrey).
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        return PI / ((PI * x).sin() * lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // t^(x+1/2) split in two halves so the power does not overflow before exp(-t) is applied.
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * series
}

/// Γ(x) for positive finite `x`.
///
/// Integer arguments up to 21 are returned exactly.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("gamma requires a positive finite argument, got {x}")));
    }
    if x == x.floor() && x <= 21.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    Ok(lanczos(x))
}

fn check_dim(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    Ok(())
}

/// Surface area `ω_{N-1} = 2π^{N/2} / Γ(N/2)` of the unit sphere in ℝᴺ.
///
/// `N = 1` gives 2, the counting measure of S⁰ = {−1, 1}.
pub fn sphere_area(n: u32) -> Result<f64> {
    check_dim(n)?;
    Ok(match n {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            let half = n as f64 / 2.0;
            2.0 * PI.powf(half) / gamma(half)?
        }
    })
}

/// Volume `|B_1| = ω_{N-1} / N` of the unit ball.
pub fn unit_ball_volume(n: u32) -> Result<f64> {
    Ok(sphere_area(n)? / n as f64)
}

pub(crate) fn check_order(s: f64, what: &str) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("{what} must lie in (0, 1), got {s}")));
    }
    Ok(())
}

/// `c_{N,s} = 2^{2s} π^{-N/2} s Γ((N+2s)/2) / Γ(1-s)`.
pub fn frac_norm_const(n: u32, s: f64) -> Result<f64> {
    check_dim(n)?;
    check_order(s, "fractional order s")?;
    let nf = n as f64;
    Ok(4f64.powf(s) * PI.powf(-nf / 2.0) * s * gamma((nf + 2.0 * s) / 2.0)? / gamma(1.0 - s)?)
}
