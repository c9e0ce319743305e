//! Log-gamma and beta functions on the positive real axis.
//!
//! `ln_gamma` uses Pugh's 11-term Lanczos approximation away from the
//! zeros of ln Γ at 1 and 2, and a Taylor expansion of ln Γ(1 + ε) inside
//! [0.5, 2.5] so the result keeps full relative accuracy where ln Γ
//! crosses zero.

use std::sync::OnceLock;

use crate::error::{domain, Result};

const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.4857408913875355e-5,
    1.0514237858172197,
    -3.4568709722201625,
    4.512277094668948,
    -2.9828522532357664,
    1.056397115771267,
    -1.9542877319164587e-1,
    1.709705434044412e-2,
    -5.719261174043057e-4,
    4.633994733599057e-6,
    -2.7199490848860772e-9,
];
/// ln(2·sqrt(e/π))
const LN_2_SQRT_E_OVER_PI: f64 = 0.6207822376352452;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Highest power kept in the ln Γ(1 + ε) expansion, |ε| ≤ 1/2.
const SERIES_TERMS: usize = 32;

/// Natural logarithm of the gamma function for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return domain(format!("log_gamma requires x > 0, got {x}"));
    }
    Ok(ln_gamma_pos(x))
}

/// Beta function β(x, y) = Γ(x)Γ(y)/Γ(x+y), evaluated through `ln_beta`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    Ok(ln_beta(x, y)?.exp())
}

/// ln β(x, y) for x, y > 0.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    if x.is_nan() || y.is_nan() || x <= 0.0 || y <= 0.0 {
        return domain(format!("beta requires positive arguments, got ({x}, {y})"));
    }
    let (big, small) = if x >= y { (x, y) } else { (y, x) };
    Ok(ln_gamma_pos(small) - ln_gamma_shift(big, small))
}

/// ln Γ(a + b) − ln Γ(a) for a > 0, b ≥ 0.
///
/// For a ≥ 10 the difference is formed from Stirling's series directly, so
/// no two large logarithms are subtracted.
pub(crate) fn ln_gamma_shift(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    if a < 10.0 {
        return ln_gamma_pos(a + b) - ln_gamma_pos(a);
    }
    let ab = a + b;
    (a - 0.5) * (b / a).ln_1p() + b * ab.ln() - b + (stirling_tail(ab) - stirling_tail(a))
}

/// Γ(x) for moderate positive x.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    ln_gamma_pos(x).exp()
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // Γ(x) = Γ(1 + x)/x
        return ln_gamma_1p(x) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_1p(x - 1.0);
    }
    if x <= 2.5 {
        let eps = x - 2.0;
        return eps.ln_1p() + ln_gamma_1p(eps);
    }
    ln_gamma_lanczos(x)
}

/// ln Γ(1 + ε) for |ε| ≤ 1/2:
/// −ln(1+ε) + (1−γ)ε + Σ_{k≥2} (−1)^k (ζ(k)−1) ε^k / k.
fn ln_gamma_1p(eps: f64) -> f64 {
    let zeta = zeta_minus_one();
    let mut sum = 0.0;
    // Horner from the highest power down.
    for k in (2..=SERIES_TERMS).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum = sum * eps + sign * zeta[k] / k as f64;
    }
    sum *= eps * eps;
    -eps.ln_1p() + (1.0 - EULER_GAMMA) * eps + sum
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let s = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, d)| s + d / (x + i as f64 - 1.0));
    s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
}

/// ln Γ(x) − [(x−½)ln x − x + ½ln 2π], accurate to ~1e-17 for x ≥ 10.
fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0
                    + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0 + r2 * (1.0 / 156.0)))))))
}

/// ζ(k) − 1 for k = 0..=SERIES_TERMS (entries 0 and 1 unused).
fn zeta_minus_one() -> &'static [f64; SERIES_TERMS + 1] {
    static TABLE: OnceLock<[f64; SERIES_TERMS + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; SERIES_TERMS + 1];
        for (k, slot) in table.iter_mut().enumerate().skip(2) {
            *slot = zeta_minus_one_at(k as i32);
        }
        table
    })
}

/// Σ_{m≥2} m^{−k}: explicit terms below N, Euler–Maclaurin tail from N.
fn zeta_minus_one_at(k: i32) -> f64 {
    const N: f64 = 20.0;
    let kf = k as f64;
    let nk = N.powi(-k);
    // Bernoulli corrections B2..B10, each multiplied by the rising factorial of k.
    let rising = |len: i32| (0..len).fold(1.0, |acc, j| acc * (kf + j as f64));
    let tail = N * nk / (kf - 1.0) + 0.5 * nk + rising(1) * nk / N / 12.0
        - rising(3) * nk / N.powi(3) / 720.0
        + rising(5) * nk / N.powi(5) / 30240.0
        - rising(7) * nk / N.powi(7) / 1_209_600.0
        + rising(9) * nk / N.powi(9) * (5.0 / 66.0) / 3_628_800.0;
    let mut sum = tail;
    for m in (2..N as i32).rev() {
        sum += (m as f64).powi(-k);
    }
    sum
}
