//! Interference from outside the sampling disk.
//!
//! For weights (θ_j, m_j) the Poisson generating functional gives
//!
//!   E ∏_{‖x‖>R} ∏_j (1 + θ_j‖x‖^{−α})^{−m_j}
//!     = exp(−2πλ ∫_R^∞ (1 − ∏_j (1 + θ_j s^{−α})^{−m_j}) s ds).
//!
//! With w = s^{−(α−2)} and y = s^{−α} = w^{α/(α−2)} the integral becomes
//! (α−2)^{−1} ∫_0^{R^{2−α}} H(y) dw where H(y) = (1 − ∏(1+θ_j y)^{−m_j})/y is
//! bounded with H(0) = Σ m_jθ_j.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::analytic::ModelParams;

const NODES: usize = 20;
const MAX_PANELS: usize = 2000;

/// Log of the generating-functional factor for the region ‖x‖ > `radius`.
/// `weights` holds (θ_r, multiplicity) pairs.
pub fn far_field_log_factor(model: &ModelParams, radius: f64, weights: &[(f64, f64)]) -> f64 {
    let total: f64 = weights.iter().map(|&(t, m)| t * m).sum();
    if total == 0.0 {
        return 0.0;
    }
    let a = model.path_loss_exp();
    let p = a / (a - 2.0);
    let theta_max = weights.iter().fold(0.0f64, |acc, &(t, _)| acc.max(t));
    let h = |w: f64| -> f64 {
        let y = w.powf(p);
        let s: f64 = weights.iter().map(|&(t, m)| m * (t * y).ln_1p()).sum();
        if y == 0.0 || s == 0.0 {
            total
        } else {
            -(-s).exp_m1() / y
        }
    };

    let (nodes, wts) = gauss_legendre();
    let mut hi = radius.powf(2.0 - a);
    let mut integral = 0.0;
    for _ in 0..MAX_PANELS {
        // below this point H equals Σ m_jθ_j to double precision
        if theta_max * hi.powf(p) < 1e-17 {
            break;
        }
        let lo = 0.5 * hi;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let panel: f64 = nodes
            .iter()
            .zip(wts.iter())
            .map(|(&x, &wt)| wt * h(mid + half * x))
            .sum();
        integral += half * panel;
        hi = lo;
    }
    integral += total * hi;
    -model.intensity() * 2.0 * PI * integral / (a - 2.0)
}

/// Nodes and weights of the Gauss–Legendre rule on [−1, 1].
fn gauss_legendre() -> &'static ([f64; NODES], [f64; NODES]) {
    static RULE: OnceLock<([f64; NODES], [f64; NODES])> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut x = [0.0; NODES];
        let mut w = [0.0; NODES];
        let n = NODES as f64;
        for i in 0..NODES {
            let mut z = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(NODES, z);
                dp = d;
                let step = p / d;
                z -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(NODES, z);
            if d != 0.0 {
                dp = d;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

/// P_n(z) and P_n'(z).
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
