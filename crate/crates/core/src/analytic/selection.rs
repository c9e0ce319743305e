//! p_n(θ) = Σ_{k=1}^{n} (−1)^{k+1} C(n,k) P_k(θ), evaluated in fixed point
//! with n + 64 bits below the binary point (plus guard bits) so the
//! cancellation between terms of size up to 2^n costs nothing.

use num_bigint::BigInt;

use super::{NormalizedParams, Threshold};
use crate::error::{Error, Result};
use crate::specfun::DiversityOrder;
use crate::xprec::Fixed;

/// Largest n accepted by the extended-precision evaluation.
pub const SELECTION_MAX_N: usize = 4096;

/// Probability that at least one of n antennas has SIR above θ.
pub fn selection_combining_prob(
    p: &NormalizedParams,
    n: DiversityOrder,
    theta: Threshold,
) -> Result<f64> {
    let n = n.get();
    check_budget(n)?;
    let load = p.load(theta);
    if load == 0.0 {
        return Ok(1.0);
    }
    let table = JointTable::new(load, p.stability(), n);
    Ok(table.union_prob(n))
}

/// p_1 … p_{n_max} sharing one table of P_k at the precision of n_max.
pub fn selection_combining_curve(
    p: &NormalizedParams,
    n_max: DiversityOrder,
    theta: Threshold,
) -> Result<Vec<f64>> {
    let n_max = n_max.get();
    check_budget(n_max)?;
    let load = p.load(theta);
    if load == 0.0 {
        return Ok(vec![1.0; n_max]);
    }
    let table = JointTable::new(load, p.stability(), n_max);
    Ok((1..=n_max).map(|n| table.union_prob(n)).collect())
}

fn check_budget(n: usize) -> Result<()> {
    if n > SELECTION_MAX_N {
        return Err(Error::PrecisionExhausted {
            requested: n,
            max: SELECTION_MAX_N,
        });
    }
    Ok(())
}

/// P_1 … P_{n_max} in fixed point.
struct JointTable {
    fx: Fixed,
    joint: Vec<BigInt>,
}

impl JointTable {
    fn new(load: f64, stability: f64, n_max: usize) -> Self {
        let guard = 32 + usize::BITS as u64 - n_max.leading_zeros() as u64;
        let fx = Fixed::new(n_max as u64 + 64 + guard);
        let load_fx = fx.from_f64(load);
        let stab_fx = fx.from_f64(stability);
        let mut poly = fx.one();
        let mut joint = Vec::with_capacity(n_max);
        for k in 1..=n_max {
            joint.push(fx.exp_neg(&fx.mul(&load_fx, &poly)));
            // D_{k+1} = D_k (1 + δ/k)
            poly = &poly + fx.mul(&poly, &stab_fx) / BigInt::from(k);
        }
        Self { fx, joint }
    }

    fn union_prob(&self, n: usize) -> f64 {
        let mut binom = BigInt::from(1u32);
        let mut acc = BigInt::from(0u32);
        for k in 1..=n {
            // C(n, k) from C(n, k−1)
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
            let term = &binom * &self.joint[k - 1];
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        self.fx.to_f64(&acc)
    }
}
