//! The diversity polynomial D_n(x) = Γ(n+x)/(Γ(n)Γ(1+x)) = ∏_{i=1}^{n−1} (1 + x/i).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::gamma::{ln_gamma_pos, ln_gamma_shift};
use crate::error::{domain, Error, Result};

/// Largest n evaluated by the explicit product; above it D_n is evaluated
/// as exp of a log-gamma difference.
pub const PRODUCT_FORM_MAX_N: usize = 64;

/// Largest n for which the exact coefficient expansion is offered.
pub const COEFFICIENT_CAP: usize = 64;

/// Number of receive antennas, n ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiversityOrder(usize);

impl DiversityOrder {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("diversity order must be at least 1");
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for DiversityOrder {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<DiversityOrder> for usize {
    fn from(n: DiversityOrder) -> usize {
        n.0
    }
}

fn check_unit_interval(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("diversity polynomial is evaluated on [0, 1], got x = {x}"));
    }
    Ok(())
}

/// D_n(x) for x in [0, 1].
pub fn diversity_poly(n: DiversityOrder, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    Ok(diversity_poly_unchecked(n.0, x))
}

pub(crate) fn diversity_poly_unchecked(n: usize, x: f64) -> f64 {
    if n <= PRODUCT_FORM_MAX_N {
        (1..n).fold(1.0, |acc, i| acc * (1.0 + x / i as f64))
    } else {
        ln_diversity_poly_unchecked(n, x).exp()
    }
}

/// ln D_n(x) without domain checks.
pub(crate) fn ln_diversity_poly_unchecked(n: usize, x: f64) -> f64 {
    if n <= PRODUCT_FORM_MAX_N {
        diversity_poly_unchecked(n, x).ln()
    } else {
        ln_gamma_shift(n as f64, x) - ln_gamma_pos(1.0 + x)
    }
}

/// D_n'(x) = D_n(x) · Σ_{i=1}^{n−1} 1/(i + x).
pub fn diversity_poly_derivative(n: DiversityOrder, x: f64) -> Result<f64> {
    check_unit_interval(x)?;
    if n.0 == 1 {
        return Ok(0.0);
    }
    // smallest terms first
    let harmonic: f64 = (1..n.0).rev().map(|i| 1.0 / (i as f64 + x)).sum();
    Ok(diversity_poly_unchecked(n.0, x) * harmonic)
}

/// Lower bound n^x, asymptotically tight upper bound n^x/Γ(1+x), and the
/// chord bound 1 + (n−1)x from convexity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityBounds {
    pub lower: f64,
    pub upper_asymptotic: f64,
    pub upper_linear: f64,
}

pub fn diversity_poly_bounds(n: DiversityOrder, x: f64) -> Result<DiversityBounds> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("bounds are stated for x in (0, 1), got x = {x}"));
    }
    let nf = n.0 as f64;
    let lower = nf.powf(x);
    Ok(DiversityBounds {
        lower,
        upper_asymptotic: lower / ln_gamma_pos(1.0 + x).exp(),
        upper_linear: 1.0 + (nf - 1.0) * x,
    })
}

/// Exact coefficients of D_n: coefficient k is `numerators[k] / denominator`,
/// where the numerators are unsigned Stirling numbers of the first kind
/// c(n, k+1) and the denominator is (n−1)!.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients {
    numerators: Vec<BigUint>,
    denominator: BigUint,
    coeffs: Vec<f64>,
}

impl PolynomialCoefficients {
    /// Coefficients as floating point, index k holds the coefficient of x^k.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient k as a reduced fraction (numerator, denominator).
    pub fn exact(&self, k: usize) -> Option<(BigUint, BigUint)> {
        let num = self.numerators.get(k)?;
        let g = num.gcd(&self.denominator);
        Some((num / &g, &self.denominator / &g))
    }

    pub fn numerators(&self) -> &[BigUint] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Horner evaluation of the floating-point coefficients.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Exact value of (n−1)!·D_n(x) at an integer point.
    pub fn evaluate_scaled_integer(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.numerators
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + BigInt::from(c.clone()))
    }
}

pub fn diversity_poly_coefficients(n: DiversityOrder) -> Result<PolynomialCoefficients> {
    if n.0 > COEFFICIENT_CAP {
        return Err(Error::CoefficientCap {
            requested: n.0,
            cap: COEFFICIENT_CAP,
        });
    }
    // Expand ∏_{i=1}^{n−1} (x + i).
    let mut numerators = vec![BigUint::one()];
    let mut denominator = BigUint::one();
    for i in 1..n.0 {
        let iu = BigUint::from(i);
        let mut next = vec![BigUint::zero(); numerators.len() + 1];
        for (k, c) in numerators.iter().enumerate() {
            next[k] += c * &iu;
            next[k + 1] += c;
        }
        numerators = next;
        denominator *= iu;
    }
    let den = denominator.to_f64().unwrap_or(f64::INFINITY);
    let coeffs = numerators
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY) / den)
        .collect();
    Ok(PolynomialCoefficients {
        numerators,
        denominator,
        coeffs,
    })
}
