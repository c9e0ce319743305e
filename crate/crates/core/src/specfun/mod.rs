//! Gamma/beta special functions and the diversity polynomial family.
//!
//! Everything here is a pure function of its arguments.

mod diversity;
mod gamma;

pub use diversity::{
    diversity_poly, diversity_poly_bounds, diversity_poly_coefficients, diversity_poly_derivative,
    DiversityBounds, DiversityOrder, PolynomialCoefficients, COEFFICIENT_CAP, PRODUCT_FORM_MAX_N,
};
pub use gamma::{beta, ln_beta, log_gamma};

pub(crate) use diversity::{diversity_poly_unchecked, ln_diversity_poly_unchecked};
pub(crate) use gamma::{gamma_pos, ln_gamma_pos};
