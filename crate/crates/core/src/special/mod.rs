//! Real-order Bessel functions, their zeros and extrema, and Gauss-Legendre
//! quadrature.

mod bessel;
mod quadrature;
mod roots;

pub use bessel::{bessel_j, bessel_j_prime, BesselOrder};
pub use quadrature::{
    gauss_legendre, integrate_converged, integrate_converged_complex, QuadratureRule, MAX_NODES,
    MIN_NODES,
};
pub use roots::{
    find_extrema, find_extrema_with_step, find_zeros, find_zeros_with_step, DEFAULT_SCAN_STEP,
};

pub(crate) use bessel::jq;
#[cfg(test)]
pub(crate) use bessel::jq_prime;
pub(crate) use quadrature::cached_rule;
