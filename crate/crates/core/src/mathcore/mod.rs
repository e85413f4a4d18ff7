//! Special functions, angular-momentum algebra and quadrature.

mod auxiliary;
pub mod grid;
mod harmonics;
mod polynomial;
pub mod quadrature;
mod scalar;
mod special;

pub use auxiliary::{aux_a, aux_a_table, aux_b, aux_b_recurrence, aux_b_series, aux_b_table};
pub use harmonics::{
    gaunt, gaunt_3j, real_gaunt, real_harmonic_rotation, real_harmonics_unit, RealHarmonics, real_spherical_harmonic,
    spherical_harmonic, wigner_3j, GauntKey,
};
pub use polynomial::{
    assoc_laguerre, assoc_legendre, legendre_derivative_coeffs, legendre_p, legendre_p_table,
    legendre_q_table, legendre_q_table_shifted,
};
pub use quadrature::{quad, Domain, QuadResult, QuadratureSpec};
pub use scalar::Scalar;
pub use special::{
    binomial, double_factorial, expint_e1, factorial, gamma, incomplete_gamma, ln_gamma,
    pochhammer, spherical_bessel_j, upper_gamma_int,
};
