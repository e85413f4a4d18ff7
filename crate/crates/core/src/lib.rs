//! Molecular integrals over exponential-type orbitals.
//!
//! The crate evaluates one- and two-electron integrals over Slater-type
//! orbitals through three independent routes:
//!
//! * closed forms in prolate spheroidal coordinates ([`twocenter`]),
//! * spectral potentials of radial and two-center densities ([`poisson`]),
//! * a Laguerre-based resolution of the Coulomb operator ([`resolution`]).
//!
//! On top of these sit a closed-shell Hartree–Fock driver ([`scf`]) and the
//! nuclear-dipole integral machinery used for shielding tensors ([`nmr`]).
//!
//! Special functions and quadrature in [`mathcore`] are generic over
//! [`mathcore::Scalar`]; the integral engines work in [`Real`].

// `!(x > 0.0)` rejects NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod constants;
pub mod eri;
pub mod error;
pub mod geometry;
pub mod mathcore;
pub mod nmr;
pub mod poisson;
pub mod resolution;
pub mod scf;
pub mod twocenter;

pub use error::{BasisError, IntegralError, MathError, ScfError};

/// Working precision of the integral engines.
pub type Real = f64;
/// Complex scalar at working precision.
pub type Complex = num_complex::Complex<f64>;
/// Single-precision complex scalar, for callers of the generic special functions.
pub type Complex32 = num_complex::Complex<f32>;
/// Cartesian 3-vector in bohr.
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3×3 real matrix, used for rotations.
pub type Mat3 = nalgebra::Matrix3<f64>;
