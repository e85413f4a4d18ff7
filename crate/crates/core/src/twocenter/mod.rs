//! Two-center one-electron integrals over Slater-type orbitals.
//!
//! Overlaps follow the Mulliken–Roothaan separation in prolate spheroidal
//! coordinates: the product of the two solid harmonics and the volume element
//! becomes an integer polynomial Σ Y_ij μ^i ν^j, and each monomial integrates
//! to A_i(p) B_j(q). Kinetic and nuclear-attraction integrals reduce to
//! overlaps of primitives with shifted powers of r where possible.
//!
//! Angular factors in this module are real spherical harmonics S_lm.

mod expansion;
mod one_electron;
mod primitive;

pub use expansion::{binomial_matrix, raw_expansion, OverlapExpansion, ProlateFrame};
pub use one_electron::{kinetic, kinetic_matrix, nuclear_attraction, nuclear_matrix, overlap, overlap_matrix};
pub use primitive::{primitive_overlap, Primitive};
pub(crate) use primitive::rotation_row;
