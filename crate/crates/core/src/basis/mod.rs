//! Exponential-type basis functions, molecules and the input format.

mod function;
mod molecule;
mod parse;
mod sturmian;

pub use function::{BasisFunction, OrbitalKind};
pub use molecule::{Center, Molecule};
pub use parse::parse_molecule;
pub use sturmian::{b_function_radial, sturmian_to_bfunctions, BFunctionExpansion};
