//! Unit conversions, kept in one place.

/// kcal/mol per hartree.
pub const HARTREE_TO_KCAL_PER_MOL: f64 = 627.509474;
