use nalgebra::DMatrix;

use super::primitive::{primitive_overlap, Primitive, SAME_CENTER};
use crate::basis::{BasisFunction, Molecule};
use crate::{IntegralError, Real, Vec3};

fn prims(a: &BasisFunction, b: &BasisFunction, mol: &Molecule) -> Result<(Primitive, Primitive), IntegralError> {
    Ok((
        Primitive::from_sto(a, mol.position_of(a))?,
        Primitive::from_sto(b, mol.position_of(b))?,
    ))
}

/// ⟨χ₁|χ₂⟩ for two STOs of `mol`.
pub fn overlap(a: &BasisFunction, b: &BasisFunction, mol: &Molecule) -> Result<Real, IntegralError> {
    let (pa, pb) = prims(a, b, mol)?;
    primitive_overlap(&pa, &pb)
}

/// ⟨χ₁|−½∇²|χ₂⟩, by applying ∇² to χ₂ analytically.
pub fn kinetic(a: &BasisFunction, b: &BasisFunction, mol: &Molecule) -> Result<Real, IntegralError> {
    let (pa, pb) = prims(a, b, mol)?;
    let mut t = 0.0;
    for term in pb.laplacian() {
        t += primitive_overlap(&pa, &term)?;
    }
    Ok(-0.5 * t)
}

/// ⟨χ₁|1/r_C|χ₂⟩ for a unit point charge at `nucleus`.
pub fn nuclear_attraction(
    a: &BasisFunction,
    b: &BasisFunction,
    nucleus: &Vec3,
    mol: &Molecule,
) -> Result<Real, IntegralError> {
    let (pa, pb) = prims(a, b, mol)?;
    primitive_nuclear(&pa, &pb, nucleus)
}

/// ⟨a|1/r_C|b⟩ for primitives.
///
/// When C sits on one of the two centers the 1/r factor lowers that power of
/// r and the result is an overlap. Otherwise the potential of the pair
/// density is evaluated at C.
pub(crate) fn primitive_nuclear(a: &Primitive, b: &Primitive, c: &Vec3) -> Result<Real, IntegralError> {
    if (a.center - c).norm() < SAME_CENTER && a.k >= a.l {
        return primitive_overlap(&a.times_r(-1), b);
    }
    if (b.center - c).norm() < SAME_CENTER && b.k >= b.l {
        return primitive_overlap(a, &b.times_r(-1));
    }
    crate::poisson::pair_potential_at(a, b, c)
}

fn matrix<F>(mol: &Molecule, f: F) -> Result<DMatrix<Real>, IntegralError>
where
    F: Fn(&BasisFunction, &BasisFunction) -> Result<Real, IntegralError>,
{
    let n = mol.nbasis();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = f(&mol.basis[i], &mol.basis[j])?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

pub fn overlap_matrix(mol: &Molecule) -> Result<DMatrix<Real>, IntegralError> {
    matrix(mol, |a, b| overlap(a, b, mol))
}

pub fn kinetic_matrix(mol: &Molecule) -> Result<DMatrix<Real>, IntegralError> {
    matrix(mol, |a, b| kinetic(a, b, mol))
}

/// Electron–nuclear potential matrix −Σ_C Z_C ⟨χ_i|1/r_C|χ_j⟩.
pub fn nuclear_matrix(mol: &Molecule) -> Result<DMatrix<Real>, IntegralError> {
    matrix(mol, |a, b| {
        let mut v = 0.0;
        for (c, &z) in mol.centers.iter().zip(&mol.nuclear_charges) {
            v -= z * nuclear_attraction(a, b, &c.position, mol)?;
        }
        Ok(v)
    })
}
