use super::BasisFunction;
use crate::{BasisError, Real, Vec3};

/// Labelled point in space, in bohr.
#[derive(Debug, Clone, PartialEq)]
pub struct Center {
    pub label: String,
    pub position: Vec3,
}

/// Nuclear framework plus an ordered basis; the basis order defines the
/// integral index space.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub centers: Vec<Center>,
    pub nuclear_charges: Vec<Real>,
    pub basis: Vec<BasisFunction>,
}

impl Molecule {
    pub fn new(centers: Vec<Center>, nuclear_charges: Vec<Real>, basis: Vec<BasisFunction>) -> Result<Self, BasisError> {
        let mol = Molecule { centers, nuclear_charges, basis };
        mol.validate()?;
        Ok(mol)
    }

    pub fn validate(&self) -> Result<(), BasisError> {
        if self.centers.is_empty() {
            return Err(BasisError::NoCenters);
        }
        if self.basis.is_empty() {
            return Err(BasisError::EmptyBasis);
        }
        if self.nuclear_charges.len() != self.centers.len() {
            return Err(BasisError::Quantum(format!(
                "{} charges for {} centers",
                self.nuclear_charges.len(),
                self.centers.len()
            )));
        }
        for (c, &z) in self.centers.iter().zip(&self.nuclear_charges) {
            if !c.position.iter().all(|x| x.is_finite()) {
                return Err(BasisError::Quantum(format!("center {} has non-finite coordinates", c.label)));
            }
            if !(z > 0.0) {
                return Err(BasisError::Quantum(format!("center {} has charge {z}; must be > 0", c.label)));
            }
        }
        for bf in &self.basis {
            bf.validate()?;
            if bf.center_index >= self.centers.len() {
                return Err(BasisError::Quantum(format!("center index {} out of range", bf.center_index)));
            }
        }
        Ok(())
    }

    pub fn nbasis(&self) -> usize {
        self.basis.len()
    }

    pub fn position_of(&self, bf: &BasisFunction) -> Vec3 {
        self.centers[bf.center_index].position
    }

    /// Electron count of the neutral molecule (sum of charges, rounded).
    pub fn electron_count(&self) -> i64 {
        self.nuclear_charges.iter().sum::<Real>().round() as i64
    }

    pub fn nuclear_repulsion(&self) -> Real {
        let mut e = 0.0;
        for i in 0..self.centers.len() {
            for j in 0..i {
                let r = (self.centers[i].position - self.centers[j].position).norm();
                e += self.nuclear_charges[i] * self.nuclear_charges[j] / r;
            }
        }
        e
    }

    /// Copy with every center shifted by `shift`.
    pub fn translated(&self, shift: &Vec3) -> Molecule {
        let mut out = self.clone();
        for c in &mut out.centers {
            c.position += shift;
        }
        out
    }

    /// Copy with every center rotated by `rot` about the origin.
    ///
    /// Angular functions keep their lab-frame orientation, so the result is
    /// physically equivalent only for bases made of complete l-shells.
    pub fn rotated(&self, rot: &nalgebra::Matrix3<Real>) -> Molecule {
        let mut out = self.clone();
        for c in &mut out.centers {
            c.position = rot * c.position;
        }
        out
    }

    /// Two fragments side by side; center and basis indices of `other` are
    /// shifted after those of `self`.
    pub fn combined(&self, other: &Molecule) -> Molecule {
        let offset = self.centers.len();
        let mut out = self.clone();
        out.centers.extend(other.centers.iter().cloned());
        out.nuclear_charges.extend(other.nuclear_charges.iter().copied());
        out.basis.extend(other.basis.iter().map(|bf| BasisFunction {
            center_index: bf.center_index + offset,
            ..*bf
        }));
        out
    }
}
