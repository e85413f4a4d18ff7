//! Coulomb integrals from exact potentials of STO product densities.
//!
//! One-center densities have closed-form multipole potentials built from
//! incomplete gamma functions. Two-center densities are handled through the
//! Neumann expansion in prolate spheroidal coordinates, which also provides
//! the potential of a pair density at arbitrary points: that is the route
//! for three-center nuclear attraction and the per-integral fallback for
//! three- and four-center repulsion integrals.

mod fallback;
mod neumann;
mod radial;

pub use fallback::{fallback_eri, numeric_pair_potential, DensityGrid, DensityPotential};
pub use neumann::{pair_potential_at, primitive_eri_two_center, AxisFrame, Moments, MuGrid, NeumannGrid, PairPotential};
pub use radial::{
    eri_one_center, primitive_eri_one_center, radial_coulomb, radial_potential, table1_convention, RadialDensity,
};

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::basis::{BasisFunction, Molecule};
use crate::twocenter::Primitive;
use crate::{IntegralError, Real};

/// (ab|cd) over STOs of `mol` when at most two distinct centers are involved.
pub fn eri_two_center(
    a: &BasisFunction,
    b: &BasisFunction,
    c: &BasisFunction,
    d: &BasisFunction,
    mol: &Molecule,
) -> Result<Real, IntegralError> {
    let p = |bf: &BasisFunction| Primitive::from_sto(bf, mol.position_of(bf));
    let (pa, pb, pc, pd) = (p(a)?, p(b)?, p(c)?, p(d)?);
    primitive_eri(&pa, &pb, &pc, &pd)
}

/// Dispatch to the one- or two-center closed route.
pub fn primitive_eri(a: &Primitive, b: &Primitive, c: &Primitive, d: &Primitive) -> Result<Real, IntegralError> {
    match primitive_eri_one_center(a, b, c, d) {
        Err(IntegralError::WrongRoute(_)) => primitive_eri_two_center(a, b, c, d),
        other => other,
    }
}

/// Closed-route ERIs over one molecule, sharing one Neumann grid per center
/// pair and the moments of every pair density on it.
pub struct PoissonEngine {
    prims: Vec<Primitive>,
    centers: Vec<usize>,
    grids: RwLock<HashMap<(usize, usize), Arc<NeumannGrid>>>,
    moments: RwLock<HashMap<(usize, usize, usize, usize), Arc<Moments>>>,
}

impl PoissonEngine {
    pub fn new(mol: &Molecule) -> Result<Self, IntegralError> {
        let prims = mol
            .basis
            .iter()
            .map(|bf| Primitive::from_sto(bf, mol.position_of(bf)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PoissonEngine {
            prims,
            centers: mol.basis.iter().map(|bf| bf.center_index).collect(),
            grids: RwLock::new(HashMap::new()),
            moments: RwLock::new(HashMap::new()),
        })
    }

    /// (ij|kl) by basis indices; at most two distinct centers.
    pub fn eri(&self, i: usize, j: usize, k: usize, l: usize) -> Result<Real, IntegralError> {
        let p = &self.prims;
        let mut cs: Vec<usize> = [i, j, k, l].iter().map(|&x| self.centers[x]).collect();
        cs.sort_unstable();
        cs.dedup();
        match cs.len() {
            1 => primitive_eri_one_center(&p[i], &p[j], &p[k], &p[l]),
            2 => {
                let key = (cs[0], cs[1]);
                let grid = self.grid(key)?;
                let m1 = self.moment(&grid, key, i, j)?;
                let m2 = self.moment(&grid, key, k, l)?;
                grid.coulomb(&m1, &m2)
            }
            _ => Err(IntegralError::WrongRoute("more than two centers".into())),
        }
    }

    fn grid(&self, key: (usize, usize)) -> Result<Arc<NeumannGrid>, IntegralError> {
        if let Some(g) = self.grids.read().get(&key) {
            return Ok(g.clone());
        }
        let idx: Vec<usize> = (0..self.prims.len()).filter(|&x| self.centers[x] == key.0 || self.centers[x] == key.1).collect();
        let pairs: Vec<(&Primitive, &Primitive)> = idx
            .iter()
            .enumerate()
            .flat_map(|(a, &x)| idx[..=a].iter().map(move |&y| (&self.prims[x], &self.prims[y])))
            .collect();
        let pos = |c: usize| idx.iter().find(|&&x| self.centers[x] == c).map(|&x| self.prims[x].center);
        let (Some(a), Some(b)) = (pos(key.0), pos(key.1)) else {
            return Err(IntegralError::Invalid("center pair without basis functions".into()));
        };
        let (ca, cb) = neumann::canonical_pair(a, b);
        let grid = Arc::new(NeumannGrid::for_pairs(AxisFrame::new(ca, cb)?, &pairs)?);
        self.grids.write().entry(key).or_insert(grid.clone());
        Ok(grid)
    }

    fn moment(&self, grid: &NeumannGrid, key: (usize, usize), i: usize, j: usize) -> Result<Arc<Moments>, IntegralError> {
        let mk = (key.0, key.1, i.max(j), i.min(j));
        if let Some(m) = self.moments.read().get(&mk) {
            return Ok(m.clone());
        }
        let m = Arc::new(grid.moments(&self.prims[i], &self.prims[j])?);
        self.moments.write().entry(mk).or_insert(m.clone());
        Ok(m)
    }
}
