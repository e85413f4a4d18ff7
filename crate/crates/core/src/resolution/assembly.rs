//! Auxiliary caching, truncated ERI assembly and Schwarz screening.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use super::auxiliary::{pair_auxiliaries, AuxShape};
use crate::basis::{BasisFunction, Molecule};
use crate::twocenter::Primitive;
use crate::{IntegralError, Real, Vec3};

/// Where a resolution potential is centered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialOrigin {
    /// Index into the molecule's centers.
    Center(usize),
    Point(Vec3),
}

/// One resolution function √λ V_nl(λ|r − O|) S_lm(r − O).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionPotential {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub scale: Real,
    pub origin: PotentialOrigin,
}

impl ResolutionPotential {
    pub fn validate(&self) -> Result<(), IntegralError> {
        if self.m.unsigned_abs() > self.l {
            return Err(IntegralError::Invalid(format!("|m| = {} exceeds l = {}", self.m.abs(), self.l)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(IntegralError::Invalid(format!("scale {} must be positive and finite", self.scale)));
        }
        Ok(())
    }

    fn point(&self, mol: &Molecule) -> Result<Vec3, IntegralError> {
        match self.origin {
            PotentialOrigin::Point(p) => Ok(p),
            PotentialOrigin::Center(i) => mol
                .centers
                .get(i)
                .map(|c| c.position)
                .ok_or_else(|| IntegralError::Invalid(format!("origin center {i} out of range"))),
        }
    }
}

/// Truncation, accuracy and screening settings of the resolution route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionConfig {
    pub n_max: u32,
    pub l_max: u32,
    /// Target absolute accuracy of each ERI.
    pub eps: Real,
    /// Length scale λ of the potentials.
    pub scale: Real,
    /// ERIs whose Schwarz bound falls below this are set to zero.
    pub schwarz_tau: Real,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        ResolutionConfig { n_max: 25, l_max: 4, eps: 1e-6, scale: 1.0, schwarz_tau: 1e-12 }
    }
}

impl ResolutionConfig {
    pub fn validate(&self) -> Result<(), IntegralError> {
        if self.n_max < 1 {
            return Err(IntegralError::Invalid("n_max must be at least 1".into()));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(IntegralError::Invalid(format!("eps {} must be positive", self.eps)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(IntegralError::Invalid(format!("scale {} must be positive and finite", self.scale)));
        }
        if !(self.schwarz_tau >= 0.0) {
            return Err(IntegralError::Invalid(format!("schwarz_tau {} must be ≥ 0", self.schwarz_tau)));
        }
        Ok(())
    }

    pub fn shape(&self) -> AuxShape {
        AuxShape { n_max: self.n_max, l_max: self.l_max, scale: self.scale }
    }

    /// Decimal digits asked of each auxiliary: three beyond the ERI target.
    fn aux_digits(&self) -> Real {
        -self.eps.log10().min(-3.0) + 3.0
    }
}

/// A resolved ERI with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionEri {
    pub value: Real,
    /// Number of (n, l, m) products summed; 0 when screened.
    pub terms_used: usize,
    /// Magnitude of the last completed l block or of the n = n_max row,
    /// whichever is larger.
    pub tail_estimate: Real,
    /// tail_estimate ≤ eps.
    pub converged: bool,
    pub screened: bool,
}

/// 8 Σ a_i b_i, l outer and n inner.
///
/// Stops after two consecutive l blocks below eps (one is not enough: parity
/// makes every other block vanish for many densities).
pub fn contract(ab: &[Real], cd: &[Real], shape: &AuxShape, eps: Real) -> ResolutionEri {
    let nn = shape.nn();
    let n_top = shape.n_max as usize;
    let mut value = 0.0;
    let mut terms = 0;
    let mut last_block: Real = 0.0;
    let mut small_run = 0;
    let mut n_row = 0.0;
    for l in 0..=shape.l_max as usize {
        let mut block = 0.0;
        for lm in l * l..(l + 1) * (l + 1) {
            let (x, y) = (&ab[lm * nn..(lm + 1) * nn], &cd[lm * nn..(lm + 1) * nn]);
            block += x.iter().zip(y).map(|(a, b)| a * b).sum::<Real>();
            n_row += x[n_top] * y[n_top];
        }
        block *= 8.0;
        value += block;
        terms += (2 * l + 1) * nn;
        last_block = block.abs();
        small_run = if last_block < eps { small_run + 1 } else { 0 };
        if small_run >= 2 {
            break;
        }
    }
    let tail = last_block.max(8.0 * n_row.abs());
    ResolutionEri { value, terms_used: terms, tail_estimate: tail, converged: tail <= eps, screened: false }
}

/// Running sums of the full contraction, one entry per l block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub l: u32,
    pub terms: usize,
    pub block: Real,
    pub partial: Real,
}

/// Every l block of [`contract`] without early exit.
pub fn contract_trace(ab: &[Real], cd: &[Real], shape: &AuxShape) -> Vec<TraceStep> {
    let nn = shape.nn();
    let mut partial = 0.0;
    let mut terms = 0;
    (0..=shape.l_max as usize)
        .map(|l| {
            let range = l * l * nn..(l + 1) * (l + 1) * nn;
            let block = 8.0 * ab[range.clone()].iter().zip(&cd[range]).map(|(a, b)| a * b).sum::<Real>();
            partial += block;
            terms += (2 * l + 1) * nn;
            TraceStep { l: l as u32, terms, block, partial }
        })
        .collect()
}

type AuxKey = (usize, usize, usize);

/// Cache of auxiliary vectors ⟨ψ_a ψ_b φ_i⟩ for one molecule, keyed by the
/// basis pair and the origin center; the vector runs over i = (n, l, m).
///
/// Readers proceed concurrently; a miss computes every basis pair on the
/// same two centers in one pass and inserts them together.
pub struct AuxiliaryTensor {
    shape: AuxShape,
    digits: Real,
    prims: Vec<Primitive>,
    centers: Vec<usize>,
    positions: Vec<Vec3>,
    map: RwLock<HashMap<AuxKey, Arc<Vec<Real>>>>,
}

impl AuxiliaryTensor {
    pub fn new(mol: &Molecule, cfg: &ResolutionConfig) -> Result<Self, IntegralError> {
        cfg.validate()?;
        let prims = mol
            .basis
            .iter()
            .map(|bf| Primitive::from_sto(bf, mol.position_of(bf)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AuxiliaryTensor {
            shape: cfg.shape(),
            digits: cfg.aux_digits(),
            prims,
            centers: mol.basis.iter().map(|bf| bf.center_index).collect(),
            positions: mol.centers.iter().map(|c| c.position).collect(),
            map: RwLock::new(HashMap::new()),
        })
    }

    pub fn shape(&self) -> &AuxShape {
        &self.shape
    }

    /// Number of cached pair vectors.
    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Auxiliary vector of basis pair (a, b) about center `origin`.
    pub fn get(&self, a: usize, b: usize, origin: usize) -> Result<Arc<Vec<Real>>, IntegralError> {
        let key = (a.max(b), a.min(b), origin);
        if let Some(v) = self.map.read().get(&key) {
            return Ok(v.clone());
        }
        self.fill_block(self.centers[a], self.centers[b], origin)?;
        Ok(self.map.read().get(&key).expect("block contains the pair").clone())
    }

    /// Computes all pairs on centers {ca, cb} about `origin`.
    fn fill_block(&self, ca: usize, cb: usize, origin: usize) -> Result<(), IntegralError> {
        let on = |i: usize, j: usize| {
            let (x, y) = (self.centers[i], self.centers[j]);
            (x == ca && y == cb) || (x == cb && y == ca)
        };
        let n = self.prims.len();
        let keys: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).filter(|&(i, j)| on(i, j)).collect();
        let pairs: Vec<(Primitive, Primitive)> = keys.iter().map(|&(i, j)| (self.prims[i], self.prims[j])).collect();
        let vecs = pair_auxiliaries(&pairs, &self.positions[origin], &self.shape, self.digits)?;
        let mut map = self.map.write();
        for (&(i, j), v) in keys.iter().zip(vecs) {
            map.entry((i, j, origin)).or_insert_with(|| Arc::new(v));
        }
        Ok(())
    }
}

/// Resolution-route ERIs over one molecule with shared caches.
pub struct ResolutionEngine<'m> {
    mol: &'m Molecule,
    cfg: ResolutionConfig,
    aux: AuxiliaryTensor,
    schwarz: RwLock<HashMap<(usize, usize), Real>>,
}

impl<'m> ResolutionEngine<'m> {
    pub fn new(mol: &'m Molecule, cfg: ResolutionConfig) -> Result<Self, IntegralError> {
        Ok(ResolutionEngine { mol, aux: AuxiliaryTensor::new(mol, &cfg)?, cfg, schwarz: RwLock::new(HashMap::new()) })
    }

    pub fn config(&self) -> &ResolutionConfig {
        &self.cfg
    }

    pub fn auxiliaries(&self) -> &AuxiliaryTensor {
        &self.aux
    }

    /// √((ab|ab)) for basis indices, cached.
    pub fn schwarz(&self, a: usize, b: usize) -> Result<Real, IntegralError> {
        let key = (a.max(b), a.min(b));
        if let Some(&v) = self.schwarz.read().get(&key) {
            return Ok(v);
        }
        let v = schwarz_bound(&self.mol.basis[a], &self.mol.basis[b], self.mol)?;
        self.schwarz.write().insert(key, v);
        Ok(v)
    }

    /// (ab|cd) by basis indices, with the origin from [`origin_center`].
    pub fn eri(&self, a: usize, b: usize, c: usize, d: usize) -> Result<ResolutionEri, IntegralError> {
        if self.cfg.schwarz_tau > 0.0 && self.schwarz(a, b)? * self.schwarz(c, d)? < self.cfg.schwarz_tau {
            return Ok(screened());
        }
        let bs = &self.mol.basis;
        let origin = origin_center([&bs[a], &bs[b], &bs[c], &bs[d]]);
        let ab = self.aux.get(a, b, origin)?;
        let cd = self.aux.get(c, d, origin)?;
        Ok(contract(&ab, &cd, &self.aux.shape, self.cfg.eps))
    }

    /// Per-block convergence of (ab|cd), ignoring screening.
    pub fn trace(&self, a: usize, b: usize, c: usize, d: usize) -> Result<Vec<TraceStep>, IntegralError> {
        let bs = &self.mol.basis;
        let origin = origin_center([&bs[a], &bs[b], &bs[c], &bs[d]]);
        Ok(contract_trace(&self.aux.get(a, b, origin)?, &self.aux.get(c, d, origin)?, &self.aux.shape))
    }
}

/// Origin of the potentials for (ab|cd): a center carried by both densities
/// when there is one, otherwise the center of a.
///
/// By permutational symmetry either choice is "the first atom of the (a, b)
/// pair" for some ordering of the integral; a shared center keeps both
/// auxiliaries free of far off-center expansions.
pub fn origin_center(f: [&BasisFunction; 4]) -> usize {
    let [a, b, c, d] = f.map(|x| x.center_index);
    [a, b].into_iter().find(|x| *x == c || *x == d).unwrap_or(a)
}

fn screened() -> ResolutionEri {
    ResolutionEri { value: 0.0, terms_used: 0, tail_estimate: 0.0, converged: true, screened: true }
}

/// ⟨ψ_a ψ_b φ⟩ for a single resolution function.
pub fn auxiliary(
    a: &BasisFunction,
    b: &BasisFunction,
    pot: &ResolutionPotential,
    mol: &Molecule,
) -> Result<Real, IntegralError> {
    pot.validate()?;
    let origin = pot.point(mol)?;
    let pa = Primitive::from_sto(a, mol.position_of(a))?;
    let pb = Primitive::from_sto(b, mol.position_of(b))?;
    let shape = AuxShape { n_max: pot.n, l_max: pot.l, scale: pot.scale };
    let v = pair_auxiliaries(&[(pa, pb)], &origin, &shape, 12.0)?;
    Ok(v[0][shape.index(pot.n, pot.l, pot.m)])
}

/// (ab|cd) by the resolution route without caching.
pub fn eri_resolution(
    a: &BasisFunction,
    b: &BasisFunction,
    c: &BasisFunction,
    d: &BasisFunction,
    mol: &Molecule,
    cfg: &ResolutionConfig,
) -> Result<ResolutionEri, IntegralError> {
    cfg.validate()?;
    if cfg.schwarz_tau > 0.0 && schwarz_bound(a, b, mol)? * schwarz_bound(c, d, mol)? < cfg.schwarz_tau {
        return Ok(screened());
    }
    let p = |bf: &BasisFunction| Primitive::from_sto(bf, mol.position_of(bf));
    let origin = mol.centers[origin_center([a, b, c, d])].position;
    let shape = cfg.shape();
    let ab = pair_auxiliaries(&[(p(a)?, p(b)?)], &origin, &shape, cfg.aux_digits())?;
    let cd = pair_auxiliaries(&[(p(c)?, p(d)?)], &origin, &shape, cfg.aux_digits())?;
    Ok(contract(&ab[0], &cd[0], &shape, cfg.eps))
}

/// √((ab|ab)) from the exact two-center route.
pub fn schwarz_bound(a: &BasisFunction, b: &BasisFunction, mol: &Molecule) -> Result<Real, IntegralError> {
    Ok(crate::poisson::eri_two_center(a, b, a, b, mol)?.max(0.0).sqrt())
}
