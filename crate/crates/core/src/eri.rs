//! Full two-electron integral tensors over a molecule's basis.

use rayon::prelude::*;

use crate::basis::Molecule;
use crate::poisson::{fallback_eri, PoissonEngine};
use crate::twocenter::Primitive;
use crate::resolution::{ResolutionConfig, ResolutionEngine, ResolutionEri};
use crate::{IntegralError, Real};

/// How each (ab|cd) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EriRoute {
    /// Closed forms for integrals over at most two centers, resolution for the rest.
    PoissonPreferred,
    /// Resolution for every integral.
    ResolutionOnly,
    /// Closed forms where they exist, the per-integral potential-times-density
    /// quadrature for three- and four-center integrals.
    PoissonFallback,
}

/// Counters from a tensor build.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EriStats {
    pub poisson: usize,
    pub fallback: usize,
    pub resolution: usize,
    pub screened: usize,
    /// Resolution integrals whose tail estimate exceeded eps.
    pub unconverged: usize,
    pub max_tail: Real,
}

enum Source {
    Closed,
    Fallback,
    Resolution(ResolutionEri),
}

/// (ij|kl) stored once per 8-fold symmetry class.
#[derive(Debug, Clone, PartialEq)]
pub struct EriTensor {
    n: usize,
    data: Vec<Real>,
}

fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i >= j { (i, j) } else { (j, i) };
    a * (a + 1) / 2 + b
}

impl EriTensor {
    pub fn nbasis(&self) -> usize {
        self.n
    }

    /// Number of stored unique integrals.
    pub fn unique_len(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Real {
        self.data[pair_index(pair_index(i, j), pair_index(k, l))]
    }

    /// Canonical representatives (i ≥ j, k ≥ l, ij ≥ kl) in storage order.
    pub fn unique_quartets(n: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                pairs.push((i, j));
            }
        }
        let mut out = Vec::with_capacity(pairs.len() * (pairs.len() + 1) / 2);
        for (p, &(i, j)) in pairs.iter().enumerate() {
            for &(k, l) in &pairs[..=p] {
                out.push((i, j, k, l));
            }
        }
        out
    }

    /// Builds the tensor; `cfg` governs the resolution-route integrals.
    pub fn compute(mol: &Molecule, route: EriRoute, cfg: &ResolutionConfig) -> Result<(Self, EriStats), IntegralError> {
        let engine = ResolutionEngine::new(mol, *cfg)?;
        let closed = PoissonEngine::new(mol)?;
        let quartets = Self::unique_quartets(mol.nbasis());
        let centers = |q: &(usize, usize, usize, usize)| {
            let mut c = [q.0, q.1, q.2, q.3].map(|i| mol.basis[i].center_index);
            c.sort_unstable();
            1 + c.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let prims = mol
            .basis
            .iter()
            .map(|bf| Primitive::from_sto(bf, mol.position_of(bf)))
            .collect::<Result<Vec<_>, _>>()?;
        let results: Vec<(Real, Source)> = quartets
            .par_iter()
            .map(|q| {
                let (i, j, k, l) = *q;
                let closed_ok = route != EriRoute::ResolutionOnly && centers(q) <= 2;
                if closed_ok {
                    return closed.eri(i, j, k, l).map(|v| (v, Source::Closed));
                }
                if route == EriRoute::PoissonFallback {
                    return fallback_eri(&prims[i], &prims[j], &prims[k], &prims[l], cfg.eps).map(|v| (v, Source::Fallback));
                }
                engine.eri(i, j, k, l).map(|r| (r.value, Source::Resolution(r)))
            })
            .collect::<Result<_, _>>()?;
        let mut stats = EriStats::default();
        let mut data = Vec::with_capacity(results.len());
        for (v, r) in results {
            data.push(v);
            match r {
                Source::Closed => stats.poisson += 1,
                Source::Fallback => stats.fallback += 1,
                Source::Resolution(r) if r.screened => stats.screened += 1,
                Source::Resolution(r) => {
                    stats.resolution += 1;
                    stats.max_tail = stats.max_tail.max(r.tail_estimate);
                    if !r.converged {
                        stats.unconverged += 1;
                    }
                }
            }
        }
        Ok((EriTensor { n: mol.nbasis(), data }, stats))
    }
}
