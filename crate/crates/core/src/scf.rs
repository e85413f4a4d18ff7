//! Closed-shell restricted Hartree–Fock over STO bases.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::basis::Molecule;
use crate::constants::HARTREE_TO_KCAL_PER_MOL;
use crate::eri::{EriRoute, EriStats, EriTensor};
use crate::resolution::ResolutionConfig;
use crate::twocenter::{kinetic_matrix, nuclear_matrix, overlap_matrix};
use crate::{Real, ScfError, Vec3};

/// Overlap eigenvalues below this make the basis numerically dependent.
pub const MIN_OVERLAP_EIGENVALUE: Real = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScfConfig {
    pub max_iter: usize,
    /// Hartree.
    pub energy_tol: Real,
    /// Largest change of a density-matrix element.
    pub density_tol: Real,
    /// Weight of the previous density in each update.
    pub damping: Real,
    pub eri_route: EriRoute,
    pub resolution: ResolutionConfig,
}

impl Default for ScfConfig {
    fn default() -> Self {
        ScfConfig {
            max_iter: 200,
            energy_tol: 1e-10,
            density_tol: 1e-8,
            damping: 0.3,
            eri_route: EriRoute::PoissonPreferred,
            resolution: ResolutionConfig::default(),
        }
    }
}

impl ScfConfig {
    pub fn validate(&self) -> Result<(), ScfError> {
        if !(self.energy_tol > 0.0 && self.density_tol > 0.0) {
            return Err(ScfError::Config("tolerances must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(ScfError::Config(format!("damping {} must lie in [0, 1)", self.damping)));
        }
        if self.max_iter == 0 {
            return Err(ScfError::Config("max_iter must be positive".into()));
        }
        self.resolution.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScfResult {
    pub energy_total: Real,
    pub energy_electronic: Real,
    pub nuclear_repulsion: Real,
    /// Closed-shell density P = 2 C_occ C_occᵀ.
    pub density: DMatrix<Real>,
    pub coefficients: DMatrix<Real>,
    pub orbital_energies: Vec<Real>,
    pub converged: bool,
    pub iterations: usize,
    pub eri_stats: EriStats,
}

impl ScfResult {
    /// ‖PSP − 2P‖∞.
    pub fn idempotency_error(&self, overlap: &DMatrix<Real>) -> Real {
        let p = &self.density;
        (p * overlap * p - 2.0 * p).amax()
    }

    /// Tr[PS].
    pub fn electron_count(&self, overlap: &DMatrix<Real>) -> Real {
        (&self.density * overlap).trace()
    }
}

/// One- and two-electron integrals of a molecule.
#[derive(Debug, Clone)]
pub struct Integrals {
    pub overlap: DMatrix<Real>,
    pub core: DMatrix<Real>,
    pub eri: EriTensor,
    pub eri_stats: EriStats,
}

impl Integrals {
    pub fn compute(mol: &Molecule, route: EriRoute, res: &ResolutionConfig) -> Result<Self, ScfError> {
        let overlap = overlap_matrix(mol)?;
        let core = kinetic_matrix(mol)? + nuclear_matrix(mol)?;
        let (eri, eri_stats) = EriTensor::compute(mol, route, res)?;
        Ok(Integrals { overlap, core, eri, eri_stats })
    }
}

pub fn rhf(mol: &Molecule, cfg: &ScfConfig) -> Result<ScfResult, ScfError> {
    cfg.validate()?;
    check_electrons(mol)?;
    let ints = Integrals::compute(mol, cfg.eri_route, &cfg.resolution)?;
    rhf_with(mol, &ints, cfg)
}

fn check_electrons(mol: &Molecule) -> Result<usize, ScfError> {
    let n = mol.electron_count();
    if n % 2 != 0 || n <= 0 {
        return Err(ScfError::OddElectrons(n));
    }
    Ok(n as usize / 2)
}

/// RHF on precomputed integrals.
pub fn rhf_with(mol: &Molecule, ints: &Integrals, cfg: &ScfConfig) -> Result<ScfResult, ScfError> {
    cfg.validate()?;
    let nocc = check_electrons(mol)?;
    let n = mol.nbasis();
    if nocc > n {
        return Err(ScfError::Config(format!("{nocc} occupied orbitals exceed {n} basis functions")));
    }
    let x = orthogonalizer(&ints.overlap)?;
    let h = &ints.core;
    let solve = |f: &DMatrix<Real>| {
        let fp = x.transpose() * f * &x;
        let eig = SymmetricEigen::new(fp);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let c = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        let c = &x * c;
        let e: Vec<Real> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let occ = c.columns(0, nocc);
        let p = 2.0 * &occ * occ.transpose();
        (p, c, e)
    };
    let (mut p, mut c, mut e) = solve(h);
    let mut energy = electronic_energy(&p, h, &fock(h, &p, &ints.eri));
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=cfg.max_iter {
        iterations = it;
        let f = fock(h, &p, &ints.eri);
        let (p_new, c_new, e_new) = solve(&f);
        let f_new = fock(h, &p_new, &ints.eri);
        let e_tot = electronic_energy(&p_new, h, &f_new);
        let dp = (&p_new - &p).amax();
        let de = (e_tot - energy).abs();
        c = c_new;
        e = e_new;
        energy = e_tot;
        if de < cfg.energy_tol && dp < cfg.density_tol {
            p = p_new;
            converged = true;
            break;
        }
        p = cfg.damping * &p + (1.0 - cfg.damping) * p_new;
    }
    let vnn = mol.nuclear_repulsion();
    Ok(ScfResult {
        energy_total: energy + vnn,
        energy_electronic: energy,
        nuclear_repulsion: vnn,
        density: p,
        coefficients: c,
        orbital_energies: e,
        converged,
        iterations,
        eri_stats: ints.eri_stats,
    })
}

/// Symmetric orthogonalization S^{−1/2}.
fn orthogonalizer(s: &DMatrix<Real>) -> Result<DMatrix<Real>, ScfError> {
    let eig = SymmetricEigen::new(s.clone());
    let smallest = eig.eigenvalues.min();
    if smallest < MIN_OVERLAP_EIGENVALUE {
        return Err(ScfError::Conditioning(smallest));
    }
    let d = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|v| 1.0 / v.sqrt()));
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose())
}

/// F = h + Σ P_kl [(ij|kl) − ½(ik|jl)].
pub fn fock(h: &DMatrix<Real>, p: &DMatrix<Real>, eri: &EriTensor) -> DMatrix<Real> {
    let n = h.nrows();
    let mut f = h.clone();
    for i in 0..n {
        for j in 0..=i {
            let mut g = 0.0;
            for k in 0..n {
                for l in 0..n {
                    g += p[(k, l)] * (eri.get(i, j, k, l) - 0.5 * eri.get(i, k, j, l));
                }
            }
            f[(i, j)] += g;
            if i != j {
                f[(j, i)] += g;
            }
        }
    }
    f
}

/// ½ Tr[P(h + F)].
pub fn electronic_energy(p: &DMatrix<Real>, h: &DMatrix<Real>, f: &DMatrix<Real>) -> Real {
    0.5 * p.component_mul(&(h + f)).sum()
}

/// Supermolecule interaction energy.
#[derive(Debug, Clone)]
pub struct Interaction {
    /// E(dimer) − 2 E(monomer) in kcal/mol.
    pub kcal_per_mol: Real,
    pub dimer: ScfResult,
    pub monomer: ScfResult,
}

/// E(dimer) − 2·E(monomer), without counterpoise correction.
pub fn interaction_energy(dimer: &Molecule, monomer: &Molecule, cfg: &ScfConfig) -> Result<Interaction, ScfError> {
    if dimer.nbasis() != 2 * monomer.nbasis() || dimer.centers.len() != 2 * monomer.centers.len() {
        return Err(ScfError::Config("dimer must consist of two copies of the monomer".into()));
    }
    let d = rhf(dimer, cfg)?;
    let m = rhf(monomer, cfg)?;
    Ok(Interaction { kcal_per_mol: (d.energy_total - 2.0 * m.energy_total) * HARTREE_TO_KCAL_PER_MOL, dimer: d, monomer: m })
}

/// Electron density Σ P_ij χ_i χ_j at a point.
pub fn density_at(p: &DMatrix<Real>, mol: &Molecule, point: &Vec3) -> Real {
    let vals: Vec<Real> = mol.basis.iter().map(|bf| bf.evaluate_real(&mol.position_of(bf), point)).collect();
    let mut rho = 0.0;
    for (i, vi) in vals.iter().enumerate() {
        for (j, vj) in vals.iter().enumerate() {
            rho += p[(i, j)] * vi * vj;
        }
    }
    rho
}

/// Samples of −½ (dρ/dr)/ρ along a ray from `center`, at r = k·r_max/samples.
///
/// For an exact wave function the r → 0 limit is the nuclear charge at
/// `center`. Points where ρ < 1e−300 are skipped.
pub fn cusp_diagnostic(
    result: &ScfResult,
    mol: &Molecule,
    center: &Vec3,
    direction: &Vec3,
    samples: usize,
    r_max: Real,
) -> Result<Vec<(Real, Real)>, ScfError> {
    let norm = direction.norm();
    if !(norm > 0.0) || samples == 0 || !(r_max > 0.0) {
        return Err(ScfError::Config("cusp ray needs a nonzero direction, samples and length".into()));
    }
    let u = direction / norm;
    let rho = |r: Real| density_at(&result.density, mol, &(center + u * r));
    let mut out = Vec::with_capacity(samples);
    for k in 1..=samples {
        let r = r_max * k as Real / samples as Real;
        let h = 1e-4 * r;
        let r0 = rho(r);
        if r0 < 1e-300 {
            continue;
        }
        let d = (rho(r + h) - rho(r - h)) / (2.0 * h);
        out.push((r, -0.5 * d / r0));
    }
    Ok(out)
}
