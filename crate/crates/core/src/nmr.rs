//! One-electron integrals of the nuclear dipolar shielding operator.
//!
//! The operator between χ_μ and χ_ν for nucleus N is
//!
//! ```text
//! O_αβ = (r_ν · r_N δ_αβ − r_ν,α r_N,β) / r_N³
//! ```
//!
//! with r_ν and r_N measured from the center of χ_ν and from N. Every
//! Cartesian component is r·Y₁ʲ, so r_ν,a χ_ν collapses to a short list of
//! STOs with n raised by one, and the remaining factor Y₁ʲ(r̂_N)/r_N² has
//! only an integrable 1/r² singularity at N. Each such term is integrated on
//! a Becke-partitioned grid whose cell at N carries the r_N² Jacobian.
//!
//! Orbitals use complex harmonics Yₗᵐ, so values are complex in general.

use std::f64::consts::PI;

use crate::basis::{BasisFunction, OrbitalKind};
use crate::mathcore::grid::{GridSpec, MolecularGrid};
use crate::mathcore::quadrature::gauss_legendre;
use crate::mathcore::{gaunt, GauntKey};
use crate::{Complex, IntegralError, Real, Vec3};

/// Cartesian axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// a = r Σ_j c_j Y₁ʲ(r̂) as (c_j, j).
    pub fn spherical(self) -> Vec<(Complex, i32)> {
        let s = (2.0 * PI / 3.0).sqrt();
        match self {
            Axis::X => vec![(Complex::new(s, 0.0), -1), (Complex::new(-s, 0.0), 1)],
            Axis::Y => vec![(Complex::new(0.0, s), -1), (Complex::new(0.0, s), 1)],
            Axis::Z => vec![(Complex::new((4.0 * PI / 3.0).sqrt(), 0.0), 0)],
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = IntegralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(IntegralError::Invalid(format!("unknown axis {s:?}"))),
        }
    }
}

/// coef · r_ν,nu r_N,n / r_N³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianTerm {
    pub coef: Real,
    pub nu: Axis,
    pub n: Axis,
}

/// coef · r_ν Y₁^{j_nu}(r̂_ν) · Y₁^{j_n}(r̂_N) / r_N².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTerm {
    pub coef: Complex,
    pub j_nu: i32,
    pub j_n: i32,
}

/// O_αβ written as Cartesian products and as products of harmonics.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDecomposition {
    pub cartesian: Vec<CartesianTerm>,
    pub spherical: Vec<SphericalTerm>,
}

impl OperatorDecomposition {
    /// Value of the operator at `point` from its Cartesian form.
    pub fn eval_cartesian(&self, nu_center: &Vec3, nucleus: &Vec3, point: &Vec3) -> Real {
        let a = point - nu_center;
        let b = point - nucleus;
        let r3 = b.norm().powi(3);
        self.cartesian.iter().map(|t| t.coef * a[t.nu.index()] * b[t.n.index()]).sum::<Real>() / r3
    }

    /// Value of the operator at `point` from its harmonic form.
    pub fn eval_spherical(&self, nu_center: &Vec3, nucleus: &Vec3, point: &Vec3) -> Complex {
        let a = point - nu_center;
        let b = point - nucleus;
        let (ra, rb) = (a.norm(), b.norm());
        self.spherical
            .iter()
            .map(|t| t.coef * ra * y1(t.j_nu, &(a / ra)) * y1(t.j_n, &(b / rb)) / (rb * rb))
            .sum()
    }
}

/// Splits O_αβ into Cartesian and harmonic products.
pub fn cartesian_decomposition(alpha: Axis, beta: Axis) -> OperatorDecomposition {
    let mut cartesian = Vec::new();
    if alpha == beta {
        for a in Axis::ALL {
            if a != alpha {
                cartesian.push(CartesianTerm { coef: 1.0, nu: a, n: a });
            }
        }
    } else {
        cartesian.push(CartesianTerm { coef: -1.0, nu: alpha, n: beta });
    }
    let mut spherical: Vec<SphericalTerm> = Vec::new();
    for t in &cartesian {
        for (ca, ja) in t.nu.spherical() {
            for (cb, jb) in t.n.spherical() {
                let coef = ca * cb * t.coef;
                match spherical.iter_mut().find(|s| s.j_nu == ja && s.j_n == jb) {
                    Some(s) => s.coef += coef,
                    None => spherical.push(SphericalTerm { coef, j_nu: ja, j_n: jb }),
                }
            }
        }
    }
    spherical.retain(|s| s.coef.norm() > 1e-14);
    OperatorDecomposition { cartesian, spherical }
}

/// Y₁ʲ at a unit vector.
fn y1(j: i32, u: &Vec3) -> Complex {
    let c0 = (3.0 / (4.0 * PI)).sqrt();
    let c1 = (3.0 / (8.0 * PI)).sqrt();
    match j {
        0 => Complex::new(c0 * u.z, 0.0),
        1 => Complex::new(-c1 * u.x, -c1 * u.y),
        -1 => Complex::new(c1 * u.x, -c1 * u.y),
        _ => unreachable!("Y1 index {j}"),
    }
}

/// r Y_L^M χ_nlm = Σ c_λ χ_{n+1,λ}^{m+M} for a normalized STO χ.
///
/// Coefficients include the ratio of STO normalizations, so the identity
/// holds pointwise with normalized functions on both sides. λ runs over
/// |l−L| … l+L in steps of 2, dropping λ < |m+M|.
pub fn sto_times_harmonic(bf: &BasisFunction, big_l: i32, big_m: i32) -> Result<Vec<(Real, BasisFunction)>, IntegralError> {
    if bf.kind != OrbitalKind::Sto {
        return Err(IntegralError::UnsupportedKind(bf.kind.to_string()));
    }
    if big_l < 0 || big_m.abs() > big_l {
        return Err(IntegralError::Invalid(format!("invalid (L, M) = ({big_l}, {big_m})")));
    }
    let m_new = bf.m + big_m;
    let mut out = Vec::new();
    let mut lam = (bf.l - big_l).abs();
    while lam <= bf.l + big_l {
        if lam >= m_new.abs() {
            let g = gaunt(GauntKey::new(lam, m_new, big_l, big_m, bf.l, bf.m))?;
            if g.abs() > 1e-15 {
                let shifted = BasisFunction { n: bf.n + 1, l: lam, m: m_new, ..*bf };
                out.push((g * bf.normalization() / shifted.normalization(), shifted));
            }
        }
        lam += 2;
    }
    Ok(out)
}

/// Momentum-space form of Y₁ʲ(r̂)/r², with f̃(p) = (2π)^{−3/2} ∫ e^{ip·r} f(r) d³r.
pub fn operator_ft(j: i32, p: &Vec3) -> Result<Complex, IntegralError> {
    check_j(j)?;
    let pn = p.norm();
    if pn == 0.0 {
        return Err(IntegralError::Invalid("operator transform is singular at p = 0".into()));
    }
    Ok(Complex::new(0.0, 2.0 / (2.0 * PI).sqrt()) * y1(j, &(p / pn)) / pn)
}

fn check_j(j: i32) -> Result<(), IntegralError> {
    if (-1..=1).contains(&j) {
        Ok(())
    } else {
        Err(IntegralError::Invalid(format!("j = {j} outside −1..=1")))
    }
}

/// (2π)^{−3/2} ∫ e^{−ip·r} f̃(p) d³p by direct quadrature in p-space.
///
/// The oscillatory tail is damped by exp(−(p/P)²) with P = 10/|r|, which
/// perturbs the result by below 1e−9 relative.
pub fn operator_ft_inverse(j: i32, r: &Vec3) -> Result<Complex, IntegralError> {
    check_j(j)?;
    let rn = r.norm();
    if rn == 0.0 {
        return Err(IntegralError::Invalid("inverse transform requested at r = 0".into()));
    }
    let p_scale = 10.0 / rn;
    let p_cut = 6.5 * p_scale;
    let panels = (p_cut * rn).ceil() as usize;
    let edges: Vec<Real> = (0..=panels).map(|k| p_cut * k as Real / panels as Real).collect();
    let (pn, pw) = crate::mathcore::quadrature::composite_rule(&edges, 8);
    let mut acc = Complex::new(0.0, 0.0);
    for (&p, &wp) in pn.iter().zip(&pw) {
        let nt = (0.5 * p * rn).ceil() as usize + 12;
        let np = 2 * nt;
        let rule = gauss_legendre(nt);
        let dphi = 2.0 * PI / np as Real;
        let mut shell = Complex::new(0.0, 0.0);
        for (ct, wt) in rule.nodes.iter().zip(&rule.weights) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for k in 0..np {
                let ph = k as Real * dphi;
                let u = Vec3::new(st * ph.cos(), st * ph.sin(), *ct);
                let phase = -p * u.dot(r);
                shell += Complex::new(phase.cos(), phase.sin()) * operator_ft(j, &(u * p))? * *wt;
            }
        }
        acc += shell * dphi * wp * p * p * (-(p / p_scale).powi(2)).exp();
    }
    Ok(acc / (2.0 * PI).powf(1.5))
}

/// An orbital placed at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedOrbital {
    pub bf: BasisFunction,
    pub center: Vec3,
}

/// One reduced term: coef · ∫ χ_μ* χ' Y₁ʲ(r̂_N)/r_N² d³r with χ' on ν's center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleTerm {
    pub coef: Complex,
    pub j: i32,
    /// The raised STO from r_ν,a χ_ν.
    pub orbital: BasisFunction,
}

/// O_αβ χ_ν as a finite list of [`DipoleTerm`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleTermPlan {
    pub terms: Vec<DipoleTerm>,
}

impl DipoleTermPlan {
    pub fn new(nu: &BasisFunction, alpha: Axis, beta: Axis) -> Result<Self, IntegralError> {
        let op = cartesian_decomposition(alpha, beta);
        let mut terms: Vec<DipoleTerm> = Vec::new();
        for s in &op.spherical {
            for (c, orbital) in sto_times_harmonic(nu, 1, s.j_nu)? {
                let coef = s.coef * c;
                match terms.iter_mut().find(|t| t.j == s.j_n && t.orbital == orbital) {
                    Some(t) => t.coef += coef,
                    None => terms.push(DipoleTerm { coef, j: s.j_n, orbital }),
                }
            }
        }
        terms.retain(|t| t.coef.norm() > 1e-14);
        Ok(DipoleTermPlan { terms })
    }
}

/// Grid resolution for [`dipole_integral`]; each term is integrated on this
/// grid and on one 1.5× finer, and must agree to `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleQuadrature {
    pub radial: usize,
    pub theta: usize,
    /// Absolute agreement required between the two grids.
    pub tol: Real,
}

impl Default for DipoleQuadrature {
    fn default() -> Self {
        DipoleQuadrature { radial: 80, theta: 24, tol: 1e-6 }
    }
}

impl DipoleQuadrature {
    fn refined(&self) -> Self {
        DipoleQuadrature { radial: self.radial * 3 / 2, theta: self.theta * 3 / 2, tol: self.tol }
    }

    fn grid(&self, mu: &PlacedOrbital, nu: &PlacedOrbital, nucleus: &Vec3) -> MolecularGrid {
        let mut centers = vec![*nucleus];
        for c in [mu.center, nu.center] {
            if centers.iter().all(|x| (x - c).norm() > 1e-10) {
                centers.push(c);
            }
        }
        MolecularGrid::new(&centers, GridSpec::new(self.radial, self.theta))
    }
}

fn integrate_terms(plan: &DipoleTermPlan, mu: &PlacedOrbital, nu: &PlacedOrbital, nucleus: &Vec3, grid: &MolecularGrid) -> Vec<Complex> {
    let mut acc = vec![Complex::new(0.0, 0.0); plan.terms.len()];
    for (p, w) in grid.points.iter().zip(&grid.weights) {
        let d = p - nucleus;
        let rn = d.norm();
        if rn == 0.0 {
            continue;
        }
        let u = d / rn;
        let a = mu.bf.evaluate(&mu.center, p).conj() * (*w / (rn * rn));
        for (t, s) in plan.terms.iter().zip(acc.iter_mut()) {
            *s += a * t.orbital.evaluate(&nu.center, p) * y1(t.j, &u);
        }
    }
    acc
}

/// ⟨χ_μ | O_αβ | χ_ν⟩ for nucleus N, summed over the reduced terms.
///
/// Any relative placement of the two centers and N is allowed.
pub fn dipole_integral(
    mu: &PlacedOrbital,
    nu: &PlacedOrbital,
    nucleus: &Vec3,
    alpha: Axis,
    beta: Axis,
    quad: &DipoleQuadrature,
) -> Result<Complex, IntegralError> {
    let plan = DipoleTermPlan::new(&nu.bf, alpha, beta)?;
    let coarse = integrate_terms(&plan, mu, nu, nucleus, &quad.grid(mu, nu, nucleus));
    let fine = integrate_terms(&plan, mu, nu, nucleus, &quad.refined().grid(mu, nu, nucleus));
    let mut total = Complex::new(0.0, 0.0);
    for (k, (t, (c, f))) in plan.terms.iter().zip(coarse.iter().zip(&fine)).enumerate() {
        if ((c - f) * t.coef).norm() > quad.tol {
            return Err(IntegralError::UnstableTerm { term: k, coarse: (c * t.coef).re, fine: (f * t.coef).re });
        }
        total += t.coef * f;
    }
    Ok(total)
}

/// All nine components, indexed [α][β].
pub fn dipole_tensor(
    mu: &PlacedOrbital,
    nu: &PlacedOrbital,
    nucleus: &Vec3,
    quad: &DipoleQuadrature,
) -> Result<[[Complex; 3]; 3], IntegralError> {
    let mut out = [[Complex::new(0.0, 0.0); 3]; 3];
    for a in Axis::ALL {
        for b in Axis::ALL {
            out[a.index()][b.index()] = dipole_integral(mu, nu, nucleus, a, b, quad)?;
        }
    }
    Ok(out)
}

/// Reference value from the Cartesian operator on a single grid, with no
/// term reduction.
pub fn dipole_integral_direct(
    mu: &PlacedOrbital,
    nu: &PlacedOrbital,
    nucleus: &Vec3,
    alpha: Axis,
    beta: Axis,
    quad: &DipoleQuadrature,
) -> Complex {
    let op = cartesian_decomposition(alpha, beta);
    let grid = quad.grid(mu, nu, nucleus);
    let mut acc = Complex::new(0.0, 0.0);
    for (p, w) in grid.points.iter().zip(&grid.weights) {
        if (p - nucleus).norm() == 0.0 {
            continue;
        }
        let o = op.eval_cartesian(&nu.center, nucleus, p);
        acc += mu.bf.evaluate(&mu.center, p).conj() * nu.bf.evaluate(&nu.center, p) * (o * w);
    }
    acc
}
