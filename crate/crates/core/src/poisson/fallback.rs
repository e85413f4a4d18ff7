//! Per-integral numerical route: the exact potential of one density is
//! integrated against the other density on a product grid.
//!
//! This is the slow reference for three- and four-center integrals; the
//! resolution route exists to replace it.

use super::neumann::{canonical_pair, AxisFrame, NeumannGrid, PairPotential};
use super::radial::one_center_pair_potential;
use crate::mathcore::grid::{GridSpec, MolecularGrid};
use crate::mathcore::quadrature::gauss_legendre;
use crate::twocenter::Primitive;
use crate::{IntegralError, Real, Vec3};

/// Potential of a·b at any point by direct quadrature over a Becke grid.
///
/// Used only for densities without axial symmetry about their own axis.
pub fn numeric_pair_potential(a: &Primitive, b: &Primitive, point: &Vec3) -> Result<Real, IntegralError> {
    let centers = [a.center, b.center, *point];
    let spec = GridSpec { radial: 120, theta: 30, phi: 60, r_mid: 1.0 };
    let grid = MolecularGrid::new(&centers, spec);
    Ok(grid.integrate(|p| {
        let r = (p - point).norm();
        if r == 0.0 {
            0.0
        } else {
            a.value(p) * b.value(p) / r
        }
    }))
}

/// Exact potential of one density, reusable across many integrals.
pub enum DensityPotential {
    OneCenter(Primitive, Primitive),
    TwoCenter(PairPotential),
}

impl DensityPotential {
    pub fn new(a: &Primitive, b: &Primitive) -> Result<Self, IntegralError> {
        if (a.center - b.center).norm() < 1e-10 {
            return Ok(DensityPotential::OneCenter(*a, *b));
        }
        let (p, q) = canonical_pair(a.center, b.center);
        let grid = NeumannGrid::for_pairs(AxisFrame::new(p, q)?, &[(a, b)])?;
        let m = grid.moments(a, b)?;
        Ok(DensityPotential::TwoCenter(grid.potential(&m)?))
    }

    pub fn at(&self, p: &Vec3) -> Result<Real, IntegralError> {
        match self {
            DensityPotential::OneCenter(a, b) => one_center_pair_potential(a, b, p),
            DensityPotential::TwoCenter(v) => v.at(p),
        }
    }
}

/// Quadrature nodes adapted to the density c·d, with weights including d³r.
pub struct DensityGrid {
    pub points: Vec<Vec3>,
    pub weights: Vec<Real>,
}

impl DensityGrid {
    /// Grid sized for a relative accuracy of about `eps`.
    pub fn new(c: &Primitive, d: &Primitive, eps: Real) -> Result<Self, IntegralError> {
        let digits = (-eps.log10()).clamp(3.0, 14.0);
        let per_panel = (digits * 0.8).ceil() as usize + 2;
        let n_ang = (digits * 1.6).ceil() as usize + 6;
        let n_phi = 2 * n_ang;
        let zeta = c.zeta + d.zeta;
        let deg = c.k + d.k + c.l + d.l;
        let mut pts = Vec::new();
        let mut wts = Vec::new();
        let ang = gauss_legendre(n_ang);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as Real;
        if (c.center - d.center).norm() < 1e-10 {
            let r_end = (digits * std::f64::consts::LN_10 + 6.0 + 2.0 * deg as Real) / zeta;
            let width = 3.0 / zeta;
            let mut edges = vec![0.0];
            while *edges.last().expect("non-empty") < r_end {
                let e = edges.last().expect("non-empty") + width;
                edges.push(e);
            }
            let (rs, rw) = crate::mathcore::quadrature::composite_rule(&edges, per_panel);
            for (r, w) in rs.iter().zip(&rw) {
                for (ct, wt) in ang.nodes.iter().zip(&ang.weights) {
                    let st = (1.0 - ct * ct).sqrt();
                    for k in 0..n_phi {
                        let ph = (k as Real + 0.5) * dphi;
                        pts.push(c.center + Vec3::new(r * st * ph.cos(), r * st * ph.sin(), r * ct));
                        wts.push(w * r * r * wt * dphi);
                    }
                }
            }
        } else {
            let (p, q) = canonical_pair(c.center, d.center);
            let frame = AxisFrame::new(p, q)?;
            let kappa = 0.5 * frame.r * zeta;
            let h = (2.0 / kappa).min(1.0);
            let mut edges = vec![0.0];
            let levels = (digits / 2.0).ceil() as i32;
            for j in (1..=levels).rev() {
                edges.push(h * 4f64.powi(-j));
            }
            edges.push(h);
            let x_end = (digits * std::f64::consts::LN_10 + 6.0 + 2.0 * deg as Real) / kappa;
            let width = (3.0 / kappa).max(h);
            while *edges.last().expect("non-empty") < x_end {
                let e = edges.last().expect("non-empty") + width;
                edges.push(e);
            }
            let (xs, xw) = crate::mathcore::quadrature::composite_rule(&edges, per_panel);
            let h3 = (0.5 * frame.r).powi(3);
            for (x, wx) in xs.iter().zip(&xw) {
                for (nu, wn) in ang.nodes.iter().zip(&ang.weights) {
                    let jac = h3 * (x * (x + 2.0) + (1.0 - nu) * (1.0 + nu));
                    for k in 0..n_phi {
                        let ph = (k as Real + 0.5) * dphi;
                        pts.push(frame.point(*x, *nu, ph));
                        wts.push(wx * wn * dphi * jac);
                    }
                }
            }
        }
        Ok(DensityGrid { points: pts, weights: wts })
    }
}

/// (ab|cd) = ∫ ρ_cd V_ab d³r with V_ab exact and ρ_cd on a product grid.
pub fn fallback_eri(a: &Primitive, b: &Primitive, c: &Primitive, d: &Primitive, eps: Real) -> Result<Real, IntegralError> {
    let v = DensityPotential::new(a, b)?;
    let grid = DensityGrid::new(c, d, eps)?;
    let mut s = 0.0;
    for (p, w) in grid.points.iter().zip(&grid.weights) {
        let rho = c.value(p) * d.value(p);
        if rho != 0.0 {
            s += w * rho * v.at(p)?;
        }
    }
    Ok(s)
}
