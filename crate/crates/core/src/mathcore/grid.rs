//! Becke-partitioned molecular integration grids.

use super::quadrature::gauss_legendre;
use crate::Vec3;

/// Points and weights for ∫ f d³r over all space.
#[derive(Debug, Clone)]
pub struct MolecularGrid {
    pub points: Vec<Vec3>,
    pub weights: Vec<f64>,
}

/// Radial and angular resolution of each atomic grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub radial: usize,
    pub theta: usize,
    pub phi: usize,
    /// Radial scale: half the points lie within this distance.
    pub r_mid: f64,
}

impl GridSpec {
    pub fn new(radial: usize, theta: usize) -> Self {
        GridSpec { radial, theta, phi: 2 * theta, r_mid: 1.0 }
    }
}

impl MolecularGrid {
    /// Superposition of atomic grids at `centers`, weighted by Becke cell functions.
    pub fn new(centers: &[Vec3], spec: GridSpec) -> Self {
        let n = spec.radial;
        let ang = gauss_legendre(spec.theta);
        let dphi = 2.0 * std::f64::consts::PI / spec.phi as f64;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (ic, c) in centers.iter().enumerate() {
            for i in 1..=n {
                // Gauss–Chebyshev (second kind) on x, mapped by r = r_mid (1+x)/(1−x)
                let th = i as f64 * std::f64::consts::PI / (n + 1) as f64;
                let x = th.cos();
                let r = spec.r_mid * (1.0 + x) / (1.0 - x);
                let drdx = 2.0 * spec.r_mid / ((1.0 - x) * (1.0 - x));
                let wr = std::f64::consts::PI / (n + 1) as f64 * th.sin() * drdx * r * r;
                for (ct, wt) in ang.nodes.iter().zip(&ang.weights) {
                    let st = (1.0 - ct * ct).max(0.0).sqrt();
                    for k in 0..spec.phi {
                        let ph = (k as f64 + 0.5) * dphi;
                        let p = c + Vec3::new(r * st * ph.cos(), r * st * ph.sin(), r * ct);
                        let w = wr * wt * dphi * becke_weight(centers, ic, &p);
                        if w != 0.0 {
                            points.push(p);
                            weights.push(w);
                        }
                    }
                }
            }
        }
        MolecularGrid { points, weights }
    }

    pub fn integrate<F: FnMut(&Vec3) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

fn becke_step(mu: f64) -> f64 {
    let mut s = mu;
    for _ in 0..3 {
        s = 1.5 * s - 0.5 * s * s * s;
    }
    0.5 * (1.0 - s)
}

/// Becke's fuzzy-cell weight of atom `i` at point `p`.
pub fn becke_weight(centers: &[Vec3], i: usize, p: &Vec3) -> f64 {
    if centers.len() == 1 {
        return 1.0;
    }
    let dist: Vec<f64> = centers.iter().map(|c| (p - c).norm()).collect();
    let cell = |a: usize| {
        let mut w = 1.0;
        for b in 0..centers.len() {
            if b != a {
                let rab = (centers[a] - centers[b]).norm();
                if rab < 1e-12 {
                    continue;
                }
                w *= becke_step((dist[a] - dist[b]) / rab);
            }
        }
        w
    };
    let total: f64 = (0..centers.len()).map(cell).sum();
    if total == 0.0 {
        0.0
    } else {
        cell(i) / total
    }
}
