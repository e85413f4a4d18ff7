//! Two-center Coulomb integrals from the Neumann expansion of 1/r₁₂.
//!
//! In prolate spheroidal coordinates about centers A and B,
//! 1/r₁₂ = (2/R) Σ_l (2l+1) P_l(μ_<) Q_l(μ_>) P_l(ν₁) P_l(ν₂) + (m ≠ 0 terms).
//! A density enters only through its moments
//! g_l(μ) = (R/2)³ ∫∫ ρ P_l(ν) (μ² − ν²) dν dφ,
//! and the m ≠ 0 terms vanish as soon as one of the two densities is
//! axially symmetric. Cumulative μ-integrals use a Gauss rule on panels in
//! x = μ − 1 that are graded geometrically toward x = 0, where Q_l has its
//! logarithmic singularity.

use std::sync::{Arc, LazyLock};

use crate::mathcore::quadrature::gauss_legendre;
use crate::mathcore::{legendre_p_table, legendre_q_table_shifted};
use crate::twocenter::Primitive;
use crate::{IntegralError, Real, Vec3};

const PANEL_NODES: usize = 16;
const GRADING_LEVELS: i32 = 24;

/// Two centers and the prolate coordinates they define.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFrame {
    pub a: Vec3,
    pub b: Vec3,
    pub r: Real,
    mid: Vec3,
    rot: [[Real; 3]; 3],
}

impl AxisFrame {
    pub fn new(a: Vec3, b: Vec3) -> Result<Self, IntegralError> {
        let axis = b - a;
        let r = axis.norm();
        if !(r > 1e-10) {
            return Err(IntegralError::Invalid("prolate frame needs two distinct centers".into()));
        }
        let f = crate::geometry::frame_from_axis(&axis);
        let mut rot = [[0.0; 3]; 3];
        for (i, row) in rot.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f[(i, j)];
            }
        }
        Ok(AxisFrame { a, b, r, mid: 0.5 * (a + b), rot })
    }

    /// Lab point at (μ = 1 + x, ν, φ).
    pub fn point(&self, x: Real, nu: Real, phi: Real) -> Vec3 {
        let h = 0.5 * self.r;
        let mu = 1.0 + x;
        let rho = h * (x * (x + 2.0) * (1.0 - nu) * (1.0 + nu)).max(0.0).sqrt();
        let local = [rho * phi.cos(), rho * phi.sin(), h * mu * nu];
        let mut out = self.mid;
        for i in 0..3 {
            out[i] += self.rot[i][0] * local[0] + self.rot[i][1] * local[1] + self.rot[i][2] * local[2];
        }
        out
    }

    /// (μ − 1, ν) of a lab point.
    pub fn coords(&self, p: &Vec3) -> (Real, Real) {
        let ra = (p - self.a).norm();
        let rb = (p - self.b).norm();
        let x = ((ra + rb - self.r) / self.r).max(0.0);
        let nu = ((ra - rb) / self.r).clamp(-1.0, 1.0);
        (x, nu)
    }

    /// Which end of the frame a center sits on: Some(true) for A, Some(false) for B.
    fn end_of(&self, c: &Vec3) -> Option<bool> {
        if (c - self.a).norm() < 1e-10 {
            Some(true)
        } else if (c - self.b).norm() < 1e-10 {
            Some(false)
        } else {
            None
        }
    }
}

/// Composite Gauss rule in x = μ − 1 with spectral cumulative integration.
#[derive(Debug, Clone)]
pub struct MuGrid {
    edges: Vec<Real>,
    pub x: Vec<Real>,
    pub w: Vec<Real>,
}

impl MuGrid {
    /// Grid for densities decaying like e^{−κ x} x^{degree}, κ ∈ [kappa_min, kappa_max].
    pub fn new(kappa_min: Real, kappa_max: Real, degree: i32) -> Self {
        let h = (2.0 / kappa_max).min(1.0);
        let mut edges = vec![0.0];
        for j in (1..=GRADING_LEVELS).rev() {
            edges.push(h * 4f64.powi(-j));
        }
        edges.push(h);
        let x_end = (44.0 + 3.0 * degree.max(0) as Real) / kappa_min;
        let width = (3.0 / kappa_max).max(h).min(3.0 / kappa_min);
        let mut e = h;
        while e < x_end {
            e += width;
            edges.push(e);
        }
        let rule = gauss_legendre(PANEL_NODES);
        let mut x = Vec::new();
        let mut w = Vec::new();
        for p in edges.windows(2) {
            let (c, hw) = (0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
            for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
                x.push(c + hw * t);
                w.push(hw * wt);
            }
        }
        MuGrid { edges, x, w }
    }

    pub fn panels(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn x_end(&self) -> Real {
        *self.edges.last().expect("non-empty")
    }

    /// Panel index and local coordinate t ∈ [−1, 1] of x, if inside the grid.
    fn locate(&self, x: Real) -> Option<(usize, Real)> {
        if x >= self.x_end() {
            return None;
        }
        let p = self.edges.partition_point(|&e| e <= x).saturating_sub(1);
        let (a, b) = (self.edges[p], self.edges[p + 1]);
        Some((p, (2.0 * x - a - b) / (b - a)))
    }

    /// Cumulative sums Σ_{nodes ≤ i} within each panel via the spectral matrix,
    /// plus prefix totals over panels: returns F(x_i) = ∫₀^{x_i} f.
    fn cumulative(&self, f: &[Real]) -> Vec<Real> {
        let s = spectral();
        let n = PANEL_NODES;
        let mut out = vec![0.0; f.len()];
        let mut start = 0.0;
        for p in 0..self.panels() {
            let hw = 0.5 * (self.edges[p + 1] - self.edges[p]);
            let seg = &f[p * n..(p + 1) * n];
            let mut total = 0.0;
            for (j, &v) in seg.iter().enumerate() {
                total += s.weights[j] * v;
            }
            for i in 0..n {
                let mut acc = 0.0;
                for (j, &v) in seg.iter().enumerate() {
                    acc += s.matrix[i * n + j] * v;
                }
                out[p * n + i] = start + hw * acc;
            }
            start += hw * total;
        }
        out
    }
}

/// Integration matrix S_ij = ∫_{−1}^{t_i} ℓ_j(t) dt on the Gauss nodes.
struct Spectral {
    weights: Vec<Real>,
    matrix: Vec<Real>,
    /// c[k][j] = (2k+1)/2 w_j P_k(t_j): Legendre coefficient k of ℓ_j.
    coef: Vec<Real>,
}

static SPECTRAL: LazyLock<Arc<Spectral>> = LazyLock::new(|| {
    let rule = gauss_legendre(PANEL_NODES);
    let n = PANEL_NODES;
    let mut coef = vec![0.0; n * n];
    for j in 0..n {
        let p = legendre_p_table(n, rule.nodes[j]);
        for k in 0..n {
            coef[k * n + j] = (2 * k + 1) as Real / 2.0 * rule.weights[j] * p[k];
        }
    }
    let mut matrix = vec![0.0; n * n];
    for i in 0..n {
        let iw = integral_weights(&coef, rule.nodes[i]);
        matrix[i * n..(i + 1) * n].copy_from_slice(&iw);
    }
    Arc::new(Spectral { weights: rule.weights.clone(), matrix, coef })
});

fn spectral() -> Arc<Spectral> {
    SPECTRAL.clone()
}

/// Weights v_j with ∫_{−1}^{t} p = Σ_j v_j p(t_j) for polynomials of degree < n.
fn integral_weights(coef: &[Real], t: Real) -> Vec<Real> {
    let n = PANEL_NODES;
    let p = legendre_p_table(n, t);
    let mut ip = vec![0.0; n];
    ip[0] = t + 1.0;
    for k in 1..n {
        ip[k] = (p[k + 1] - p[k - 1]) / (2 * k + 1) as Real;
    }
    let mut v = vec![0.0; n];
    for k in 0..n {
        for j in 0..n {
            v[j] += coef[k * n + j] * ip[k];
        }
    }
    v
}

/// Neumann moments g_l(μ_i) of one density on a shared grid.
#[derive(Debug, Clone)]
pub struct Moments {
    pub lmax: usize,
    /// g[l][i]
    pub g: Vec<Vec<Real>>,
    pub axial: bool,
}

/// Grid, Legendre tables and frame shared by all densities of one center pair.
#[derive(Debug, Clone)]
pub struct NeumannGrid {
    pub frame: AxisFrame,
    pub mu: MuGrid,
    pub lmax: usize,
    nu: Vec<Real>,
    nu_w: Vec<Real>,
    /// P_l(ν_k), [k][l]
    p_nu: Vec<Vec<Real>>,
    /// P_l(μ_i), Q_l(μ_i), [i][l]
    p_mu: Vec<Vec<Real>>,
    q_mu: Vec<Vec<Real>>,
}

/// Decay rate in x = μ − 1 and polynomial degree of a product density.
pub(crate) fn decay_of(frame: &AxisFrame, a: &Primitive, b: &Primitive) -> (Real, i32) {
    (0.5 * frame.r * (a.zeta + b.zeta), a.k + b.k + a.l + b.l)
}

impl NeumannGrid {
    pub fn new(frame: AxisFrame, kappa_min: Real, kappa_max: Real, degree: i32) -> Result<Self, IntegralError> {
        let mu = MuGrid::new(kappa_min, kappa_max, degree);
        let lmax = ((1.4 * kappa_max + 30.0 + degree as Real).ceil() as usize).min(160);
        let rule = gauss_legendre(lmax + 24);
        let nu = rule.nodes.clone();
        let nu_w = rule.weights.clone();
        let p_nu = nu.iter().map(|&v| legendre_p_table(lmax, v)).collect();
        let p_mu = mu.x.iter().map(|&x| legendre_p_table(lmax, 1.0 + x)).collect();
        let q_mu = mu
            .x
            .iter()
            .map(|&x| legendre_q_table_shifted(lmax, x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NeumannGrid { frame, mu, lmax, nu, nu_w, p_nu, p_mu, q_mu })
    }

    /// Grid suited to every product density in `pairs`.
    pub fn for_pairs(frame: AxisFrame, pairs: &[(&Primitive, &Primitive)]) -> Result<Self, IntegralError> {
        let mut kmin = Real::INFINITY;
        let mut kmax: Real = 0.0;
        let mut deg = 0;
        for (a, b) in pairs {
            let (k, d) = decay_of(&frame, a, b);
            kmin = kmin.min(k);
            kmax = kmax.max(k);
            deg = deg.max(d);
        }
        Self::new(frame, kmin, kmax, deg)
    }

    /// Moments of the density a·b (φ-averaged).
    pub fn moments(&self, a: &Primitive, b: &Primitive) -> Result<Moments, IntegralError> {
        let fr = &self.frame;
        let ends = (fr.end_of(&a.center), fr.end_of(&b.center));
        let h = 0.5 * fr.r;
        let s_only = a.l == 0 && b.l == 0;
        let axial = s_only || (is_axial(fr, a) && is_axial(fr, b));
        let nphi = if s_only { 1 } else { 2 * (a.l + b.l) as usize + 2 };
        let nx = self.mu.x.len();
        let nn = self.nu.len();
        let y00sq = 1.0 / (4.0 * std::f64::consts::PI);
        let radial = |p: &Primitive, r: Real| p.coef * r.powi(p.k) * (-p.zeta * r).exp();
        let mut dens = vec![0.0; nx * nn];
        for (i, &x) in self.mu.x.iter().enumerate() {
            for (k, &nu) in self.nu.iter().enumerate() {
                let v = match (s_only, ends) {
                    (true, (Some(ea), Some(eb))) => {
                        let ra = if ea { h * (x + 1.0 + nu) } else { h * (x + 1.0 - nu) };
                        let rb = if eb { h * (x + 1.0 + nu) } else { h * (x + 1.0 - nu) };
                        radial(a, ra) * radial(b, rb) * y00sq
                    }
                    _ => {
                        let mut acc = 0.0;
                        for j in 0..nphi {
                            let phi = 2.0 * std::f64::consts::PI * j as Real / nphi as Real;
                            let pt = fr.point(x, nu, phi);
                            acc += a.value(&pt) * b.value(&pt);
                        }
                        acc / nphi as Real
                    }
                };
                dens[i * nn + k] = v * (x * (x + 2.0) + (1.0 - nu) * (1.0 + nu)) * self.nu_w[k];
            }
        }
        let pref = 2.0 * std::f64::consts::PI * h * h * h;
        let mut g = vec![vec![0.0; nx]; self.lmax + 1];
        for i in 0..nx {
            let row = &dens[i * nn..(i + 1) * nn];
            for (k, &d) in row.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                let pk = &self.p_nu[k];
                for l in 0..=self.lmax {
                    g[l][i] += d * pk[l];
                }
            }
            for gl in g.iter_mut() {
                gl[i] *= pref;
            }
        }
        Ok(Moments { lmax: self.lmax, g, axial })
    }

    /// ∫∫ ρ₁ ρ₂ / r₁₂ from the moments of two densities, one of them axial.
    pub fn coulomb(&self, m1: &Moments, m2: &Moments) -> Result<Real, IntegralError> {
        if !m1.axial && !m2.axial {
            return Err(IntegralError::Unsupported(
                "Neumann route needs at least one axially symmetric density".into(),
            ));
        }
        let nx = self.mu.x.len();
        let mut total = 0.0;
        let mut f1 = vec![0.0; nx];
        let mut f2 = vec![0.0; nx];
        for l in 0..=self.lmax {
            for i in 0..nx {
                f1[i] = self.p_mu[i][l] * m1.g[l][i];
                f2[i] = self.p_mu[i][l] * m2.g[l][i];
            }
            let c1 = self.mu.cumulative(&f1);
            let c2 = self.mu.cumulative(&f2);
            let mut s = 0.0;
            for i in 0..nx {
                s += self.mu.w[i] * self.q_mu[i][l] * (m2.g[l][i] * c1[i] + m1.g[l][i] * c2[i]);
            }
            total += (2 * l + 1) as Real * s;
        }
        Ok(2.0 / self.frame.r * total)
    }

    /// Potential of an axial density, evaluable anywhere.
    pub fn potential(&self, m: &Moments) -> Result<PairPotential, IntegralError> {
        if !m.axial {
            return Err(IntegralError::Unsupported("pair potential needs an axially symmetric density".into()));
        }
        let nx = self.mu.x.len();
        let n = PANEL_NODES;
        let np = self.mu.panels();
        let mut pg = vec![vec![0.0; nx]; self.lmax + 1];
        let mut qg = vec![vec![0.0; nx]; self.lmax + 1];
        let mut f_start = vec![vec![0.0; np + 1]; self.lmax + 1];
        let mut g_suffix = vec![vec![0.0; np + 1]; self.lmax + 1];
        let sp = spectral();
        for l in 0..=self.lmax {
            for i in 0..nx {
                pg[l][i] = self.p_mu[i][l] * m.g[l][i];
                qg[l][i] = self.q_mu[i][l] * m.g[l][i];
            }
            for p in 0..np {
                let hw = 0.5 * (self.mu.edges[p + 1] - self.mu.edges[p]);
                let tp: Real = (0..n).map(|j| sp.weights[j] * pg[l][p * n + j]).sum();
                f_start[l][p + 1] = f_start[l][p] + hw * tp;
            }
            for p in (0..np).rev() {
                let hw = 0.5 * (self.mu.edges[p + 1] - self.mu.edges[p]);
                let tq: Real = (0..n).map(|j| sp.weights[j] * qg[l][p * n + j]).sum();
                g_suffix[l][p] = g_suffix[l][p + 1] + hw * tq;
            }
        }
        Ok(PairPotential { grid: self.clone_light(), pg, qg, f_start, g_suffix })
    }

    fn clone_light(&self) -> Arc<NeumannGrid> {
        Arc::new(self.clone())
    }
}

/// True when the primitive is a pure σ function about the frame axis.
fn is_axial(frame: &AxisFrame, p: &Primitive) -> bool {
    if p.l == 0 {
        return true;
    }
    let row = crate::twocenter::rotation_row(p.l, p.m, &frame.rot);
    row.iter()
        .enumerate()
        .all(|(i, &c)| i as i32 == p.l || c.abs() < 1e-14)
}

/// Potential of one axial density on a Neumann grid.
#[derive(Debug, Clone)]
pub struct PairPotential {
    grid: Arc<NeumannGrid>,
    pg: Vec<Vec<Real>>,
    qg: Vec<Vec<Real>>,
    f_start: Vec<Vec<Real>>,
    g_suffix: Vec<Vec<Real>>,
}

impl PairPotential {
    pub fn at(&self, point: &Vec3) -> Result<Real, IntegralError> {
        let gr = &self.grid;
        let (x, nu) = gr.frame.coords(point);
        let lmax = gr.lmax;
        let p_nu = legendre_p_table(lmax, nu);
        let np = gr.mu.panels();
        let mut v = 0.0;
        match gr.mu.locate(x) {
            None => {
                let q = legendre_q_table_shifted(lmax, x)?;
                for l in 0..=lmax {
                    v += (2 * l + 1) as Real * p_nu[l] * q[l] * self.f_start[l][np];
                }
            }
            Some((p, t)) => {
                let sp = spectral();
                let iw = integral_weights(&sp.coef, t);
                let hw = 0.5 * (gr.mu.edges[p + 1] - gr.mu.edges[p]);
                let n = PANEL_NODES;
                let p_mu = legendre_p_table(lmax, 1.0 + x);
                let q_mu = if x > 0.0 { Some(legendre_q_table_shifted(lmax, x)?) } else { None };
                for l in 0..=lmax {
                    let seg_p = &self.pg[l][p * n..(p + 1) * n];
                    let seg_q = &self.qg[l][p * n..(p + 1) * n];
                    let mut fp = 0.0;
                    let mut fq = 0.0;
                    let mut tq = 0.0;
                    for j in 0..n {
                        fp += iw[j] * seg_p[j];
                        fq += iw[j] * seg_q[j];
                        tq += sp.weights[j] * seg_q[j];
                    }
                    let f = self.f_start[l][p] + hw * fp;
                    // ∫_x^∞ Q g = (rest of this panel) + (later panels)
                    let g = hw * (tq - fq) + self.g_suffix[l][p + 1];
                    let qf = match &q_mu {
                        Some(q) => q[l] * f,
                        None => 0.0,
                    };
                    v += (2 * l + 1) as Real * p_nu[l] * (qf + p_mu[l] * g);
                }
            }
        }
        Ok(2.0 / gr.frame.r * v)
    }
}

/// Potential of the product a·b at `point`, for any pair of s or σ primitives.
pub fn pair_potential_at(a: &Primitive, b: &Primitive, point: &Vec3) -> Result<Real, IntegralError> {
    if (a.center - b.center).norm() < 1e-10 {
        return super::radial::one_center_pair_potential(a, b, point);
    }
    let frame = AxisFrame::new(a.center, b.center)?;
    let grid = NeumannGrid::for_pairs(frame, &[(a, b)])?;
    let m = grid.moments(a, b)?;
    if !m.axial {
        return super::fallback::numeric_pair_potential(a, b, point);
    }
    grid.potential(&m)?.at(point)
}

/// (ab|cd) when all four primitives sit on the same two centers.
pub fn primitive_eri_two_center(a: &Primitive, b: &Primitive, c: &Primitive, d: &Primitive) -> Result<Real, IntegralError> {
    let centers = [a.center, b.center, c.center, d.center];
    let first = centers[0];
    let other = centers.iter().find(|p| (*p - first).norm() > 1e-10).copied().ok_or_else(|| {
        IntegralError::WrongRoute("all four functions share one center; use the one-center route".into())
    })?;
    if centers.iter().any(|p| (p - first).norm() > 1e-10 && (p - other).norm() > 1e-10) {
        return Err(IntegralError::WrongRoute("more than two centers".into()));
    }
    let (ca, cb) = canonical_pair(first, other);
    let frame = AxisFrame::new(ca, cb)?;
    let grid = NeumannGrid::for_pairs(frame, &[(a, b), (c, d)])?;
    let m1 = grid.moments(a, b)?;
    let m2 = grid.moments(c, d)?;
    grid.coulomb(&m1, &m2)
}

/// Orders two centers lexicographically so that a frame does not depend on
/// the order in which integrals name them.
pub(crate) fn canonical_pair(p: Vec3, q: Vec3) -> (Vec3, Vec3) {
    let key = |v: &Vec3| (v.x, v.y, v.z);
    if key(&p) <= key(&q) {
        (p, q)
    } else {
        (q, p)
    }
}
