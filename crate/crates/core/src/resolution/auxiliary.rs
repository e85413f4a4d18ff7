//! Auxiliary integrals ⟨ψ_c ψ_d √λ V_nl(λ|r−O|) S_lm(r−O)⟩.
//!
//! The kernel separates in spherical coordinates about the origin, so
//! A_nlm = ∫ r² √λ V_nl(λr) ρ_lm(r) dr with ρ_lm(r) the projection of the
//! density on S_lm over the sphere of radius r. When both functions sit on
//! the origin the projection is a Gaunt factor. Otherwise ρ_lm(r) is
//! computed shell by shell: the sphere is split between the off-origin
//! density centers by a Becke partition, and each part is integrated in
//! polar angles whose pole points at its center, graded toward the pole
//! where the shell passes close to the cusp.

use super::potential::VTable;
use crate::geometry::frame_from_axis;
use crate::mathcore::quadrature::{composite_rule, gauss_legendre};
use crate::mathcore::{real_gaunt, real_harmonic_rotation, RealHarmonics};
use crate::twocenter::Primitive;
use crate::{IntegralError, Real, Vec3};

const SAME: Real = 1e-10;
/// Largest phase change of the kernel across one panel.
const PANEL_PHASE: Real = 2.5;

/// Index layout of an auxiliary vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxShape {
    pub n_max: u32,
    pub l_max: u32,
    pub scale: Real,
}

impl AuxShape {
    pub fn nn(&self) -> usize {
        self.n_max as usize + 1
    }

    /// Number of (n, l, m) entries.
    pub fn len(&self) -> usize {
        self.nn() * (self.l_max as usize + 1).pow(2)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of (n, l, m): (l² + l + m)(n_max + 1) + n.
    pub fn index(&self, n: u32, l: u32, m: i32) -> usize {
        ((l * l + l) as i32 + m) as usize * self.nn() + n as usize
    }

    /// Largest panel width in r that keeps the kernel phase change below [`PANEL_PHASE`].
    fn radial_width(&self, r: Real) -> Real {
        let lam = self.scale;
        PANEL_PHASE * (1.0 + lam * lam * r * r) / ((2 * self.n_max + 1) as Real * lam)
    }
}

/// Auxiliary vectors for several densities c·d that share their centers.
///
/// Every pair must involve the same one or two centers (in either order).
/// `digits` sets the target number of correct decimal digits.
pub fn pair_auxiliaries(
    pairs: &[(Primitive, Primitive)],
    origin: &Vec3,
    shape: &AuxShape,
    digits: Real,
) -> Result<Vec<Vec<Real>>, IntegralError> {
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    if !(shape.scale > 0.0 && shape.scale.is_finite()) {
        return Err(IntegralError::Invalid(format!("scale {} must be positive", shape.scale)));
    }
    let c = pairs[0].0.center;
    let d = pairs[0].1.center;
    for (p, q) in pairs {
        let same = |u: &Vec3, v: &Vec3| (u - v).norm() < SAME;
        let ok = (same(&p.center, &c) && same(&q.center, &d)) || (same(&p.center, &d) && same(&q.center, &c));
        if !ok {
            return Err(IntegralError::Invalid("pairs in one auxiliary block must share centers".into()));
        }
    }
    if (c - d).norm() < SAME && (c - origin).norm() < SAME {
        return pairs.iter().map(|(p, q)| radial_auxiliary(p, q, shape, digits)).collect();
    }
    ShellProjector::new(pairs, origin, shape, digits)?.integrate()
}

/// Both functions on the origin: Gaunt factor times ∫ r^{k+2} e^{−ζr} √λ V_nl(λr) dr.
fn radial_auxiliary(p: &Primitive, q: &Primitive, shape: &AuxShape, digits: Real) -> Result<Vec<Real>, IntegralError> {
    let lam = shape.scale;
    let zeta = p.zeta + q.zeta;
    let k = p.k + q.k;
    let nn = shape.nn();
    let table = VTable::get(shape.n_max, shape.l_max);
    let r_end = ((digits + 2.0) * std::f64::consts::LN_10 + 8.0 + 2.0 * k.max(0) as Real) / zeta;
    // panels in Θ = atan(λr), where the kernels are trigonometric in (2n+1)Θ
    let th_end = (lam * r_end).atan();
    let max_w = PANEL_PHASE / (2 * shape.n_max + 1) as Real;
    let mut edges = vec![0.0];
    let mut t: Real = 0.0;
    while t < th_end {
        // density scale 1/ζ in r is λ cos²Θ / ζ in Θ
        let w = max_w.min(2.0 * lam * t.cos().powi(2) / zeta).max(1e-6);
        t = (t + w).min(th_end);
        edges.push(t);
    }
    let (th, tw) = composite_rule(&edges, RADIAL_NODES);
    let mut radial = vec![0.0; table.len()];
    let mut v = vec![0.0; table.len()];
    for (t, w) in th.iter().zip(&tw) {
        let r = t.tan() / lam;
        let jac = 1.0 / (lam * t.cos().powi(2));
        let f = w * jac * r.powi(k + 2) * (-zeta * r).exp();
        table.eval_into(lam * r, &mut v);
        for (a, b) in radial.iter_mut().zip(&v) {
            *a += f * b;
        }
    }
    let mut out = vec![0.0; shape.len()];
    let pre = p.coef * q.coef * lam.sqrt();
    for l in 0..=shape.l_max as i32 {
        for m in -l..=l {
            let g = real_gaunt(p.l, p.m, q.l, q.m, l, m)?;
            if g == 0.0 {
                continue;
            }
            let base = shape.index(0, l as u32, m);
            for n in 0..nn {
                out[base + n] = pre * g * radial[l as usize * nn + n];
            }
        }
    }
    Ok(out)
}

/// One polar patch of the sphere, pointed at an off-origin density center.
struct Patch {
    center: Vec3,
    /// Distance of the center from the origin.
    dist: Real,
    /// Columns: local x, y and pole directions.
    frame: [[Real; 3]; 3],
    /// Rotation blocks carrying local projections to the lab frame, per l.
    rot: Vec<Vec<Real>>,
    /// The other patch's center in local cylinder coordinates (ρ, z), if any.
    other: Option<(Real, Real)>,
    /// Exponent bounding the density decay away from the center.
    zeta: Real,
}

/// Shell-by-shell projection of pair densities onto S_lm about the origin.
struct ShellProjector<'a> {
    pairs: &'a [(Primitive, Primitive)],
    origin: Vec3,
    shape: AuxShape,
    patches: Vec<Patch>,
    /// Both patch centers, for the Becke partition.
    split: Option<(Vec3, Vec3)>,
    /// Every density is axial about the single patch axis.
    axial: bool,
    extra_l: usize,
    log_tol: Real,
    tol: Real,
    r_max: Real,
    harm: RealHarmonics,
}

impl<'a> ShellProjector<'a> {
    fn new(pairs: &'a [(Primitive, Primitive)], origin: &Vec3, shape: &AuxShape, digits: Real) -> Result<Self, IntegralError> {
        let lmax = shape.l_max as usize;
        let c = pairs[0].0.center;
        let d = pairs[0].1.center;
        let deg = pairs.iter().map(|(p, q)| p.k + q.k + p.l + q.l).max().unwrap_or(0).max(0);
        let log_tol = (digits + 2.0) * std::f64::consts::LN_10 + 4.0 + 2.0 * deg as Real;
        let near = |u: &Vec3, v: &Vec3| (u - v).norm() < SAME;
        // exponent sums carried by each center
        let zeta_on = |x: &Vec3| {
            pairs
                .iter()
                .map(|(p, q)| {
                    (if near(&p.center, x) { p.zeta } else { 0.0 }) + (if near(&q.center, x) { q.zeta } else { 0.0 })
                })
                .fold(Real::INFINITY, Real::min)
        };
        let mut centers: Vec<Vec3> = Vec::new();
        for x in [c, d] {
            if !near(&x, origin) && !centers.iter().any(|y| near(y, &x)) {
                centers.push(x);
            }
        }
        // |p − O| ≥ r bounds the decay: r_max where Σ ζ_x (r − |x − O|) reaches log_tol
        let (mut num, mut den) = (log_tol, 0.0);
        for x in [c, d] {
            let z = zeta_on(&x);
            let share = if near(&c, &d) { 0.5 * z } else { z };
            num += share * (x - origin).norm();
            den += share;
        }
        let r_max = num / den;
        let mut patches = Vec::new();
        for (i, x) in centers.iter().enumerate() {
            let rel = x - origin;
            let dist = rel.norm();
            let mut frame_m = frame_from_axis(&rel);
            let other = centers.get(1 - i).map(|y| y - origin);
            if let Some(o) = other {
                // put the other center in the local xz half-plane
                let pole = rel / dist;
                let perp = o - pole * o.dot(&pole);
                if perp.norm() > SAME {
                    let ex = perp / perp.norm();
                    let ey = pole.cross(&ex);
                    for k in 0..3 {
                        frame_m[(k, 0)] = ex[k];
                        frame_m[(k, 1)] = ey[k];
                        frame_m[(k, 2)] = pole[k];
                    }
                }
            }
            let mut frame = [[0.0; 3]; 3];
            for (a, row) in frame.iter_mut().enumerate() {
                for (b, v) in row.iter_mut().enumerate() {
                    *v = frame_m[(a, b)];
                }
            }
            let rot = (0..=lmax).map(|l| real_harmonic_rotation(l, &frame)).collect();
            let other = other.map(|o| {
                let pole = rel / dist;
                let z = o.dot(&pole);
                ((o - pole * z).norm(), z)
            });
            let z = zeta_on(x);
            patches.push(Patch { center: *x, dist, frame, rot, other, zeta: if near(&c, &d) { z } else { z.max(1e-3) } });
        }
        if patches.is_empty() {
            // unreachable: one-center densities on the origin are handled by Gaunt factors
            return Err(IntegralError::Invalid("no off-origin density center".into()));
        }
        let all_s = pairs.iter().all(|(p, q)| p.l == 0 && q.l == 0);
        let collinear = patches[0].other.is_none_or(|(rho, _)| rho < SAME);
        let split = (patches.len() == 2).then(|| (patches[0].center, patches[1].center));
        Ok(ShellProjector {
            pairs,
            origin: *origin,
            shape: *shape,
            axial: all_s && collinear && patches.len() == 1,
            patches,
            split,
            extra_l: pairs.iter().map(|(p, q)| (p.l + q.l) as usize).max().unwrap_or(0),
            log_tol,
            tol: 10f64.powf(-digits),
            r_max,
            harm: RealHarmonics::new(lmax),
        })
    }

    /// Radial panels: kernel phase, density scale, and grading toward the
    /// shells through the density centers, where ρ_lm(r) has a kink.
    fn radial_edges(&self) -> Vec<Real> {
        let mut stops: Vec<Real> = self.patches.iter().map(|p| p.dist).filter(|&x| x < self.r_max).collect();
        stops.push(0.0);
        stops.push(self.r_max);
        stops.sort_by(|a, b| a.total_cmp(b));
        stops.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let zeta = self.patches.iter().map(|p| p.zeta).fold(Real::INFINITY, Real::min);
        let mut edges = vec![0.0];
        for seg in stops.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let floor = 1e-4 * b.max(1.0);
            let kink_a = a > 0.0;
            let kink_b = b < self.r_max;
            let mut t = a;
            while t < b {
                let mut w = self.shape.radial_width(t).min(3.0 / zeta);
                if kink_a {
                    w = w.min(3.0 * (t - a) + floor);
                }
                if kink_b {
                    w = w.min(0.75 * (b - t));
                }
                w = w.max(floor);
                t = if b - t - w < floor { b } else { t + w };
                edges.push(t);
            }
        }
        edges
    }

    fn integrate(&self) -> Result<Vec<Vec<Real>>, IntegralError> {
        let nn = self.shape.nn();
        let lmax = self.shape.l_max as usize;
        let nlm = (lmax + 1) * (lmax + 1);
        let np = self.pairs.len();
        let lam = self.shape.scale;
        let table = VTable::get(self.shape.n_max, self.shape.l_max);
        let (rs, rw) = composite_rule(&self.radial_edges(), RADIAL_NODES);
        let mut v = vec![0.0; table.len()];
        let mut proj = vec![0.0; np * nlm];
        let mut out = vec![vec![0.0; self.shape.len()]; np];
        for (&r, &w) in rs.iter().zip(&rw) {
            proj.iter_mut().for_each(|x| *x = 0.0);
            if !self.shell(r, &mut proj) {
                continue;
            }
            table.eval_into(lam * r, &mut v);
            let f = w * r * r * lam.sqrt();
            for (i, o) in out.iter_mut().enumerate() {
                for l in 0..=lmax {
                    let vrow = &v[l * nn..(l + 1) * nn];
                    for lm in l * l..(l + 1) * (l + 1) {
                        let c = f * proj[i * nlm + lm];
                        if c == 0.0 {
                            continue;
                        }
                        for (a, b) in o[lm * nn..(lm + 1) * nn].iter_mut().zip(vrow) {
                            *a += c * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// ∫ ρ_i S_lm dΩ on the sphere of radius r, added to `proj` (pair-major).
    /// Returns false when the shell carries no density.
    fn shell(&self, r: Real, proj: &mut [Real]) -> bool {
        let lmax = self.shape.l_max as usize;
        let nlm = (lmax + 1) * (lmax + 1);
        let np = self.pairs.len();
        let mut local = vec![0.0; np * nlm];
        let mut fm = vec![0.0; np * (2 * lmax + 1)];
        let mut theta = vec![0.0; nlm];
        let mut dens = vec![0.0; np];
        let mut any = false;
        let rule = gauss_legendre(ANGLE_NODES);
        for patch in &self.patches {
            local.iter_mut().for_each(|x| *x = 0.0);
            for (g0, g1) in self.polar_panels(patch, r) {
                let (hg, cg) = (0.5 * (g1 - g0), 0.5 * (g1 + g0));
                for (t, tw) in rule.nodes.iter().zip(&rule.weights) {
                    let g = cg + hg * t;
                    let (sg, cgam) = g.sin_cos();
                    let nphi = self.azimuth_count(patch, r, g);
                    fm.iter_mut().for_each(|x| *x = 0.0);
                    let dphi = 2.0 * std::f64::consts::PI / nphi as Real;
                    let mut ring_any = false;
                    for k in 0..nphi {
                        let ph = k as Real * dphi;
                        let (sp, cp) = ph.sin_cos();
                        let u = [sg * cp, sg * sp, cgam];
                        let p = self.lab_point(patch, r, u);
                        let wgt = dphi * self.partition(patch, &p);
                        if wgt == 0.0 {
                            continue;
                        }
                        let mut nz = false;
                        for (i, (a, b)) in self.pairs.iter().enumerate() {
                            dens[i] = wgt * a.value(&p) * b.value(&p);
                            nz |= dens[i] != 0.0;
                        }
                        if !nz {
                            continue;
                        }
                        ring_any = true;
                        // trigonometric moments, m = −lmax..lmax at offset lmax
                        let (s1, c1) = (sp, cp);
                        let (mut sm, mut cm) = (0.0, 1.0);
                        for m in 0..=lmax {
                            for (i, dv) in dens.iter().enumerate() {
                                let row = &mut fm[i * (2 * lmax + 1)..];
                                row[lmax + m] += dv * cm;
                                if m > 0 {
                                    row[lmax - m] += dv * sm;
                                }
                            }
                            if self.axial {
                                break;
                            }
                            let c2 = cm * c1 - sm * s1;
                            sm = sm * c1 + cm * s1;
                            cm = c2;
                        }
                    }
                    if !ring_any {
                        continue;
                    }
                    any = true;
                    self.harm.eval([sg, 0.0, cgam], &mut theta);
                    let wg = hg * tw * sg;
                    for i in 0..np {
                        let row = &fm[i * (2 * lmax + 1)..(i + 1) * (2 * lmax + 1)];
                        let loc = &mut local[i * nlm..(i + 1) * nlm];
                        for l in 0..=lmax {
                            let mtop = if self.axial { 0 } else { l };
                            for m in 0..=mtop {
                                let th = wg * theta[l * l + l + m];
                                loc[l * l + l + m] += th * row[lmax + m];
                                if m > 0 {
                                    loc[l * l + l - m] += th * row[lmax - m];
                                }
                            }
                        }
                    }
                }
            }
            // lab projection: S_lm(R û') = Σ_m' c[m][m'] S_lm'(û')
            for i in 0..np {
                for l in 0..=lmax {
                    let dim = 2 * l + 1;
                    let c = &patch.rot[l];
                    let loc = &local[i * nlm + l * l..i * nlm + l * l + dim];
                    let dst = &mut proj[i * nlm + l * l..i * nlm + l * l + dim];
                    for (m, dv) in dst.iter_mut().enumerate() {
                        *dv += c[m * dim..(m + 1) * dim].iter().zip(loc).map(|(a, b)| a * b).sum::<Real>();
                    }
                }
            }
        }
        any
    }

    fn lab_point(&self, patch: &Patch, r: Real, u: [Real; 3]) -> Vec3 {
        let f = &patch.frame;
        self.origin
            + Vec3::new(
                r * (f[0][0] * u[0] + f[0][1] * u[1] + f[0][2] * u[2]),
                r * (f[1][0] * u[0] + f[1][1] * u[1] + f[1][2] * u[2]),
                r * (f[2][0] * u[0] + f[2][1] * u[1] + f[2][2] * u[2]),
            )
    }

    /// Becke weight of `patch` at p.
    fn partition(&self, patch: &Patch, p: &Vec3) -> Real {
        let Some((a, b)) = self.split else { return 1.0 };
        let mu = ((p - a).norm() - (p - b).norm()) / (a - b).norm();
        let mut f = mu;
        for _ in 0..3 {
            f = 1.5 * f - 0.5 * f * f * f;
        }
        let s = 0.5 * (1.0 - f);
        if (patch.center - a).norm() < SAME { s } else { 1.0 - s }
    }

    /// Polar panels [γ₀, γ₁] graded toward the pole by the near-cusp width
    /// |r − R|/√(rR) and trimmed where the density has decayed.
    fn polar_panels(&self, patch: &Patch, r: Real) -> Vec<(Real, Real)> {
        let big = patch.dist;
        let pi = std::f64::consts::PI;
        // |p − c|² = (r − R)² + 2rR(1 − cos γ) ≤ (log_tol/ζ)²
        let reach = self.log_tol / patch.zeta;
        let g_end = if self.split.is_some() || (r - big).abs() < reach {
            let cosg = 1.0 - (reach * reach - (r - big).powi(2)) / (2.0 * r * big);
            if self.split.is_some() { pi } else { cosg.clamp(-1.0, 1.0).acos() }
        } else {
            return Vec::new();
        };
        let g0 = ((r - big).abs() / (r * big).sqrt()).max(1e-6);
        // density scale along the sphere: |p − c| changes by at most r per radian
        let cap = (3.0 / (patch.zeta * r)).min(0.5);
        let mut panels = Vec::new();
        let mut t = 0.0;
        while t < g_end {
            let w = (3.0 * t + 3.0 * g0).min(cap).max(1e-7);
            let e = if g_end - t - w < 0.2 * w { g_end } else { t + w };
            panels.push((t, e));
            t = e;
        }
        panels
    }

    /// Trapezoid size for the ring at polar angle γ of `patch`.
    fn azimuth_count(&self, patch: &Patch, r: Real, g: Real) -> usize {
        if self.axial {
            return 1;
        }
        let lmax = self.shape.l_max as usize;
        let base = 2 * (lmax + self.extra_l) + 8;
        let Some((rho_d, z_d)) = patch.other else { return base };
        let (sg, cg) = g.sin_cos();
        let rho = r * sg;
        let a2 = rho * rho + rho_d * rho_d + (r * cg - z_d).powi(2);
        let q = if a2 > 0.0 { 2.0 * rho * rho_d / a2 } else { 0.0 };
        let beta = q / (1.0 + (1.0 - q * q).max(0.0).sqrt());
        let log_rel = (self.tol * 1e-3).ln();
        let geo = if beta > 1e-3 { (log_rel / beta.ln()).min(MAX_RING_GEO) } else { 4.0 };
        base + geo.ceil() as usize
    }
}

const RADIAL_NODES: usize = 12;
const ANGLE_NODES: usize = 10;
const MAX_RING_GEO: Real = 400.0;
