use super::expansion::raw_expansion;
use crate::basis::{BasisFunction, OrbitalKind};
use crate::geometry::frame_from_axis;
use crate::mathcore::{factorial, real_harmonic_rotation};
use crate::{IntegralError, Real, Vec3};

/// coef · r^k e^{−ζr} S_lm(r̂) about `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub coef: Real,
    pub k: i32,
    pub l: i32,
    pub m: i32,
    pub zeta: Real,
    pub center: Vec3,
}

/// Centers closer than this are treated as coincident.
pub(crate) const SAME_CENTER: Real = 1e-10;

impl Primitive {
    /// Normalized STO as a primitive (real harmonic angular part).
    pub fn from_sto(bf: &BasisFunction, center: Vec3) -> Result<Self, IntegralError> {
        if bf.kind != OrbitalKind::Sto {
            return Err(IntegralError::UnsupportedKind(bf.kind.to_string()));
        }
        Ok(Primitive {
            coef: bf.normalization(),
            k: bf.n - 1,
            l: bf.l,
            m: bf.m,
            zeta: bf.zeta,
            center,
        })
    }

    /// ∇² of this primitive as a sum of primitives with powers k−2, k−1, k.
    pub fn laplacian(&self) -> Vec<Primitive> {
        let k = self.k;
        let kk = (k * (k + 1) - self.l * (self.l + 1)) as Real;
        let mut out = Vec::with_capacity(3);
        if kk != 0.0 {
            out.push(Primitive { coef: self.coef * kk, k: k - 2, ..*self });
        }
        out.push(Primitive { coef: -self.coef * 2.0 * self.zeta * (k + 1) as Real, k: k - 1, ..*self });
        out.push(Primitive { coef: self.coef * self.zeta * self.zeta, ..*self });
        out
    }

    /// Same primitive times r^{shift}.
    pub fn times_r(&self, shift: i32) -> Primitive {
        Primitive { k: self.k + shift, ..*self }
    }

    pub fn value(&self, point: &Vec3) -> Real {
        let d = point - self.center;
        let r = d.norm();
        if r == 0.0 {
            return if self.l == 0 && self.k == 0 { self.coef * Y00 } else { 0.0 };
        }
        if self.l == 0 {
            return self.coef * r.powi(self.k) * (-self.zeta * r).exp() * Y00;
        }
        let u = [d.x / r, d.y / r, d.z / r];
        let s = crate::mathcore::real_harmonics_unit(self.l as usize, u)[(self.l * self.l + self.l + self.m) as usize];
        self.coef * r.powi(self.k) * (-self.zeta * r).exp() * s
    }
}

const Y00: Real = 0.282_094_791_773_878_14;

/// Rotation coefficients as a plain array.
pub(crate) fn frame_rows(axis: &Vec3) -> [[Real; 3]; 3] {
    let f = frame_from_axis(axis);
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f[(i, j)];
        }
    }
    out
}

/// ∫ a · b d³r for two primitives at arbitrary centers.
pub fn primitive_overlap(a: &Primitive, b: &Primitive) -> Result<Real, IntegralError> {
    if a.k < a.l - 1 || b.k < b.l - 1 {
        return Err(IntegralError::Invalid(format!(
            "power r^{} too singular for l = {}",
            a.k.min(b.k),
            a.l.max(b.l)
        )));
    }
    let axis = b.center - a.center;
    let r = axis.norm();
    if r < SAME_CENTER {
        if a.l != b.l || a.m != b.m {
            return Ok(0.0);
        }
        let kk = a.k + b.k + 2;
        let z = a.zeta + b.zeta;
        return Ok(a.coef * b.coef * factorial::<Real>(kk as u32) / z.powi(kk + 1));
    }
    let rot = frame_rows(&axis);
    let ca = rotation_row(a.l, a.m, &rot);
    let cb = rotation_row(b.l, b.m, &rot);
    let lmin = a.l.min(b.l);
    let p = 0.5 * r * (a.zeta + b.zeta);
    let q = 0.5 * r * (a.zeta - b.zeta);
    let scale = (0.5 * r).powi(a.k + b.k + 3);
    let mut total = 0.0;
    for mp in -lmin..=lmin {
        let wa = ca[(mp + a.l) as usize];
        let wb = cb[(mp + b.l) as usize];
        if wa == 0.0 || wb == 0.0 {
            continue;
        }
        let e = raw_expansion(a.k, a.l, b.k, b.l, mp.abs());
        total += wa * wb * e.evaluate(p, q)?;
    }
    Ok(a.coef * b.coef * scale * total)
}

/// Row m of the real-harmonic rotation into the pair frame.
pub(crate) fn rotation_row(l: i32, m: i32, rot: &[[Real; 3]; 3]) -> Vec<Real> {
    if l == 0 {
        return vec![1.0];
    }
    let dim = (2 * l + 1) as usize;
    let c = real_harmonic_rotation(l as usize, rot);
    let row = (m + l) as usize;
    c[row * dim..(row + 1) * dim].to_vec()
}
