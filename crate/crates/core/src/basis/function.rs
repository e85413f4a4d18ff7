use std::fmt;

use crate::mathcore::{assoc_laguerre, double_factorial, factorial, real_spherical_harmonic, spherical_harmonic};
use crate::{BasisError, Complex, Real, Vec3};

/// Radial family of an exponential-type orbital.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitalKind {
    /// Slater-type orbital N r^{n−1} e^{−ζr}.
    Sto,
    /// Coulomb Sturmian with screening parameter β (stored in `zeta`).
    Sturmian,
    /// Generalized exponential function with integer α ≤ 1.
    GeneralizedEto(i32),
}

impl fmt::Display for OrbitalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitalKind::Sto => write!(f, "sto"),
            OrbitalKind::Sturmian => write!(f, "sturmian"),
            OrbitalKind::GeneralizedEto(a) => write!(f, "eto({a})"),
        }
    }
}

/// One basis function χ_{nlm}(ζ) attached to a center.
///
/// Angular parts are complex spherical harmonics Y_l^m with the
/// Condon–Shortley phase. The integral engines use the real combinations
/// instead; [`BasisFunction::evaluate_real`] gives that form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction {
    pub kind: OrbitalKind,
    pub n: i32,
    pub l: i32,
    pub m: i32,
    /// Orbital exponent ζ, or β for Sturmians.
    pub zeta: Real,
    pub center_index: usize,
}

impl BasisFunction {
    pub fn new(kind: OrbitalKind, n: i32, l: i32, m: i32, zeta: Real, center_index: usize) -> Result<Self, BasisError> {
        let bf = BasisFunction { kind, n, l, m, zeta, center_index };
        bf.validate()?;
        Ok(bf)
    }

    pub fn sto(n: i32, l: i32, m: i32, zeta: Real, center_index: usize) -> Result<Self, BasisError> {
        Self::new(OrbitalKind::Sto, n, l, m, zeta, center_index)
    }

    pub fn sturmian(n: i32, l: i32, m: i32, beta: Real, center_index: usize) -> Result<Self, BasisError> {
        Self::new(OrbitalKind::Sturmian, n, l, m, beta, center_index)
    }

    /// Hydrogen-like orbital for nuclear charge `z`: a Sturmian with β = z/n.
    pub fn hydrogen_like(n: i32, l: i32, m: i32, z: Real, center_index: usize) -> Result<Self, BasisError> {
        Self::sturmian(n, l, m, z / n as Real, center_index)
    }

    pub fn validate(&self) -> Result<(), BasisError> {
        let bad = |msg: String| Err(BasisError::Quantum(msg));
        if self.n < 1 {
            return bad(format!("n = {} must be ≥ 1", self.n));
        }
        if self.l < 0 || self.l >= self.n {
            return bad(format!("l = {} must satisfy 0 ≤ l ≤ n−1 = {}", self.l, self.n - 1));
        }
        if self.m.abs() > self.l {
            return bad(format!("|m| = {} exceeds l = {}", self.m.abs(), self.l));
        }
        if !(self.zeta > 0.0) || !self.zeta.is_finite() {
            return bad(format!("exponent {} must be positive and finite", self.zeta));
        }
        if let OrbitalKind::GeneralizedEto(alpha) = self.kind {
            if alpha > 1 {
                return bad(format!("alpha = {alpha} must be ≤ 1"));
            }
            if self.n - self.l - 1 - alpha < 0 {
                return bad(format!(
                    "Laguerre degree n−l−1−alpha = {} is negative",
                    self.n - self.l - 1 - alpha
                ));
            }
        }
        Ok(())
    }

    /// Degree of the Laguerre factor, and hence the number of radial nodes.
    pub fn laguerre_degree(&self) -> i32 {
        match self.kind {
            OrbitalKind::Sto => 0,
            OrbitalKind::Sturmian => self.n - self.l - 1,
            OrbitalKind::GeneralizedEto(alpha) => self.n - self.l - 1 - alpha,
        }
    }

    /// Radial normalization constant N.
    ///
    /// STOs are L²-normalized. Sturmians satisfy ∫|S|² r⁻¹ d³r = 1 (full
    /// measure, 1/r weight). Generalized functions carry the Sturmian
    /// constant times [−1/√(2n)]^α.
    pub fn normalization(&self) -> Real {
        let n = self.n;
        let l = self.l;
        let z = self.zeta;
        match self.kind {
            OrbitalKind::Sto => (2.0 * z).powf(n as Real + 0.5) / factorial::<Real>((2 * n) as u32).sqrt(),
            OrbitalKind::Sturmian => sturmian_norm(n, l, z),
            OrbitalKind::GeneralizedEto(alpha) => {
                let base = -1.0 / (2.0 * n as Real).sqrt();
                base.powi(alpha) * sturmian_norm(n, l, z)
            }
        }
    }

    /// Normalized radial factor R(r).
    pub fn radial(&self, r: Real) -> Real {
        let nrm = self.normalization();
        let z = self.zeta;
        match self.kind {
            OrbitalKind::Sto => nrm * r.powi(self.n - 1) * (-z * r).exp(),
            OrbitalKind::Sturmian | OrbitalKind::GeneralizedEto(_) => {
                let alpha = match self.kind {
                    OrbitalKind::GeneralizedEto(a) => a,
                    _ => 1,
                };
                let p = (2 * self.l + 2 - alpha) as Real;
                let lag = assoc_laguerre(self.laguerre_degree(), p, 2.0 * z * r).expect("validated degree");
                nrm * lag * r.powi(self.l) * (-z * r).exp()
            }
        }
    }

    /// Value at `point` for a function centered at `center`.
    pub fn evaluate(&self, center: &Vec3, point: &Vec3) -> Complex {
        let d = point - center;
        let r = d.norm();
        if r == 0.0 {
            if self.l > 0 {
                return Complex::new(0.0, 0.0);
            }
            return Complex::new(self.radial(0.0) * Y00, 0.0);
        }
        let (theta, phi) = crate::geometry::angles(&d);
        let y = spherical_harmonic(self.l, self.m, theta, phi).expect("validated l, m");
        y * self.radial(r)
    }

    /// Value with the real spherical harmonic S_lm in place of Y_l^m.
    pub fn evaluate_real(&self, center: &Vec3, point: &Vec3) -> Real {
        let d = point - center;
        let r = d.norm();
        if r == 0.0 {
            return if self.l > 0 { 0.0 } else { self.radial(0.0) * Y00 };
        }
        let (theta, phi) = crate::geometry::angles(&d);
        real_spherical_harmonic(self.l, self.m, theta, phi).expect("validated l, m") * self.radial(r)
    }
}

/// Y_0^0 = 1/√(4π).
const Y00: Real = 0.282_094_791_773_878_14;

fn sturmian_norm(n: i32, l: i32, beta: Real) -> Real {
    let ratio = factorial::<Real>((n - l - 1) as u32) / factorial::<Real>((n + l) as u32);
    (2.0 * beta).powi(l + 1) * ratio.sqrt()
}

/// (2l+1)!! as a real, shared with the B-function expansion.
pub(crate) fn odd_double_factorial(l: i32) -> Real {
    double_factorial::<Real>(2 * l + 1)
}
