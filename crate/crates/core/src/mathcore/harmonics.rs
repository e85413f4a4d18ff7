use std::collections::HashMap;
use std::sync::LazyLock;

use num_complex::Complex;
use parking_lot::RwLock;

use super::polynomial::assoc_legendre;
use super::quadrature::gauss_legendre;
use super::special::factorial;
use super::Scalar;
use crate::MathError;

/// Complex spherical harmonic Yₗᵐ(θ, φ) with the Condon–Shortley phase.
pub fn spherical_harmonic<T: Scalar>(l: i32, m: i32, theta: T, phi: T) -> Result<Complex<T>, MathError> {
    if l < 0 || m.abs() > l {
        return Err(MathError::domain("spherical_harmonic", format!("invalid (l, m) = ({l}, {m})")));
    }
    let am = m.abs();
    let norm = (T::int(2 * l as i64 + 1) / (T::lit(4.0) * T::PI()) * factorial::<T>((l - am) as u32)
        / factorial::<T>((l + am) as u32))
    .sqrt();
    let p = assoc_legendre(l, am, theta.cos())?;
    let (s, c) = (T::int(am as i64) * phi).sin_cos();
    let y = Complex::new(norm * p * c, norm * p * s);
    if m >= 0 {
        Ok(y)
    } else if am % 2 == 0 {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

/// Real spherical harmonic Sₗₘ(θ, φ).
///
/// S_{l0} = Y_l⁰; for m > 0, S_{lm} = √2 (−1)^m Re Yₗᵐ ∝ cos mφ and
/// S_{l,−m} = √2 (−1)^m Im Yₗᵐ ∝ sin mφ.
pub fn real_spherical_harmonic(l: i32, m: i32, theta: f64, phi: f64) -> Result<f64, MathError> {
    let y = spherical_harmonic(l, m.abs(), theta, phi)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(match m.cmp(&0) {
        std::cmp::Ordering::Equal => y.re,
        std::cmp::Ordering::Greater => std::f64::consts::SQRT_2 * sign * y.re,
        std::cmp::Ordering::Less => std::f64::consts::SQRT_2 * sign * y.im,
    })
}

/// All real harmonics S_{lm}(û) for l ≤ lmax at a unit vector, indexed l² + l + m.
pub fn real_harmonics_unit(lmax: usize, u: [f64; 3]) -> Vec<f64> {
    let h = RealHarmonics::new(lmax);
    let mut out = vec![0.0; h.len()];
    h.eval(u, &mut out);
    out
}

/// Real harmonics up to a fixed order with the normalization constants
/// precomputed, for evaluation in inner loops.
#[derive(Debug, Clone)]
pub struct RealHarmonics {
    lmax: usize,
    // √((2l+1)/4π (l−m)!/(l+m)!) · (2m−1)!!, times √2 for m > 0
    norm: Vec<f64>,
}

impl RealHarmonics {
    pub fn new(lmax: usize) -> Self {
        let mut norm = vec![0.0; (lmax + 1) * (lmax + 1)];
        let inv4pi = 1.0 / (4.0 * std::f64::consts::PI);
        for l in 0..=lmax {
            for m in 0..=l {
                let mut n = ((2 * l + 1) as f64 * inv4pi * factorial::<f64>((l - m) as u32)
                    / factorial::<f64>((l + m) as u32))
                .sqrt();
                if m > 0 {
                    n *= std::f64::consts::SQRT_2;
                }
                norm[l * l + l + m] = n;
            }
        }
        RealHarmonics { lmax, norm }
    }

    pub fn len(&self) -> usize {
        (self.lmax + 1) * (self.lmax + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes S_{lm}(û) into `out[l² + l + m]`.
    pub fn eval(&self, u: [f64; 3], out: &mut [f64]) {
        let lmax = self.lmax;
        let [x, y, z] = u;
        // Re/Im of (x + iy)^m
        let mut cm = 1.0;
        let mut sm = 0.0;
        // (2m−1)!! accumulated with the m loop
        let mut pmm = 1.0;
        for m in 0..=lmax {
            if m > 0 {
                let c = cm * x - sm * y;
                sm = sm * x + cm * y;
                cm = c;
                pmm *= (2 * m - 1) as f64;
            }
            // p_l = P_l^m(z) / sin^m θ without the Condon–Shortley phase
            let mut p_prev = 0.0;
            let mut p_cur = pmm;
            for l in m..=lmax {
                if l == m + 1 {
                    p_prev = p_cur;
                    p_cur = z * (2 * m + 1) as f64 * pmm;
                } else if l > m + 1 {
                    let next = ((2 * l - 1) as f64 * z * p_cur - (l + m - 1) as f64 * p_prev) / (l - m) as f64;
                    p_prev = p_cur;
                    p_cur = next;
                }
                let base = l * l + l;
                let f = self.norm[base + m] * p_cur;
                if m == 0 {
                    out[base] = f;
                } else {
                    out[base + m] = f * cm;
                    out[base - m] = f * sm;
                }
            }
        }
    }
}

/// Index set of a Gaunt coefficient ∫ Y_{l1}^{m1*} Y_L^M Y_{lam}^{mu} dΩ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GauntKey {
    pub l1: i32,
    pub m1: i32,
    pub big_l: i32,
    pub big_m: i32,
    pub lam: i32,
    pub mu: i32,
}

impl GauntKey {
    pub fn new(l1: i32, m1: i32, big_l: i32, big_m: i32, lam: i32, mu: i32) -> Self {
        GauntKey { l1, m1, big_l, big_m, lam, mu }
    }

    fn validate(&self) -> Result<(), MathError> {
        let ok = |l: i32, m: i32| l >= 0 && m.abs() <= l;
        if ok(self.l1, self.m1) && ok(self.big_l, self.big_m) && ok(self.lam, self.mu) {
            Ok(())
        } else {
            Err(MathError::domain("gaunt", format!("invalid key {self:?}")))
        }
    }

    fn selection_allows(&self) -> bool {
        let (a, b, c) = (self.l1, self.big_l, self.lam);
        self.mu == self.m1 - self.big_m
            && c >= (a - b).abs()
            && c <= a + b
            && (a + b + c) % 2 == 0
    }
}

static GAUNT_CACHE: LazyLock<RwLock<HashMap<GauntKey, f64>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

/// Gaunt coefficient ∫ Y_{l1}^{m1*} Y_L^M Y_{lam}^{mu} dΩ (plain triple integral).
///
/// Exactly zero when a selection rule fails; otherwise a sphere quadrature
/// that is exact for the band-limited integrand (Gauss–Legendre in cos θ,
/// uniform in φ). Results are cached.
pub fn gaunt(key: GauntKey) -> Result<f64, MathError> {
    key.validate()?;
    if !key.selection_allows() {
        return Ok(0.0);
    }
    if let Some(&v) = GAUNT_CACHE.read().get(&key) {
        return Ok(v);
    }
    let deg = (key.l1 + key.big_l + key.lam) as usize;
    let nt = deg / 2 + 2;
    let np = deg + 2;
    let rule = gauss_legendre(nt);
    let mut acc = Complex::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let th = x.acos();
        for k in 0..np {
            let ph = 2.0 * std::f64::consts::PI * k as f64 / np as f64;
            let a = spherical_harmonic(key.l1, key.m1, th, ph)?.conj();
            let b = spherical_harmonic(key.big_l, key.big_m, th, ph)?;
            let c = spherical_harmonic(key.lam, key.mu, th, ph)?;
            acc += a * b * c * *w;
        }
    }
    let v = acc.re * 2.0 * std::f64::consts::PI / np as f64;
    GAUNT_CACHE.write().insert(key, v);
    Ok(v)
}

/// Wigner 3j symbol by the Racah formula.
pub fn wigner_3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0
        || j3 < (j1 - j2).abs()
        || j3 > j1 + j2
        || m1.abs() > j1
        || m2.abs() > j2
        || m3.abs() > j3
    {
        return 0.0;
    }
    let f = |n: i32| factorial::<f64>(n as u32);
    let tri = f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3) / f(j1 + j2 + j3 + 1);
    let pre = (tri
        * f(j1 + m1)
        * f(j1 - m1)
        * f(j2 + m2)
        * f(j2 - m2)
        * f(j3 + m3)
        * f(j3 - m3))
        .sqrt();
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let term = 1.0
            / (f(k)
                * f(j1 + j2 - j3 - k)
                * f(j1 - m1 - k)
                * f(j2 + m2 - k)
                * f(j3 - j2 + m1 + k)
                * f(j3 - j1 - m2 + k));
        sum += if k % 2 == 0 { term } else { -term };
    }
    let phase = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * pre * sum
}

/// Closed-form Gaunt coefficient from Wigner 3j symbols (same convention as [`gaunt`]).
pub fn gaunt_3j(key: GauntKey) -> f64 {
    if !key.selection_allows() {
        return 0.0;
    }
    let GauntKey { l1, m1, big_l, big_m, lam, mu } = key;
    let pre = ((2 * l1 + 1) as f64 * (2 * big_l + 1) as f64 * (2 * lam + 1) as f64
        / (4.0 * std::f64::consts::PI))
        .sqrt();
    let sign = if m1 % 2 == 0 { 1.0 } else { -1.0 };
    sign * pre * wigner_3j(l1, big_l, lam, 0, 0, 0) * wigner_3j(l1, big_l, lam, -m1, big_m, mu)
}

static REAL_GAUNT_CACHE: LazyLock<RwLock<HashMap<[i32; 6], f64>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// ∫ S_{l1 m1} S_{l2 m2} S_{l3 m3} dΩ over real harmonics (exact sphere quadrature, cached).
pub fn real_gaunt(l1: i32, m1: i32, l2: i32, m2: i32, l3: i32, m3: i32) -> Result<f64, MathError> {
    let key = [l1, m1, l2, m2, l3, m3];
    for (l, m) in [(l1, m1), (l2, m2), (l3, m3)] {
        if l < 0 || m.abs() > l {
            return Err(MathError::domain("real_gaunt", format!("invalid (l, m) = ({l}, {m})")));
        }
    }
    if (l1 + l2 + l3) % 2 == 1 || l3 > l1 + l2 || l3 < (l1 - l2).abs() {
        return Ok(0.0);
    }
    if let Some(&v) = REAL_GAUNT_CACHE.read().get(&key) {
        return Ok(v);
    }
    let deg = (l1 + l2 + l3) as usize;
    let nt = deg / 2 + 2;
    let np = deg + 2;
    let rule = gauss_legendre(nt);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let th = x.acos();
        for k in 0..np {
            let ph = 2.0 * std::f64::consts::PI * k as f64 / np as f64;
            acc += w
                * real_spherical_harmonic(l1, m1, th, ph)?
                * real_spherical_harmonic(l2, m2, th, ph)?
                * real_spherical_harmonic(l3, m3, th, ph)?;
        }
    }
    let mut v = acc * 2.0 * std::f64::consts::PI / np as f64;
    if v.abs() < 1e-15 {
        v = 0.0;
    }
    REAL_GAUNT_CACHE.write().insert(key, v);
    Ok(v)
}

/// Rotation of real harmonics of order `l` under the orthogonal map `rot`.
///
/// Returns c (row-major, (2l+1)²) with S_{lm}(rot·û) = Σ_{m'} c[m][m'] S_{lm'}(û),
/// projected with a sphere rule that is exact for degree-2l integrands.
pub fn real_harmonic_rotation(l: usize, rot: &[[f64; 3]; 3]) -> Vec<f64> {
    let dim = 2 * l + 1;
    let nt = l + 2;
    let np = 2 * l + 2;
    let rule = gauss_legendre(nt);
    let base = l * l;
    let mut c = vec![0.0; dim * dim];
    let dphi = 2.0 * std::f64::consts::PI / np as f64;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let s = (1.0 - x * x).max(0.0).sqrt();
        for k in 0..np {
            let (sp, cp) = (k as f64 * dphi).sin_cos();
            let u = [s * cp, s * sp, *x];
            let v = [
                rot[0][0] * u[0] + rot[0][1] * u[1] + rot[0][2] * u[2],
                rot[1][0] * u[0] + rot[1][1] * u[1] + rot[1][2] * u[2],
                rot[2][0] * u[0] + rot[2][1] * u[1] + rot[2][2] * u[2],
            ];
            let su = real_harmonics_unit(l, u);
            let sv = real_harmonics_unit(l, v);
            for a in 0..dim {
                for b in 0..dim {
                    c[a * dim + b] += w * dphi * sv[base + a] * su[base + b];
                }
            }
        }
    }
    for v in c.iter_mut() {
        if v.abs() < 1e-15 {
            *v = 0.0;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rotation_reproduces_rotated_harmonics() {
        let (a, b) = (0.7f64, -0.4f64);
        let rot = [
            [a.cos(), -a.sin() * b.cos(), a.sin() * b.sin()],
            [a.sin(), a.cos() * b.cos(), -a.cos() * b.sin()],
            [0.0, b.sin(), b.cos()],
        ];
        let u = [0.3f64, -0.5, 0.81];
        let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        let u = [u[0] / n, u[1] / n, u[2] / n];
        let v = [0, 1, 2].map(|i| rot[i][0] * u[0] + rot[i][1] * u[1] + rot[i][2] * u[2]);
        for l in 0..=4usize {
            let c = real_harmonic_rotation(l, &rot);
            let su = real_harmonics_unit(l, u);
            let sv = real_harmonics_unit(l, v);
            let dim = 2 * l + 1;
            for a in 0..dim {
                let lhs: f64 = (0..dim).map(|b| c[a * dim + b] * su[l * l + b]).sum();
                assert_relative_eq!(lhs, sv[l * l + a], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn harmonic_examples() {
        let y = spherical_harmonic(0, 0, 0.4f64, 1.1).unwrap();
        assert_relative_eq!(y.re, 0.282_094_791_773_878_14, max_relative = 1e-15);
        let y = spherical_harmonic(1, 0, 0.0f64, 2.0).unwrap();
        assert_relative_eq!(y.re, 0.488_602_511_902_919_9, max_relative = 1e-15);
        let s: f64 = (-1..=1)
            .map(|m| spherical_harmonic(1, m, 0.7f64, 1.3).unwrap().norm_sqr())
            .sum();
        assert_relative_eq!(s, 3.0 / (4.0 * std::f64::consts::PI), max_relative = 1e-14);
        assert!(spherical_harmonic(1, 2, 0.1f64, 0.1).is_err());
    }

    #[test]
    fn real_harmonics_table_matches_pointwise() {
        let (th, ph) = (0.9f64, -2.2f64);
        let u = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        let tab = real_harmonics_unit(5, u);
        for l in 0..=5i32 {
            for m in -l..=l {
                let v = real_spherical_harmonic(l, m, th, ph).unwrap();
                assert_relative_eq!(tab[(l * l + l + m) as usize], v, max_relative = 1e-12, epsilon = 1e-14);
            }
        }
        // S_11 ∝ x
        let t = real_harmonics_unit(1, [1.0, 0.0, 0.0]);
        assert!(t[3] > 0.0);
    }

    #[test]
    fn gaunt_selection_and_values() {
        assert_eq!(gaunt(GauntKey::new(1, 0, 1, 1, 1, 0)).unwrap(), 0.0);
        let g000 = gaunt(GauntKey::new(0, 0, 0, 0, 0, 0)).unwrap();
        assert_relative_eq!(g000, 1.0 / (4.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-14);
        for key in [
            GauntKey::new(1, 0, 1, 0, 2, 0),
            GauntKey::new(2, 1, 1, 1, 1, 0),
            GauntKey::new(3, -2, 2, -1, 3, -1),
            GauntKey::new(4, 3, 3, 2, 3, 1),
        ] {
            assert_relative_eq!(gaunt(key).unwrap(), gaunt_3j(key), max_relative = 1e-12, epsilon = 1e-15);
        }
    }
}
