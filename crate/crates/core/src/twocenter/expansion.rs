use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use parking_lot::RwLock;

use crate::mathcore::{aux_a_table, aux_b_table, factorial, legendre_derivative_coeffs};
use crate::{IntegralError, Real};

/// Scaled geometry of a two-center pair: α = ζ₁R, β = ζ₂R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProlateFrame {
    pub r: Real,
    pub alpha: Real,
    pub beta: Real,
}

impl ProlateFrame {
    pub fn new(r: Real, zeta1: Real, zeta2: Real) -> Result<Self, IntegralError> {
        if !(r > 0.0) || !(zeta1 > 0.0) || !(zeta2 > 0.0) {
            return Err(IntegralError::Invalid(format!(
                "prolate frame needs R, ζ₁, ζ₂ > 0 (got {r}, {zeta1}, {zeta2})"
            )));
        }
        Ok(ProlateFrame { r, alpha: zeta1 * r, beta: zeta2 * r })
    }

    /// Argument of the A integrals, (α+β)/2.
    pub fn p(&self) -> Real {
        0.5 * (self.alpha + self.beta)
    }

    /// Argument of the B integrals, (α−β)/2.
    pub fn q(&self) -> Real {
        0.5 * (self.alpha - self.beta)
    }
}

/// s = D Σ Y_ij A_i(p) B_j(q) for one (l₁, l₂, m) block.
///
/// `terms` holds (i, j, Y_ij) with integer Y. D collects 2π, the two
/// harmonic normalizations and 2^{−l₁−l₂}.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapExpansion {
    pub d: Real,
    pub terms: Vec<(u32, u32, i64)>,
}

impl OverlapExpansion {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// D Σ Y_ij A_i(p) B_j(q).
    pub fn evaluate(&self, p: Real, q: Real) -> Result<Real, IntegralError> {
        if self.terms.is_empty() {
            return Ok(0.0);
        }
        let imax = self.terms.iter().map(|t| t.0).max().unwrap_or(0);
        let jmax = self.terms.iter().map(|t| t.1).max().unwrap_or(0);
        let a = aux_a_table(imax, p)?;
        let b = aux_b_table(jmax, q);
        // Sum small terms first; the coefficients alternate in sign.
        let mut parts: Vec<Real> = self
            .terms
            .iter()
            .map(|&(i, j, y)| y as Real * a[i as usize] * b[j as usize])
            .collect();
        parts.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
        Ok(self.d * parts.iter().sum::<Real>())
    }
}

/// Integer expansion for STO pairs (n₁ l₁ m | n₂ l₂ m).
///
/// The m-selection rule is built in: the caller passes the shared |m|.
/// Invalid combinations give an empty expansion.
pub fn binomial_matrix(n1: i32, l1: i32, n2: i32, l2: i32, m: i32) -> Arc<OverlapExpansion> {
    raw_expansion(n1 - 1, l1, n2 - 1, l2, m)
}

type Key = (i32, i32, i32, i32, i32);
static CACHE: LazyLock<RwLock<HashMap<Key, Arc<OverlapExpansion>>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

/// Expansion for primitives r^{k} e^{−ζr} S_{lm}, k ≥ l − 1.
pub fn raw_expansion(k1: i32, l1: i32, k2: i32, l2: i32, m: i32) -> Arc<OverlapExpansion> {
    let key = (k1, l1, k2, l2, m);
    if let Some(e) = CACHE.read().get(&key) {
        return e.clone();
    }
    let e = Arc::new(build(k1, l1, k2, l2, m));
    CACHE.write().insert(key, e.clone());
    e
}

fn build(k1: i32, l1: i32, k2: i32, l2: i32, m: i32) -> OverlapExpansion {
    let empty = OverlapExpansion { d: 0.0, terms: Vec::new() };
    if m < 0 || l1 < 0 || l2 < 0 || m > l1 || m > l2 || k1 < l1 - 1 || k2 < l2 - 1 {
        return empty;
    }
    let d1 = legendre_derivative_coeffs(l1 as u32, m as u32);
    let d2 = legendre_derivative_coeffs(l2 as u32, m as u32);
    let one_plus = Poly2::from_terms(&[(0, 0, 1), (1, 1, 1)]); // 1 + μν
    let minus_one = Poly2::from_terms(&[(0, 0, -1), (1, 1, 1)]); // μν − 1
    let sum = Poly2::from_terms(&[(1, 0, 1), (0, 1, 1)]); // μ + ν
    let diff = Poly2::from_terms(&[(1, 0, 1), (0, 1, -1)]); // μ − ν

    let side = |d: &[i64], k: i32, cos_num: &Poly2, r_lin: &Poly2| {
        // Σ_j d_j (cos numerator)^j (linear)^{k−m−j+1}; the +1 absorbs one
        // factor of the volume element μ² − ν² = (μ+ν)(μ−ν).
        let mut acc = Poly2::zero();
        for (j, &c) in d.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = k - m - j as i32 + 1;
            let t = cos_num.pow(j as u32).mul(&r_lin.pow(e as u32)).scale(c as i128);
            acc = acc.add(&t);
        }
        acc
    };
    let left = side(&d1, k1, &one_plus, &sum);
    let right = side(&d2, k2, &minus_one, &diff);
    let sin_part = Poly2::from_terms(&[(2, 0, 1), (0, 0, -1)])
        .mul(&Poly2::from_terms(&[(0, 0, 1), (0, 2, -1)]))
        .pow(m as u32);
    let poly = left.mul(&right).mul(&sin_part);

    let norm = |l: i32| {
        ((2 * l + 1) as Real / (4.0 * std::f64::consts::PI) * factorial::<Real>((l - m) as u32)
            / factorial::<Real>((l + m) as u32))
        .sqrt()
    };
    let d = 2.0 * std::f64::consts::PI * norm(l1) * norm(l2) / 2f64.powi(l1 + l2);
    let terms = poly
        .terms()
        .into_iter()
        .map(|(i, j, c)| (i, j, i64::try_from(c).expect("overlap coefficient exceeds i64")))
        .collect();
    OverlapExpansion { d, terms }
}

/// Dense bivariate integer polynomial in (μ, ν).
#[derive(Debug, Clone, PartialEq)]
struct Poly2 {
    c: Vec<Vec<i128>>,
}

impl Poly2 {
    fn zero() -> Self {
        Poly2 { c: vec![vec![0]] }
    }

    fn from_terms(t: &[(usize, usize, i128)]) -> Self {
        let di = t.iter().map(|x| x.0).max().unwrap_or(0);
        let dj = t.iter().map(|x| x.1).max().unwrap_or(0);
        let mut c = vec![vec![0; dj + 1]; di + 1];
        for &(i, j, v) in t {
            c[i][j] += v;
        }
        Poly2 { c }
    }

    fn dims(&self) -> (usize, usize) {
        (self.c.len(), self.c[0].len())
    }

    fn add(&self, o: &Poly2) -> Poly2 {
        let (a1, b1) = self.dims();
        let (a2, b2) = o.dims();
        let mut c = vec![vec![0; b1.max(b2)]; a1.max(a2)];
        for (i, row) in self.c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                c[i][j] += v;
            }
        }
        for (i, row) in o.c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                c[i][j] += v;
            }
        }
        Poly2 { c }
    }

    fn mul(&self, o: &Poly2) -> Poly2 {
        let (a1, b1) = self.dims();
        let (a2, b2) = o.dims();
        let mut c = vec![vec![0; b1 + b2 - 1]; a1 + a2 - 1];
        for (i, row) in self.c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                for (k, orow) in o.c.iter().enumerate() {
                    for (l, &w) in orow.iter().enumerate() {
                        c[i + k][j + l] += v * w;
                    }
                }
            }
        }
        Poly2 { c }
    }

    fn pow(&self, e: u32) -> Poly2 {
        let mut acc = Poly2::from_terms(&[(0, 0, 1)]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn scale(&self, s: i128) -> Poly2 {
        Poly2 { c: self.c.iter().map(|r| r.iter().map(|v| v * s).collect()).collect() }
    }

    fn terms(&self) -> Vec<(u32, u32, i128)> {
        let mut out = Vec::new();
        for (i, row) in self.c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    out.push((i as u32, j as u32, v));
                }
            }
        }
        out
    }
}
