use super::function::odd_double_factorial;
use crate::mathcore::{factorial, pochhammer};
use crate::Real;

/// Finite expansion of a Coulomb Sturmian S_{nl} in B-functions B_{t+1,l}.
///
/// `terms` holds the Pochhammer ratios (−n+l+1)_t (n+l+1)_t / (t! (l+3/2)_t)
/// for t = 0 … n−l−1; the β-dependent factor (2β)^{3/2} 2^{2l+1}/(2l+1)!!
/// is kept apart in [`BFunctionExpansion::prefactor`].
#[derive(Debug, Clone, PartialEq)]
pub struct BFunctionExpansion {
    pub n: i32,
    pub l: i32,
    pub terms: Vec<(Real, u32)>,
}

impl BFunctionExpansion {
    pub fn prefactor(&self, beta: Real) -> Real {
        (2.0 * beta).powf(1.5) * 2f64.powi(2 * self.l + 1) / odd_double_factorial(self.l)
    }

    /// Radial part of Σ_t c_t B_{t+1,l}(β, r), prefactor included.
    pub fn radial(&self, beta: Real, r: Real) -> Real {
        let s: Real = self
            .terms
            .iter()
            .map(|&(c, t)| c * b_function_radial(t as i32 + 1, self.l, beta, r))
            .sum();
        self.prefactor(beta) * s
    }
}

/// Coefficients of the Sturmian → B-function expansion, valid for 0 ≤ l < n.
pub fn sturmian_to_bfunctions(n: i32, l: i32) -> BFunctionExpansion {
    let count = (n - l).max(0) as u32;
    let terms = (0..count)
        .map(|t| {
            let num = pochhammer((-n + l + 1) as Real, t) * pochhammer((n + l + 1) as Real, t);
            let den = factorial::<Real>(t) * pochhammer(l as Real + 1.5, t);
            (num / den, t)
        })
        .collect();
    BFunctionExpansion { n, l, terms }
}

/// Radial part of B_{n,l}(ζ, r) = (ζr)^l k̂_{n−1/2}(ζr) / (2^{n+l} (n+l)!).
///
/// k̂ is the reduced modified Bessel function of the second kind,
/// k̂_{n−1/2}(z) = e^{−z} Σ_{j<n} (2n−j−2)! / (j! (n−j−1)!) 2^{j−n+1} z^j.
pub fn b_function_radial(n: i32, l: i32, zeta: Real, r: Real) -> Real {
    let z = zeta * r;
    let mut poly = 0.0;
    for j in (0..n).rev() {
        let c = factorial::<Real>((2 * n - j - 2) as u32)
            / (factorial::<Real>(j as u32) * factorial::<Real>((n - j - 1) as u32))
            * 2f64.powi(j - n + 1);
        poly = poly * z + c;
    }
    let khat = poly * (-z).exp();
    z.powi(l) * khat / (2f64.powi(n + l) * factorial::<Real>((n + l) as u32))
}
