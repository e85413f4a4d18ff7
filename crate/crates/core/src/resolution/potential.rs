//! Laguerre functions h_n and the resolution potentials
//! V_nl(r) = ∫₀^∞ h_n(x) j_l(rx) dx.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use parking_lot::RwLock;

use crate::mathcore::quadrature::{composite_rule, gauss_legendre};
use crate::mathcore::{assoc_laguerre, legendre_p_table, spherical_bessel_j};
use crate::{MathError, Real};

const SQRT2: Real = std::f64::consts::SQRT_2;
const HALF_PI: Real = std::f64::consts::FRAC_PI_2;

/// h_n(x) = √2 L_n(2x) e^{−x}, orthonormal on [0, ∞).
pub fn h_fn(n: u32, x: Real) -> Real {
    let l = assoc_laguerre(n as i32, 0.0, 2.0 * x).expect("n ≥ 0");
    SQRT2 * l * (-x).exp()
}

/// V_n0(r) in closed form, r ≥ 0.
pub fn potential_v0(n: u32, r: Real) -> Real {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    if r < 1e-4 {
        // V_n0(r) = √2 (−1)^n [1 − c r² + …] from the series of j₀;
        // c = ∫ h̃_n x² /6 with the alternating Laguerre moments
        let (m2, m4) = laguerre_moments(n);
        return SQRT2 * sign * (1.0 - m2 * r * r / 6.0 + m4 * r.powi(4) / 120.0);
    }
    let th = r.atan();
    let (s2, c2) = (2.0 * th).sin_cos();
    // Σ_{k=1}^n (−1)^k sin(2kθ)/k by the Chebyshev recurrence for sin(2kθ)
    let mut sum = th;
    let (mut s_prev, mut s_cur) = (0.0, s2);
    for k in 1..=n {
        let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign_k * s_cur / k as Real;
        let next = 2.0 * c2 * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = next;
    }
    SQRT2 * sum / r
}

/// (−1)^n ∫ L_n(2x) e^{−x} x^k dx for k = 2, 4, from the Laplace transform.
fn laguerre_moments(n: u32) -> (Real, Real) {
    // ∫ L_n(2x) x^k e^{−x} dx = k! Σ_j C(n,j)(−2)^j C(j+k,k)
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    let mut c = 1.0;
    for j in 0..=n {
        let jj = j as Real;
        let p = (-2.0f64).powi(j as i32) * c;
        m2 += p * 2.0 * (jj + 2.0) * (jj + 1.0) / 2.0;
        m4 += p * 24.0 * (jj + 4.0) * (jj + 3.0) * (jj + 2.0) * (jj + 1.0) / 24.0;
        c = c * (n - j) as Real / (jj + 1.0);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    (sign * m2, sign * m4)
}

/// V_nl(r) from the defining integral, integrated between consecutive zeros
/// of the Bessel factor.
///
/// The e^{−x} factor of h_n makes the tail decay exponentially, so the
/// panel sum stops once both the remaining weight bound and the last few
/// panel contributions fall below the tolerance.
pub fn potential_v_hankel(n: u32, l: u32, r: Real) -> Result<Real, MathError> {
    if r < 0.0 || !r.is_finite() {
        return Err(MathError::domain("potential_v", format!("r = {r} must be ≥ 0")));
    }
    if r == 0.0 {
        if l > 0 {
            return Ok(0.0);
        }
        return Ok(SQRT2 * if n.is_multiple_of(2) { 1.0 } else { -1.0 });
    }
    let rule = gauss_legendre(24);
    let width = (std::f64::consts::PI / r).min(0.5);
    // panel edges follow the large-argument zeros of j_l(rx)
    let shift = 0.5 * l as Real * std::f64::consts::PI / r;
    let mut a = 0.0;
    let mut b = if shift > 0.0 && shift < 4.0 * width { shift + width } else { width };
    let mut total = 0.0;
    let mut small = 0;
    for _ in 0..2_000_000 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        let mut s = 0.0;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let x = c + h * t;
            s += w * h_fn(n, x) * spherical_bessel_j(l, r * x);
        }
        s *= h;
        total += s;
        // |h_n(x)| ≤ √2 e^{−x} Σ_k C(n,k) (2x)^k / k!
        let bound = SQRT2 * (-b).exp() * (1.0 + 2.0 * b).powi(n as i32) * 2.0;
        if s.abs() < 1e-17 && bound < 1e-17 {
            small += 1;
            if small >= 3 {
                return Ok(total);
            }
        } else {
            small = 0;
        }
        a = b;
        b += width;
    }
    Err(MathError::NoConvergence { value: total, error: Real::NAN, subdivisions: 2_000_000 })
}

/// V_nl(r). Closed form for l = 0, the Hankel integral otherwise.
pub fn potential_v(n: u32, l: u32, r: Real) -> Result<Real, MathError> {
    if r < 0.0 || !r.is_finite() {
        return Err(MathError::domain("potential_v", format!("r = {r} must be ≥ 0")));
    }
    if l == 0 {
        return Ok(potential_v0(n, r));
    }
    potential_v_hankel(n, l, r)
}

/// All V_nl(r), n ≤ n_max, l ≤ l_max, from the finite angle integral
///
///   V_nl(r) = s_l √2 (−1)^n / r ∫₀^{atan r} P_l(tan θ / r) T((2n+1)θ) / cos θ dθ
///
/// with T = cos, s_l = (−1)^{l/2} for even l and T = sin,
/// s_l = (−1)^{(l−1)/2} for odd l. It follows from the plane-wave form of
/// j_l and the Laplace transform of L_n. Output is indexed `l * (n_max+1) + n`.
pub fn potential_v_all(n_max: u32, l_max: u32, r: Real) -> Vec<Real> {
    let nn = n_max as usize + 1;
    let mut out = vec![0.0; nn * (l_max as usize + 1)];
    if r == 0.0 {
        for (n, v) in out.iter_mut().take(nn).enumerate() {
            *v = SQRT2 * if n % 2 == 0 { 1.0 } else { -1.0 };
        }
        return out;
    }
    let big = r.atan();
    let (nodes, weights) = angle_rule(big, r, n_max);
    for (th, w) in nodes.iter().zip(&weights) {
        let (s1, c1) = th.sin_cos();
        let t = s1 / c1 / r;
        let p = legendre_p_table(l_max as usize, t);
        let (s2, c2) = (2.0 * th).sin_cos();
        let (mut sn, mut cn) = (s1, c1);
        let base = w / c1;
        for n in 0..nn {
            for l in 0..=l_max as usize {
                let trig = if l % 2 == 0 { cn } else { sn };
                out[l * nn + n] += base * p[l] * trig;
            }
            let next_c = cn * c2 - sn * s2;
            sn = sn * c2 + cn * s2;
            cn = next_c;
        }
    }
    for l in 0..=l_max as usize {
        let sl = if (l / 2) % 2 == 0 { 1.0 } else { -1.0 };
        for n in 0..nn {
            let sn = if n % 2 == 0 { 1.0 } else { -1.0 };
            out[l * nn + n] *= sl * sn * SQRT2 / r;
        }
    }
    out
}

/// Composite Gauss rule on [0, Θ], graded toward Θ where 1/cos θ and
/// tanˡθ vary on the scale cos Θ, with panels short enough for the
/// oscillation of (2n_max + 1)θ.
fn angle_rule(big: Real, r: Real, n_max: u32) -> (Vec<Real>, Vec<Real>) {
    let max_width = 2.5 / (2 * n_max + 1) as Real;
    let cos_big = 1.0 / (1.0 + r * r).sqrt();
    let mut gaps = vec![0.0];
    let mut g = (0.5 * cos_big).min(max_width);
    while g < big {
        gaps.push(g);
        let step = (g * 1.5).min(max_width);
        g += step;
    }
    gaps.push(big);
    let mut edges: Vec<Real> = gaps.iter().rev().map(|g| big - g).collect();
    edges[0] = 0.0;
    composite_rule(&edges, 12)
}

/// Piecewise Chebyshev interpolant of all V_nl in the variable Θ = atan r.
///
/// Each V_nl is analytic in Θ on [0, π/2], including the r → ∞ end where it
/// decays as cot^{l+1} Θ, so fixed panels give uniform accuracy.
#[derive(Debug)]
pub struct VTable {
    pub n_max: u32,
    pub l_max: u32,
    panels: usize,
    coef: Vec<Real>,
}

const TABLE_PANELS: usize = 96;
const TABLE_DEGREE: usize = 16;

static TABLES: LazyLock<RwLock<HashMap<(u32, u32), Arc<VTable>>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

impl VTable {
    /// Shared table for the given truncation.
    pub fn get(n_max: u32, l_max: u32) -> Arc<VTable> {
        if let Some(t) = TABLES.read().get(&(n_max, l_max)) {
            return t.clone();
        }
        let t = Arc::new(VTable::build(n_max, l_max));
        TABLES.write().entry((n_max, l_max)).or_insert(t).clone()
    }

    fn build(n_max: u32, l_max: u32) -> Self {
        let nf = ((n_max + 1) * (l_max + 1)) as usize;
        let d = TABLE_DEGREE;
        let width = HALF_PI / TABLE_PANELS as Real;
        let mut coef = vec![0.0; TABLE_PANELS * nf * (d + 1)];
        let xs: Vec<Real> = (0..=d)
            .map(|k| ((2 * k + 1) as Real * std::f64::consts::PI / (2 * (d + 1)) as Real).cos())
            .collect();
        for p in 0..TABLE_PANELS {
            let vals: Vec<Vec<Real>> = xs
                .iter()
                .map(|x| {
                    let th = width * (p as Real + 0.5 * (1.0 + x));
                    potential_v_all(n_max, l_max, th.tan())
                })
                .collect();
            for f in 0..nf {
                for j in 0..=d {
                    let mut c = 0.0;
                    for (k, x) in xs.iter().enumerate() {
                        c += vals[k][f] * cheb(j, *x);
                    }
                    let norm = if j == 0 { 1.0 } else { 2.0 };
                    coef[(p * nf + f) * (d + 1) + j] = norm * c / (d + 1) as Real;
                }
            }
        }
        VTable { n_max, l_max, panels: TABLE_PANELS, coef }
    }

    /// Number of tabulated functions, (n_max+1)(l_max+1).
    pub fn len(&self) -> usize {
        ((self.n_max + 1) * (self.l_max + 1)) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes V_nl(r) into `out[l * (n_max+1) + n]`.
    pub fn eval_into(&self, r: Real, out: &mut [Real]) {
        let d = TABLE_DEGREE;
        let nf = self.len();
        let th = r.atan();
        let width = HALF_PI / self.panels as Real;
        let p = ((th / width) as usize).min(self.panels - 1);
        let x = 2.0 * (th / width - p as Real) - 1.0;
        let mut t = [0.0; TABLE_DEGREE + 1];
        t[0] = 1.0;
        t[1] = x;
        for k in 2..=d {
            t[k] = 2.0 * x * t[k - 1] - t[k - 2];
        }
        let block = &self.coef[p * nf * (d + 1)..(p + 1) * nf * (d + 1)];
        for (f, o) in out.iter_mut().enumerate().take(nf) {
            let c = &block[f * (d + 1)..(f + 1) * (d + 1)];
            let mut s = 0.0;
            for k in 0..=d {
                s += c[k] * t[k];
            }
            *o = s;
        }
    }
}

fn cheb(j: usize, x: Real) -> Real {
    (j as Real * x.acos()).cos()
}
