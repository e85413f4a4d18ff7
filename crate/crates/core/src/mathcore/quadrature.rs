//! Gauss rules and adaptive Gauss–Kronrod integration.
//!
//! The adaptive engine is the reference oracle for tests and the fallback
//! for integrals without a closed form. Non-convergence is always reported
//! through [`QuadResult::converged`], never hidden.

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use parking_lot::RwLock;

use super::Scalar;
use crate::MathError;

/// Integration domain of [`quad`].
///
/// Integrands receive the domain coordinates and the plain measure is used;
/// any Jacobian (e.g. r² sin θ) belongs to the integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// [a, b].
    Interval { a: f64, b: f64 },
    /// [a, ∞).
    SemiInfinite { a: f64 },
    /// μ ∈ [1, ∞), ν ∈ [−1, 1]; integrand gets `[mu, nu]`.
    Prolate,
    /// r ∈ [0, ∞), θ ∈ [0, π], φ ∈ [0, 2π); integrand gets `[r, theta, phi]`.
    Spherical,
}

/// Tolerances and domain for [`quad`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub domain: Domain,
}

impl QuadratureSpec {
    pub fn new(domain: Domain) -> Self {
        QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            domain,
        }
    }

    pub fn tol(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    fn validate(&self) -> Result<(), MathError> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(MathError::domain("quad", "tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(MathError::domain("quad", "max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub err_estimate: T,
    pub converged: bool,
    pub evaluations: usize,
}

impl<T: Scalar> QuadResult<T> {
    /// The value, or an error if the tolerance was not met.
    pub fn checked(self) -> Result<T, MathError> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(MathError::NoConvergence {
                value: self.value.to_f64().unwrap_or(f64::NAN),
                error: self.err_estimate.to_f64().unwrap_or(f64::NAN),
                subdivisions: self.evaluations / 15,
            })
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut resk = fc * T::lit(WGK[7]);
    let mut resg = fc * T::lit(WG[3]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + T::lit(WGK[j]) * (f1 + f2);
        resabs = resabs + T::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg = resg + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = resk * half;
    let mut resasc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        resasc = resasc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * h;
    let resasc = resasc * h.abs();
    let resabs = resabs * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != T::zero() && err != T::zero() {
        let r = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = resasc * if r < T::one() { r } else { T::one() };
    }
    let floor = T::lit(50.0) * T::epsilon() * resabs;
    if floor > err {
        err = floor;
    }
    (result, err)
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over [a, b].
pub fn integrate<T: Scalar, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> QuadResult<T> {
    let (v0, e0) = gk15(&mut f, a, b);
    let mut segs: Vec<(T, T, T, T)> = vec![(a, b, v0, e0)];
    let mut evaluations = 15;
    let tol = |v: T| T::lit(abs_tol).max(T::lit(rel_tol) * v.abs());
    loop {
        let (value, err) = segs
            .iter()
            .fold((T::zero(), T::zero()), |(v, e), s| (v + s.2, e + s.3));
        if err <= tol(value) {
            return QuadResult {
                value,
                err_estimate: err,
                converged: true,
                evaluations,
            };
        }
        if segs.len() >= max_subdivisions {
            return QuadResult {
                value,
                err_estimate: err,
                converged: false,
                evaluations,
            };
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .fold((0, -T::one()), |acc, (i, s)| if s.3 > acc.1 { (i, s.3) } else { acc });
        let (sa, sb, _, _) = segs.swap_remove(idx);
        let mid = T::lit(0.5) * (sa + sb);
        if !(mid > sa && mid < sb) {
            // interval collapsed to machine resolution
            let (value, err) = segs
                .iter()
                .fold((T::zero(), T::zero()), |(v, e), s| (v + s.2, e + s.3));
            return QuadResult {
                value,
                err_estimate: err,
                converged: false,
                evaluations,
            };
        }
        let (v1, e1) = gk15(&mut f, sa, mid);
        let (v2, e2) = gk15(&mut f, mid, sb);
        evaluations += 30;
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
    }
}

/// Adaptive integration over [a, ∞) through t = a + u/(1−u).
pub fn integrate_semi_infinite<T: Scalar, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> QuadResult<T> {
    let g = move |u: T| {
        let w = T::one() - u;
        let t = a + u / w;
        let v = f(t);
        if v == T::zero() {
            T::zero()
        } else {
            v / (w * w)
        }
    };
    integrate(g, T::zero(), T::one(), rel_tol, abs_tol, max_subdivisions)
}

/// Adaptive integration over a [`QuadratureSpec`] domain.
///
/// Multidimensional domains are handled by nested 1D adaptive integration.
pub fn quad<T: Scalar, F: Fn(&[T]) -> T>(f: F, spec: &QuadratureSpec) -> Result<QuadResult<T>, MathError> {
    spec.validate()?;
    let (rel, abs, nmax) = (spec.rel_tol, spec.abs_tol, spec.max_subdivisions);
    let inner_rel = rel * 0.1;
    let inner_abs = abs * 0.1;
    let ok = Cell::new(true);
    let evals = Cell::new(0usize);
    let track = |r: QuadResult<T>| {
        if !r.converged {
            ok.set(false);
        }
        evals.set(evals.get() + r.evaluations);
        r.value
    };
    let outer = match spec.domain {
        Domain::Interval { a, b } => integrate(|x| f(&[x]), T::lit(a), T::lit(b), rel, abs, nmax),
        Domain::SemiInfinite { a } => integrate_semi_infinite(|x| f(&[x]), T::lit(a), rel, abs, nmax),
        Domain::Prolate => integrate_semi_infinite(
            |mu| {
                track(integrate(
                    |nu| f(&[mu, nu]),
                    -T::one(),
                    T::one(),
                    inner_rel,
                    inner_abs,
                    nmax,
                ))
            },
            T::one(),
            rel,
            abs,
            nmax,
        ),
        Domain::Spherical => {
            let two_pi = T::lit(2.0) * T::PI();
            integrate_semi_infinite(
                |r| {
                    track(integrate(
                        |th| {
                            track(integrate(
                                |ph| f(&[r, th, ph]),
                                T::zero(),
                                two_pi,
                                inner_rel * 0.1,
                                inner_abs * 0.1,
                                nmax,
                            ))
                        },
                        T::zero(),
                        T::PI(),
                        inner_rel,
                        inner_abs,
                        nmax,
                    ))
                },
                T::zero(),
                rel,
                abs,
                nmax,
            )
        }
    };
    Ok(QuadResult {
        value: outer.value,
        err_estimate: outer.err_estimate,
        converged: outer.converged && ok.get(),
        evaluations: outer.evaluations + evals.get(),
    })
}

/// Gauss–Legendre nodes and weights on [−1, 1] in any scalar type.
pub fn gauss_legendre_t<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = T::int(n as i64);
    for i in 0..n.div_ceil(2) {
        let mut z = (T::PI() * (T::int(i as i64) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        for _ in 0..100 {
            let mut p1 = T::one();
            let mut p2 = T::zero();
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let fj = T::int(j as i64);
                p1 = ((T::lit(2.0) * fj + T::one()) * z * p2 - fj * p3) / (fj + T::one());
            }
            let pp = nf * (z * p1 - p2) / (z * z - T::one());
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= T::lit(4.0) * T::epsilon() {
                break;
            }
        }
        // derivative at the converged node
        let mut p1 = T::one();
        let mut p2 = T::zero();
        for j in 0..n {
            let p3 = p2;
            p2 = p1;
            let fj = T::int(j as i64);
            p1 = ((T::lit(2.0) * fj + T::one()) * z * p2 - fj * p3) / (fj + T::one());
        }
        let pp = nf * (z * p1 - p2) / (z * z - T::one());
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = T::lit(2.0) / ((T::one() - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Cached Gauss–Legendre rule in `f64`.
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

static GL_CACHE: LazyLock<RwLock<HashMap<usize, Arc<GaussRule>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Gauss–Legendre rule with `n` nodes on [−1, 1] (cached).
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    if let Some(r) = GL_CACHE.read().get(&n) {
        return r.clone();
    }
    let (nodes, weights) = gauss_legendre_t::<f64>(n);
    let rule = Arc::new(GaussRule { nodes, weights });
    GL_CACHE.write().entry(n).or_insert(rule).clone()
}

/// Composite Gauss–Legendre rule over consecutive panels given by `edges`.
pub fn composite_rule(edges: &[f64], per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = gauss_legendre(per_panel);
    let mut x = Vec::with_capacity((edges.len() - 1) * per_panel);
    let mut w = Vec::with_capacity(x.capacity());
    for p in edges.windows(2) {
        let (a, b) = (p[0], p[1]);
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        for (xi, wi) in rule.nodes.iter().zip(&rule.weights) {
            x.push(c + h * xi);
            w.push(h * wi);
        }
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_rule_exactness() {
        let r = gauss_legendre(10);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(18)).sum();
        assert_relative_eq!(s, 2.0 / 19.0, max_relative = 1e-14);
        let (x, w) = gauss_legendre_t::<f32>(6);
        let s: f32 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert_relative_eq!(s, 2.0 / 3.0, max_relative = 1e-6);
    }

    #[test]
    fn spec_examples() {
        let r = quad(|x: &[f64]| x[0] * x[0], &QuadratureSpec::new(Domain::Interval { a: 0.0, b: 1.0 })).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 1.0 / 3.0, max_relative = 1e-14);
        let r = quad(|x: &[f64]| (-x[0]).exp() * x[0] * x[0], &QuadratureSpec::new(Domain::SemiInfinite { a: 0.0 })).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-12);
        let r = quad(|x: &[f64]| (-(x[0] + x[1])).exp(), &QuadratureSpec::new(Domain::Prolate)).unwrap();
        let e = std::f64::consts::E;
        assert!(r.converged);
        assert_relative_eq!(r.value, (e - 1.0 / e) / e, max_relative = 1e-11);
    }

    #[test]
    fn spherical_domain_volume_of_gaussian() {
        let spec = QuadratureSpec::new(Domain::Spherical).tol(1e-8, 1e-10);
        let r = quad(|p: &[f64]| (-p[0] * p[0]).exp() * p[0] * p[0] * p[1].sin(), &spec).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI.powf(1.5), max_relative = 1e-7);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let spec = QuadratureSpec::new(Domain::Interval { a: 0.0, b: 1.0 }).tol(1e-15, 1e-300).subdivisions(3);
        let r = quad(|x: &[f64]| (1.0 / x[0]).sin(), &spec).unwrap();
        assert!(!r.converged);
        assert!(r.checked().is_err());
        let bad = QuadratureSpec::new(Domain::Interval { a: 0.0, b: 1.0 }).tol(0.0, 1e-9);
        assert!(quad(|x: &[f64]| x[0], &bad).is_err());
    }
}
