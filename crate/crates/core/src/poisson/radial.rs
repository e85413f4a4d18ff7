use crate::basis::BasisFunction;
use crate::mathcore::{factorial, incomplete_gamma, real_gaunt, real_harmonics_unit, upper_gamma_int};
use crate::twocenter::Primitive;
use crate::{IntegralError, MathError, Real, Vec3};

/// Radial density g(r) = r^{n_eff−1} e^{−ζ_eff r} carrying multipole order l.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDensity {
    pub n_eff: i32,
    pub zeta_eff: Real,
    pub l: i32,
}

impl RadialDensity {
    pub fn new(n_eff: i32, zeta_eff: Real, l: i32) -> Result<Self, MathError> {
        if n_eff < 1 || !(zeta_eff > 0.0) || l < 0 {
            return Err(MathError::domain(
                "RadialDensity",
                format!("need n_eff ≥ 1, ζ > 0, l ≥ 0 (got {n_eff}, {zeta_eff}, {l})"),
            ));
        }
        Ok(RadialDensity { n_eff, zeta_eff, l })
    }
}

/// Π_l(r) = r^{−l−1} ∫₀^r g s^{l+2} ds + r^l ∫_r^∞ g s^{1−l} ds.
///
/// The potential of g(r) S_lm(r̂) is (4π/(2l+1)) Π_l(r) S_lm(r̂).
pub fn radial_potential(g: &RadialDensity, r: Real) -> Result<Real, MathError> {
    if r < 0.0 || r.is_nan() {
        return Err(MathError::domain("radial_potential", format!("r = {r} must be ≥ 0")));
    }
    let (n, z, l) = (g.n_eff, g.zeta_eff, g.l);
    if r == 0.0 {
        return Ok(if l == 0 { factorial::<Real>(n as u32) / z.powi(n + 1) } else { 0.0 });
    }
    let x = z * r;
    let a_in = n + l + 2;
    let (lower, _) = incomplete_gamma(a_in as Real, x)?;
    let inner = lower / z.powi(a_in);
    let a_out = n + 1 - l;
    let upper = if a_out >= 1 {
        incomplete_gamma(a_out as Real, x)?.1
    } else {
        upper_gamma_int(a_out, x)?
    };
    let outer = upper / z.powi(a_out);
    Ok(inner / r.powi(l + 1) + outer * r.powi(l))
}

/// Σ_{j>k} k! inner^{j−k−1}/j! · (m+j)!/total^{m+j+1}
///
/// = ∫₀^∞ dr r^m e^{−(total−inner) r} ∫₀^r s^k e^{−inner s} ds.
fn nested(m: i32, k: i32, inner: Real, total: Real) -> Real {
    let j0 = k + 1;
    // first term: k!(m+j0)!/(j0! total^{m+j0+1}) = (m+k+1)!/((k+1) total^{m+k+2})
    let log_t = ln_fact(m + j0) - ((k + 1) as Real).ln() - ((m + j0 + 1) as Real) * total.ln();
    let ratio_base = inner / total;
    let mut sum = 0.0;
    let mut t = log_t.exp();
    let mut j = j0;
    loop {
        sum += t;
        let r = ratio_base * (m + j + 1) as Real / (j + 1) as Real;
        t *= r;
        j += 1;
        if (t <= sum * 1e-17 && r < 1.0) || j > j0 + 20000 {
            break;
        }
    }
    sum
}

fn ln_fact(n: i32) -> Real {
    crate::mathcore::ln_gamma((n + 1) as Real)
}

/// ∫∫ r₁^{p+2} e^{−α r₁} r₂^{q+2} e^{−β r₂} r_<^L / r_>^{L+1} dr₁ dr₂.
pub fn radial_coulomb(p: i32, alpha: Real, q: i32, beta: Real, big_l: i32) -> Real {
    let total = alpha + beta;
    nested(q + 1 - big_l, p + big_l + 2, alpha, total) + nested(p + 1 - big_l, q + big_l + 2, beta, total)
}

fn same_center(ps: &[&Primitive]) -> bool {
    ps.windows(2).all(|w| (w[0].center - w[1].center).norm() < 1e-10)
}

/// (ab|cd) for four primitives on one center.
pub fn primitive_eri_one_center(a: &Primitive, b: &Primitive, c: &Primitive, d: &Primitive) -> Result<Real, IntegralError> {
    if !same_center(&[a, b, c, d]) {
        return Err(IntegralError::WrongRoute("one-center route needs all four functions on one center".into()));
    }
    let lmax = (a.l + b.l).min(c.l + d.l);
    let lmin = (a.l - b.l).abs().max((c.l - d.l).abs());
    let mut total = 0.0;
    for big_l in lmin..=lmax {
        if (a.l + b.l + big_l) % 2 == 1 || (c.l + d.l + big_l) % 2 == 1 {
            continue;
        }
        let mut ang = 0.0;
        for big_m in -big_l..=big_l {
            let g1 = real_gaunt(a.l, a.m, b.l, b.m, big_l, big_m)?;
            if g1 == 0.0 {
                continue;
            }
            ang += g1 * real_gaunt(c.l, c.m, d.l, d.m, big_l, big_m)?;
        }
        if ang == 0.0 {
            continue;
        }
        let rad = radial_coulomb(a.k + b.k, a.zeta + b.zeta, c.k + d.k, c.zeta + d.zeta, big_l);
        total += ang * 4.0 * std::f64::consts::PI / (2 * big_l + 1) as Real * rad;
    }
    Ok(a.coef * b.coef * c.coef * d.coef * total)
}

/// (ab|cd) for four STOs sharing one center.
pub fn eri_one_center(
    a: &BasisFunction,
    b: &BasisFunction,
    c: &BasisFunction,
    d: &BasisFunction,
    center: &Vec3,
) -> Result<Real, IntegralError> {
    let p = |bf: &BasisFunction| Primitive::from_sto(bf, *center);
    primitive_eri_one_center(&p(a)?, &p(b)?, &p(c)?, &p(d)?)
}

/// One-center value divided by the same integral with every exponent set to 1.
///
/// For (1s1s|1s1s) this strips the constant 5/8 and leaves ζ.
pub fn table1_convention(a: &BasisFunction, b: &BasisFunction, c: &BasisFunction, d: &BasisFunction) -> Result<Real, IntegralError> {
    let o = Vec3::zeros();
    let unit = |bf: &BasisFunction| BasisFunction { zeta: 1.0, ..*bf };
    let v = eri_one_center(a, b, c, d, &o)?;
    let r = eri_one_center(&unit(a), &unit(b), &unit(c), &unit(d), &o)?;
    Ok(v / r)
}

/// Potential at `point` of the one-center density a·b.
pub(crate) fn one_center_pair_potential(a: &Primitive, b: &Primitive, point: &Vec3) -> Result<Real, IntegralError> {
    let d = point - a.center;
    let r = d.norm();
    let u = if r > 0.0 { [d.x / r, d.y / r, d.z / r] } else { [0.0, 0.0, 1.0] };
    let lmax = (a.l + b.l) as usize;
    let s = real_harmonics_unit(lmax, u);
    let g_zeta = a.zeta + b.zeta;
    let n_eff = a.k + b.k + 1;
    let mut v = 0.0;
    for big_l in (a.l - b.l).abs()..=(a.l + b.l) {
        if (a.l + b.l + big_l) % 2 == 1 {
            continue;
        }
        let pi_l = radial_potential(&RadialDensity { n_eff, zeta_eff: g_zeta, l: big_l }, r)?;
        for big_m in -big_l..=big_l {
            let g = real_gaunt(a.l, a.m, b.l, b.m, big_l, big_m)?;
            if g != 0.0 {
                let idx = (big_l * big_l + big_l + big_m) as usize;
                v += g * 4.0 * std::f64::consts::PI / (2 * big_l + 1) as Real * pi_l * s[idx];
            }
        }
    }
    Ok(a.coef * b.coef * v)
}
