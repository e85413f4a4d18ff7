use super::special::factorial;
use super::Scalar;
use crate::MathError;

/// Associated Laguerre polynomial Lₙ^α(x) by the three-term recurrence.
pub fn assoc_laguerre<T: Scalar>(n: i32, alpha: T, x: T) -> Result<T, MathError> {
    if n < 0 {
        return Err(MathError::domain("assoc_laguerre", format!("degree {n} < 0")));
    }
    let mut prev = T::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = T::one() + alpha - x;
    for k in 1..n {
        let fk = T::int(k as i64);
        let next = ((T::lit(2.0) * fk + T::one() + alpha - x) * cur - (fk + alpha) * prev)
            / (fk + T::one());
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Legendre polynomial Pₗ(x) for any real x.
pub fn legendre_p<T: Scalar>(l: u32, x: T) -> T {
    let mut p0 = T::one();
    if l == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 1..l {
        let fk = T::int(k as i64);
        let p2 = ((T::lit(2.0) * fk + T::one()) * x * p1 - fk * p0) / (fk + T::one());
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// P₀(x) … P_lmax(x).
pub fn legendre_p_table(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(lmax + 1);
    out.push(1.0);
    if lmax == 0 {
        return out;
    }
    out.push(x);
    for k in 1..lmax {
        let fk = k as f64;
        let next = ((2.0 * fk + 1.0) * x * out[k] - fk * out[k - 1]) / (fk + 1.0);
        out.push(next);
    }
    out
}

/// Associated Legendre function Pₗ^m(x), |x| ≤ 1, with Condon–Shortley phase.
pub fn assoc_legendre<T: Scalar>(l: i32, m: i32, x: T) -> Result<T, MathError> {
    if l < 0 || m.abs() > l {
        return Err(MathError::domain("assoc_legendre", format!("invalid (l, m) = ({l}, {m})")));
    }
    if x.abs() > T::one() {
        return Err(MathError::domain("assoc_legendre", format!("|x| = {} > 1", x.abs())));
    }
    if m < 0 {
        let mp = -m;
        let p = assoc_legendre(l, mp, x)?;
        let sign = if mp % 2 == 0 { T::one() } else { -T::one() };
        let ratio = factorial::<T>((l - mp) as u32) / factorial::<T>((l + mp) as u32);
        return Ok(sign * ratio * p);
    }
    let somx2 = ((T::one() - x) * (T::one() + x)).sqrt();
    let mut pmm = T::one();
    let mut fact = T::one();
    for _ in 0..m {
        pmm = -pmm * fact * somx2;
        fact = fact + T::lit(2.0);
    }
    if l == m {
        return Ok(pmm);
    }
    let mut pmmp1 = x * T::int(2 * m as i64 + 1) * pmm;
    if l == m + 1 {
        return Ok(pmmp1);
    }
    let mut pll = T::zero();
    for ll in (m + 2)..=l {
        pll = (x * T::int(2 * ll as i64 - 1) * pmmp1 - T::int((ll + m - 1) as i64) * pmm)
            / T::int((ll - m) as i64);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    Ok(pll)
}

/// Legendre functions of the second kind Q₀(x) … Q_lmax(x) for x > 1.
///
/// Upward recurrence is used only where its error growth stays bounded;
/// otherwise Miller's backward recurrence normalized to Q₀.
pub fn legendre_q_table(lmax: usize, x: f64) -> Result<Vec<f64>, MathError> {
    if !(x > 1.0) {
        return Err(MathError::domain("legendre_q_table", format!("x = {x} must be > 1")));
    }
    legendre_q_table_shifted(lmax, x - 1.0)
}

/// [`legendre_q_table`] at x = 1 + t, for t > 0 given without rounding loss.
pub fn legendre_q_table_shifted(lmax: usize, t: f64) -> Result<Vec<f64>, MathError> {
    if !(t > 0.0) {
        return Err(MathError::domain("legendre_q_table", format!("x − 1 = {t} must be > 0")));
    }
    let x = 1.0 + t;
    let q0 = 0.5 * (2.0 / t).ln_1p();
    let eta = (t + (t * (t + 2.0)).sqrt()).ln_1p();
    let mut out = vec![0.0; lmax + 1];
    out[0] = q0;
    if lmax == 0 {
        return Ok(out);
    }
    if 2.0 * lmax as f64 * eta < 2.0 {
        out[1] = x * q0 - 1.0;
        for k in 1..lmax {
            let fk = k as f64;
            out[k + 1] = ((2.0 * fk + 1.0) * x * out[k] - fk * out[k - 1]) / (fk + 1.0);
        }
        return Ok(out);
    }
    let extra = (40.0 / eta).ceil() as usize + 16;
    let top = lmax + extra;
    let mut q_hi = 0.0f64;
    let mut q = 1e-280f64;
    for k in (1..=top).rev() {
        let fk = k as f64;
        let q_lo = ((2.0 * fk + 1.0) * x * q - (fk + 1.0) * q_hi) / fk;
        q_hi = q;
        q = q_lo;
        if k - 1 <= lmax {
            out[k - 1] = q;
        }
        if q.abs() > 1e250 {
            let s = 1e-250;
            q *= s;
            q_hi *= s;
            for v in out.iter_mut().skip(k - 1) {
                *v *= s;
            }
        }
    }
    let norm = q0 / out[0];
    for v in out.iter_mut() {
        *v *= norm;
    }
    Ok(out)
}

/// Integer coefficients c_j of 2ˡ · dᵐ/dxᵐ Pₗ(x) = Σ_j c_j x^j, j = 0…l−m.
pub fn legendre_derivative_coeffs(l: u32, m: u32) -> Vec<i64> {
    // 2^l P_l(x) = Σ_k (−1)^k C(l,k) C(2l−2k, l) x^{l−2k}
    let mut base = vec![0i64; l as usize + 1];
    for k in 0..=(l / 2) {
        let c = binom_i(l, k) * binom_i(2 * l - 2 * k, l);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        base[(l - 2 * k) as usize] = sign * c;
    }
    let mut coeffs = base;
    for _ in 0..m {
        let mut d = vec![0i64; coeffs.len().saturating_sub(1).max(1)];
        for (j, &c) in coeffs.iter().enumerate().skip(1) {
            d[j - 1] = c * j as i64;
        }
        coeffs = d;
    }
    coeffs.truncate((l - m.min(l)) as usize + 1);
    coeffs
}

fn binom_i(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn laguerre_examples() {
        assert_eq!(assoc_laguerre(0, 0.3f64, 3.7).unwrap(), 1.0);
        assert_eq!(assoc_laguerre(1, 1.0f64, 2.0).unwrap(), 0.0);
        assert_relative_eq!(assoc_laguerre(2, 3.0f64, 1.0).unwrap(), 5.5, max_relative = 1e-15);
        assert!(assoc_laguerre(-1, 0.0f64, 1.0).is_err());
        let series = |a: f64, x: f64| (a + 2.0) * (a + 1.0) / 2.0 - (a + 2.0) * x + x * x / 2.0;
        assert_relative_eq!(assoc_laguerre(2, 0.7f64, 2.3).unwrap(), series(0.7, 2.3), max_relative = 1e-14);
    }

    #[test]
    fn legendre_q_matches_closed_forms() {
        for &x in &[1.0001f64, 1.01, 1.3, 2.0, 7.0, 40.0] {
            let q = legendre_q_table(40, x).unwrap();
            let q0 = 0.5 * ((x + 1.0) / (x - 1.0)).ln();
            let q1 = x * q0 - 1.0;
            let q2 = 0.5 * (3.0 * x * x - 1.0) * q0 - 1.5 * x;
            assert_relative_eq!(q[0], q0, max_relative = 1e-13);
            assert_relative_eq!(q[1], q1, max_relative = 1e-9);
            assert_relative_eq!(q[2], q2, max_relative = 1e-7);
            // Wronskian-type identity P_l Q_{l-1} − P_{l−1} Q_l = 1/l
            let p = legendre_p_table(40, x);
            for l in 1..=40 {
                let w = p[l] * q[l - 1] - p[l - 1] * q[l];
                assert_relative_eq!(w, 1.0 / l as f64, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn assoc_legendre_cs_phase() {
        let x = 0.3f64;
        let s = (1.0 - x * x).sqrt();
        assert_relative_eq!(assoc_legendre(1, 1, x).unwrap(), -s, max_relative = 1e-15);
        assert_relative_eq!(assoc_legendre(2, 1, x).unwrap(), -3.0 * x * s, max_relative = 1e-15);
        assert_relative_eq!(assoc_legendre(2, 2, x).unwrap(), 3.0 * s * s, max_relative = 1e-15);
        assert_relative_eq!(assoc_legendre(2, -1, x).unwrap(), 0.5 * x * s, max_relative = 1e-14);
    }

    #[test]
    fn derivative_coefficients() {
        // 4 P_2 = 6x² − 2; derivative 12x
        assert_eq!(legendre_derivative_coeffs(2, 0), vec![-2, 0, 6]);
        assert_eq!(legendre_derivative_coeffs(2, 1), vec![0, 12]);
        assert_eq!(legendre_derivative_coeffs(2, 2), vec![12]);
        assert_eq!(legendre_derivative_coeffs(0, 0), vec![1]);
    }
}
