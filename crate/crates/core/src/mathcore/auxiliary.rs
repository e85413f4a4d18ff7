//! A_i(p) = ∫₁^∞ e^{−pμ} μ^i dμ and B_j(q) = ∫₋₁¹ e^{−qν} ν^j dν.

use super::Scalar;
use crate::MathError;

/// Below this |q| the B integrals always come from the Taylor series.
pub const B_SERIES_THRESHOLD: f64 = 0.1;

/// A_i(p) by upward recurrence from A_0 = e^{−p}/p.
pub fn aux_a<T: Scalar>(i: u32, p: T) -> Result<T, MathError> {
    Ok(*aux_a_table(i, p)?.last().expect("non-empty"))
}

/// A_0(p) … A_imax(p).
pub fn aux_a_table<T: Scalar>(imax: u32, p: T) -> Result<Vec<T>, MathError> {
    if !(p > T::zero()) {
        return Err(MathError::domain("aux_a", format!("p = {p} must be > 0")));
    }
    let ep = (-p).exp();
    let mut out = Vec::with_capacity(imax as usize + 1);
    let mut a = ep / p;
    out.push(a);
    for i in 1..=imax {
        a = (ep + T::int(i as i64) * a) / p;
        out.push(a);
    }
    Ok(out)
}

/// B_j(q) from the termwise-integrated Taylor series of e^{−qν}.
///
/// Only terms with j + k even survive, so all terms share one sign and the
/// series is free of cancellation for any q.
pub fn aux_b_series<T: Scalar>(j: u32, q: T) -> T {
    let mut sum = T::zero();
    let mut coef = T::one(); // (−q)^k / k!
    let mut k: u32 = 0;
    loop {
        if (j + k).is_multiple_of(2) {
            let term = coef * T::lit(2.0) / T::int((j + k + 1) as i64);
            sum = sum + term;
            if k > 0 && term.abs() <= sum.abs() * T::epsilon() * T::lit(0.25) {
                break;
            }
            if sum == T::zero() && coef == T::zero() {
                break;
            }
        }
        k += 1;
        coef = coef * (-q) / T::int(k as i64);
        if k > 4000 {
            break;
        }
    }
    sum
}

/// B_j(q) by the plain upward recurrence, q ≠ 0.
///
/// Loses roughly log₁₀(j!/|q|^j) digits; kept for cross-checks.
pub fn aux_b_recurrence<T: Scalar>(j: u32, q: T) -> T {
    let (s, c) = (q.exp(), (-q).exp());
    let mut b = (s - c) / q;
    for k in 1..=j {
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        b = (sign * s - c + T::int(k as i64) * b) / q;
    }
    b
}

/// B_j(q).
///
/// The upward recurrence is used while it is stable (j ≤ |q|); beyond that,
/// and for |q| below [`B_SERIES_THRESHOLD`], the series.
pub fn aux_b<T: Scalar>(j: u32, q: T) -> T {
    *aux_b_table(j, q).last().expect("non-empty")
}

/// B_0(q) … B_jmax(q).
pub fn aux_b_table<T: Scalar>(jmax: u32, q: T) -> Vec<T> {
    let aq = q.abs();
    let mut out = Vec::with_capacity(jmax as usize + 1);
    if aq < T::lit(B_SERIES_THRESHOLD) {
        for j in 0..=jmax {
            out.push(aux_b_series(j, q));
        }
        return out;
    }
    let (s, c) = (q.exp(), (-q).exp());
    let mut b = (s - c) / q;
    out.push(b);
    for k in 1..=jmax {
        if T::int(k as i64) <= aq {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            b = (sign * s - c + T::int(k as i64) * b) / q;
        } else {
            b = aux_b_series(k, q);
        }
        out.push(b);
    }
    out
}
