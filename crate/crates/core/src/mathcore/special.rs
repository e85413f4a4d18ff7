use std::sync::LazyLock;

use super::Scalar;
use crate::MathError;

const FACT_MAX: usize = 170;

static FACTORIALS: LazyLock<Vec<f64>> = LazyLock::new(|| {
    let mut f = vec![1.0f64; FACT_MAX + 1];
    for k in 1..=FACT_MAX {
        f[k] = f[k - 1] * k as f64;
    }
    f
});

/// n! (infinite beyond 170 in `f64`).
pub fn factorial<T: Scalar>(n: u32) -> T {
    match FACTORIALS.get(n as usize) {
        Some(&v) => T::lit(v),
        None => T::infinity(),
    }
}

/// n!! with the conventions (−1)!! = 0!! = 1.
pub fn double_factorial<T: Scalar>(n: i32) -> T {
    let mut acc = T::one();
    let mut k = n;
    while k > 1 {
        acc = acc * T::int(k as i64);
        k -= 2;
    }
    acc
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial<T: Scalar>(n: u32, k: u32) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::int((n - i) as i64) / T::int((i + 1) as i64);
    }
    acc.round()
}

/// Rising factorial (x)_n = x(x+1)…(x+n−1).
pub fn pochhammer<T: Scalar>(x: T, n: u32) -> T {
    let mut acc = T::one();
    for i in 0..n {
        acc = acc * (x + T::int(i as i64));
    }
    acc
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    if x < T::lit(0.5) {
        // reflection
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    if x == x.round() && x <= T::int(FACT_MAX as i64 + 1) {
        let n = x.to_u32().unwrap_or(1);
        return factorial::<T>(n - 1).ln();
    }
    let x = x - T::one();
    let mut a = T::lit(LANCZOS[0]);
    let t = x + T::lit(LANCZOS_G + 0.5);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::lit(c) / (x + T::int(i as i64));
    }
    T::lit(0.5) * (T::lit(2.0) * T::PI()).ln() + (x + T::lit(0.5)) * t.ln() - t + a.ln()
}

/// Γ(x) for x > 0; exact factorials at integer arguments.
pub fn gamma<T: Scalar>(x: T) -> T {
    if x == x.round() && x >= T::one() && x <= T::int(FACT_MAX as i64 + 1) {
        return factorial::<T>(x.to_u32().unwrap_or(1) - 1);
    }
    ln_gamma(x).exp()
}

fn series_lower<T: Scalar>(a: T, x: T) -> T {
    let eps = T::epsilon();
    let mut term = T::one() / a;
    let mut sum = term;
    let mut k = T::one();
    for _ in 0..10_000 {
        term = term * x / (a + k);
        sum = sum + term;
        if term.abs() < sum.abs() * eps {
            break;
        }
        k = k + T::one();
    }
    sum * (a * x.ln() - x).exp()
}

fn cf_upper<T: Scalar>(a: T, x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let eps = T::epsilon();
    let mut b = x + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..10_000 {
        let fi = T::int(i);
        let an = -fi * (fi - a);
        b = b + T::lit(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let del = d * c;
        h = h * del;
        if (del - T::one()).abs() < eps {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

/// Lower and upper incomplete gamma functions (γ(a,x), Γ(a,x)).
///
/// One of the two is computed directly (series below x = a+1, continued
/// fraction above) and the other as its complement, so the pair sums to Γ(a).
pub fn incomplete_gamma<T: Scalar>(a: T, x: T) -> Result<(T, T), MathError> {
    if !(a > T::zero()) {
        return Err(MathError::domain("incomplete_gamma", format!("a = {a} must be > 0")));
    }
    if x < T::zero() || x.is_nan() {
        return Err(MathError::domain("incomplete_gamma", format!("x = {x} must be >= 0")));
    }
    let g = gamma(a);
    if x == T::zero() {
        return Ok((T::zero(), g));
    }
    if x < a + T::one() {
        let lower = series_lower(a, x);
        Ok((lower, g - lower))
    } else {
        let upper = cf_upper(a, x);
        Ok((g - upper, upper))
    }
}

/// Exponential integral E₁(x) for x > 0.
pub fn expint_e1<T: Scalar>(x: T) -> Result<T, MathError> {
    if !(x > T::zero()) {
        return Err(MathError::domain("expint_e1", format!("x = {x} must be > 0")));
    }
    let eps = T::epsilon();
    if x <= T::one() {
        let euler = T::lit(0.577_215_664_901_532_9);
        let mut sum = T::zero();
        let mut term = T::one();
        for k in 1..200 {
            let fk = T::int(k);
            term = -term * x / fk;
            let add = -term / fk;
            sum = sum + add;
            if add.abs() < sum.abs() * eps {
                break;
            }
        }
        Ok(-euler - x.ln() + sum)
    } else {
        let tiny = T::min_positive_value() / eps;
        let mut b = x + T::one();
        let mut c = T::one() / tiny;
        let mut d = T::one() / b;
        let mut h = d;
        for i in 1..10_000 {
            let fi = T::int(i);
            let an = -fi * fi;
            b = b + T::lit(2.0);
            d = T::one() / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h = h * del;
            if (del - T::one()).abs() < eps {
                break;
            }
        }
        Ok(h * (-x).exp())
    }
}

/// Upper incomplete gamma Γ(a, x) for integer `a` of either sign.
///
/// Positive `a` uses the finite exponential sum; non-positive `a` starts
/// from E₁ and recurs downward, or uses the continued fraction for x ≥ 1.
pub fn upper_gamma_int(a: i32, x: f64) -> Result<f64, MathError> {
    if x < 0.0 || x.is_nan() {
        return Err(MathError::domain("upper_gamma_int", format!("x = {x} must be >= 0")));
    }
    if a >= 1 {
        if x == 0.0 {
            return Ok(factorial::<f64>(a as u32 - 1));
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..a {
            term *= x / j as f64;
            sum += term;
        }
        return Ok(factorial::<f64>(a as u32 - 1) * (-x).exp() * sum);
    }
    if x == 0.0 {
        return Err(MathError::domain("upper_gamma_int", format!("Γ({a}, 0) diverges")));
    }
    if x >= 1.0 {
        return Ok(cf_upper(a as f64, x));
    }
    let mut g = expint_e1(x)?;
    let ex = (-x).exp();
    let mut s = -1;
    while s >= a {
        g = (g - x.powi(s) * ex) / s as f64;
        s -= 1;
    }
    Ok(g)
}

/// Spherical Bessel function of the first kind jₗ(x).
pub fn spherical_bessel_j<T: Scalar>(l: u32, x: T) -> T {
    let ax = x.abs();
    if ax == T::zero() {
        return if l == 0 { T::one() } else { T::zero() };
    }
    if l == 0 {
        return x.sin() / x;
    }
    if ax <= T::int(l as i64) || ax < T::one() {
        // power series
        let x2 = -x * x / T::lit(2.0);
        let mut term = T::one();
        let mut sum = T::one();
        let tl = T::int(2 * l as i64);
        for k in 1..500 {
            let fk = T::int(k);
            term = term * x2 / (fk * (tl + T::lit(2.0) * fk + T::one()));
            sum = sum + term;
            if term.abs() <= sum.abs() * T::epsilon() {
                break;
            }
        }
        return x.powi(l as i32) / double_factorial::<T>(2 * l as i32 + 1) * sum;
    }
    let (s, c) = x.sin_cos();
    let mut jm = s / x;
    let mut j = s / (x * x) - c / x;
    for k in 1..l {
        let next = T::int(2 * k as i64 + 1) / x * j - jm;
        jm = j;
        j = next;
    }
    j
}
