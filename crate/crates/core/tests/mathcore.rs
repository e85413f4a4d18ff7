use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use sturmint::mathcore::*;

/// Midpoint rule over the sphere; independent of the Gauss rules used inside the crate.
fn sphere_midpoint<F: Fn(f64, f64) -> f64>(f: F, nt: usize, np: usize) -> f64 {
    let (dt, dp) = (PI / nt as f64, 2.0 * PI / np as f64);
    let mut acc = 0.0;
    for i in 0..nt {
        let th = (i as f64 + 0.5) * dt;
        for k in 0..np {
            acc += f(th, k as f64 * dp) * th.sin();
        }
    }
    acc * dt * dp
}

/// Composite Simpson on [a, b]; a dumb but trustworthy oracle.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn laguerre_examples() {
    assert_abs_diff_eq!(assoc_laguerre(0, 0.7, 3.7).unwrap(), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(assoc_laguerre(1, 1.0, 2.0).unwrap(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(assoc_laguerre(2, 3.0, 1.0).unwrap(), 5.5, epsilon = 1e-14);
    assert!(assoc_laguerre(-1, 0.0, 1.0).is_err());
}

#[test]
fn harmonic_examples() {
    let y00 = spherical_harmonic(0, 0, 0.4, 2.2).unwrap();
    assert_abs_diff_eq!(y00.re, 0.28209479177387814, epsilon = 1e-14);
    assert_abs_diff_eq!(y00.im, 0.0, epsilon = 1e-15);
    let y10 = spherical_harmonic(1, 0, 0.0, 1.0).unwrap();
    assert_abs_diff_eq!(y10.re, 0.4886025119029199, epsilon = 1e-14);
    let sum: f64 = (-1..=1).map(|m| spherical_harmonic(1, m, 0.7, 1.3).unwrap().norm_sqr()).sum();
    assert_abs_diff_eq!(sum, 0.238732414637843, epsilon = 1e-12);
    assert!(spherical_harmonic(1, 2, 0.1, 0.1).is_err());
}

#[test]
fn harmonics_are_orthonormal() {
    for (l1, m1, l2, m2) in [(1, 0, 1, 0), (2, 1, 2, 1), (2, 1, 1, 1), (3, -2, 3, -2), (3, -2, 1, 0)] {
        let v = sphere_midpoint(
            |t, p| {
                let a = spherical_harmonic(l1, m1, t, p).unwrap();
                let b = spherical_harmonic(l2, m2, t, p).unwrap();
                (a.conj() * b).re
            },
            400,
            16,
        );
        let expect = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
        assert_abs_diff_eq!(v, expect, epsilon = 1e-5);
    }
}

#[test]
fn gaunt_examples() {
    assert_eq!(gaunt(GauntKey::new(1, 0, 1, 1, 1, 0)).unwrap(), 0.0);
    let g000 = gaunt(GauntKey::new(0, 0, 0, 0, 0, 0)).unwrap();
    assert_abs_diff_eq!(g000, 1.0 / (4.0 * PI).sqrt(), epsilon = 1e-14);
    let oracle = sphere_midpoint(
        |t, _| {
            let y1 = spherical_harmonic(1, 0, t, 0.0).unwrap().re;
            let y2 = spherical_harmonic(2, 0, t, 0.0).unwrap().re;
            y1 * y1 * y2
        },
        2000,
        1,
    );
    let g = gaunt(GauntKey::new(1, 0, 1, 0, 2, 0)).unwrap();
    assert_abs_diff_eq!(g, oracle, epsilon = 1e-6);
    assert_abs_diff_eq!(g, gaunt_3j(GauntKey::new(1, 0, 1, 0, 2, 0)), epsilon = 1e-13);
    assert!(gaunt(GauntKey::new(1, 2, 1, 0, 1, 2)).is_err());
}

#[test]
fn incomplete_gamma_examples() {
    for x in [0.1f64, 1.0, 4.5, 30.0] {
        let (lo, up) = incomplete_gamma(1.0, x).unwrap();
        assert_abs_diff_eq!(lo, 1.0 - (-x).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(up, (-x).exp(), epsilon = 1e-14);
    }
    let (lo, up) = incomplete_gamma(2.5, 0.0).unwrap();
    assert_eq!(lo, 0.0);
    assert_abs_diff_eq!(up, gamma(2.5), epsilon = 1e-14);
    let (lo, up) = incomplete_gamma(3.0, 2.0).unwrap();
    let lo_q = simpson(|t| t * t * (-t).exp(), 0.0, 2.0, 2000);
    assert_abs_diff_eq!(lo, lo_q, epsilon = 1e-12);
    assert_abs_diff_eq!(up, 2.0 - lo_q, epsilon = 1e-12);
    assert!(incomplete_gamma(0.0, 1.0).is_err());
    assert!(incomplete_gamma(1.0, -1.0).is_err());
}

#[test]
fn aux_examples() {
    assert_abs_diff_eq!(aux_a(0, 1.0).unwrap(), 0.36787944117144233, epsilon = 1e-15);
    assert_abs_diff_eq!(aux_a(1, 1.0).unwrap(), 0.7357588823428847, epsilon = 1e-15);
    let a5 = simpson(|m| m.powi(5) * (-2.5 * m).exp(), 1.0, 40.0, 20000);
    assert_abs_diff_eq!(aux_a(5, 2.5).unwrap(), a5, epsilon = 1e-11);
    assert_abs_diff_eq!(aux_b(0, 0.0), 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(aux_b(1, 0.0), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(aux_b(0, 1.0), 2.0 * 1f64.sinh(), epsilon = 1e-14);
    assert!(aux_a(0, 0.0).is_err());
}

#[test]
fn aux_tables_match_quadrature() {
    for p in [0.3, 1.7, 6.0, 15.0] {
        let table = aux_a_table(20, p).unwrap();
        for (i, &v) in table.iter().enumerate() {
            let q = quad(
                |x: &[f64]| x[0].powi(i as i32) * (-p * x[0]).exp(),
                &QuadratureSpec::new(Domain::SemiInfinite { a: 1.0 }),
            )
            .unwrap()
            .checked()
            .unwrap();
            assert!((v - q).abs() <= 1e-10 * q.abs().max(1.0), "A_{i}({p}): {v} vs {q}");
        }
    }
    for q in [0.0, 0.05, 0.2, 1.3, 7.5, -2.0] {
        let table = aux_b_table(20, q);
        for (j, &v) in table.iter().enumerate() {
            let o = quad(
                |x: &[f64]| x[0].powi(j as i32) * (-q * x[0]).exp(),
                &QuadratureSpec::new(Domain::Interval { a: -1.0, b: 1.0 }).tol(1e-12, 1e-13),
            )
            .unwrap()
            .checked()
            .unwrap();
            assert!((v - o).abs() <= 1e-10 * o.abs().max(1.0), "B_{j}({q}): {v} vs {o}");
        }
    }
}

#[test]
fn quad_examples() {
    let v = quad(|x: &[f64]| x[0] * x[0], &QuadratureSpec::new(Domain::Interval { a: 0.0, b: 1.0 })).unwrap();
    assert_abs_diff_eq!(v.value, 1.0 / 3.0, epsilon = 1e-13);
    assert!(v.converged);
    let v = quad(|x: &[f64]| (-x[0]).exp() * x[0] * x[0], &QuadratureSpec::new(Domain::SemiInfinite { a: 0.0 })).unwrap();
    assert_abs_diff_eq!(v.value, 2.0, epsilon = 1e-12);
    let spec = QuadratureSpec::new(Domain::Prolate).tol(1e-10, 1e-12);
    let v = quad(|x: &[f64]| (-(x[0] + x[1])).exp(), &spec).unwrap();
    let e = std::f64::consts::E;
    assert_abs_diff_eq!(v.value, (1.0 / e) * (e - 1.0 / e), epsilon = 1e-9);
    let bad = QuadratureSpec::new(Domain::Interval { a: 0.0, b: 1.0 }).tol(0.0, 0.0);
    assert!(quad(|x: &[f64]| x[0], &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_conjugation(l in 0i32..8, m_raw in 0i32..8, theta in 0.0f64..PI, phi in 0.0f64..(2.0 * PI)) {
        let m = m_raw % (l + 1);
        let a = spherical_harmonic(l, -m, theta, phi).unwrap();
        let b = spherical_harmonic(l, m, theta, phi).unwrap().conj() * if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn laguerre_recurrence(n in 1i32..15, alpha in 0.0f64..6.0, x in 0.0f64..20.0) {
        // (n+1) L_{n+1} = (2n+1+α−x) L_n − (n+α) L_{n−1}
        let l0 = assoc_laguerre(n - 1, alpha, x).unwrap();
        let l1 = assoc_laguerre(n, alpha, x).unwrap();
        let l2 = assoc_laguerre(n + 1, alpha, x).unwrap();
        let rhs = ((2 * n + 1) as f64 + alpha - x) * l1 - (n as f64 + alpha) * l0;
        prop_assert!(((n + 1) as f64 * l2 - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn incomplete_gamma_sums_to_gamma(a in 0.2f64..12.0, x in 0.0f64..40.0) {
        let (lo, up) = incomplete_gamma(a, x).unwrap();
        prop_assert!(lo >= 0.0 && up >= 0.0);
        prop_assert!((lo + up - gamma(a)).abs() <= 1e-12 * gamma(a));
    }

    #[test]
    fn b_series_matches_recurrence(j_raw in 0u32..20, q in 1.0f64..15.0, sign in prop::bool::ANY) {
        // The recurrence is only trusted where it is stable, j ≤ |q|.
        let j = j_raw.min(q as u32);
        let q = if sign { q } else { -q };
        let s = aux_b_series(j, q);
        let r = aux_b_recurrence(j, q);
        prop_assert!((s - r).abs() <= 1e-10 * s.abs().max(1e-3));
    }

    #[test]
    fn gaunt_matches_3j(l1 in 0i32..5, l2 in 0i32..5, l3 in 0i32..5, m1 in -4i32..5, m2 in -4i32..5) {
        prop_assume!(m1.abs() <= l1 && m2.abs() <= l2 && (m1 - m2).abs() <= l3);
        let key = GauntKey::new(l1, m1, l2, m2, l3, m1 - m2);
        prop_assert!((gaunt(key).unwrap() - gaunt_3j(key)).abs() < 1e-12);
    }
}
