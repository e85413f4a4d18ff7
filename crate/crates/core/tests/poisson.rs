use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use sturmint::basis::{parse_molecule, BasisFunction, Center, Molecule};
use sturmint::mathcore::{quad, Domain, QuadratureSpec};
use sturmint::poisson::*;
use sturmint::twocenter::Primitive;
use sturmint::Vec3;

const H2: &str = include_str!("../../../data/h2.mol");
const EULER_GAMMA: f64 = 0.5772156649015329;

fn h2() -> Molecule {
    parse_molecule(H2).unwrap()
}

/// Two 1s functions of exponent ζ on each end of a bond of length r.
fn h2_minimal(zeta: f64, r: f64) -> Molecule {
    let centers = vec![
        Center { label: "A".into(), position: Vec3::zeros() },
        Center { label: "B".into(), position: Vec3::new(0.0, 0.0, r) },
    ];
    let basis = vec![BasisFunction::sto(1, 0, 0, zeta, 0).unwrap(), BasisFunction::sto(1, 0, 0, zeta, 1).unwrap()];
    Molecule::new(centers, vec![1.0, 1.0], basis).unwrap()
}

/// E₁(x): power series for small x, continued fraction (evaluated backwards) beyond.
fn e1(x: f64) -> f64 {
    if x > 2.0 {
        let mut f = 0.0;
        for k in (1..80).rev() {
            let k = k as f64;
            f = k * k / (x + 2.0 * k + 1.0 - f);
        }
        return (-x).exp() / (x + 1.0 - f);
    }
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..60 {
        term *= -x / k as f64;
        sum += term / k as f64;
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Sugiura's closed form for the 1s exchange integral (ab|ab), equal exponents.
fn sugiura_exchange(zeta: f64, r: f64) -> f64 {
    let p = zeta * r;
    let s = (-p).exp() * (1.0 + p + p * p / 3.0);
    let sp = p.exp() * (1.0 - p + p * p / 3.0);
    let a = -(-2.0 * p).exp() * (-25.0 / 8.0 + 23.0 * p / 4.0 + 3.0 * p * p + p.powi(3) / 3.0);
    let b = 6.0 / p * (s * s * (EULER_GAMMA + p.ln()) - sp * sp * e1(4.0 * p) + 2.0 * s * sp * e1(2.0 * p));
    zeta * (a + b) / 5.0
}

/// Closed form of the 1s Coulomb integral (aa|bb), equal exponents.
fn coulomb_1s(zeta: f64, r: f64) -> f64 {
    let p = zeta * r;
    zeta * (1.0 / p - (-2.0 * p).exp() * (1.0 / p + 11.0 / 8.0 + 0.75 * p + p * p / 6.0))
}

fn label(mol: &Molecule, digits: &str) -> f64 {
    let d: Vec<usize> = digits.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect();
    let b = &mol.basis;
    eri_two_center(&b[d[0]], &b[d[3]], &b[d[1]], &b[d[2]], mol).unwrap()
}

fn potential_oracle(n: i32, zeta: f64, l: i32, r: f64) -> f64 {
    let spec = QuadratureSpec::new(Domain::Interval { a: 0.0, b: r }).tol(1e-13, 1e-15);
    let inner = quad(|s: &[f64]| s[0].powi(n - 1 + l + 2) * (-zeta * s[0]).exp(), &spec).unwrap().value;
    let spec = QuadratureSpec::new(Domain::SemiInfinite { a: r }).tol(1e-13, 1e-15);
    let outer = quad(|s: &[f64]| s[0].powi(n - 1 + 1 - l) * (-zeta * s[0]).exp(), &spec).unwrap().value;
    inner / r.powi(l + 1) + outer * r.powi(l)
}

#[test]
fn radial_potential_matches_quadrature() {
    for (n, z, l, r) in [(2, 2.0, 0, 1.0), (2, 2.0, 2, 0.5), (1, 2.08, 0, 3.0), (3, 3.2, 1, 0.7), (4, 1.5, 3, 6.0)] {
        let g = RadialDensity::new(n, z, l).unwrap();
        let v = radial_potential(&g, r).unwrap();
        let o = potential_oracle(n, z, l, r);
        assert!((v - o).abs() <= 1e-12 * o.abs(), "n={n} l={l} r={r}: {v} vs {o}");
    }
}

#[test]
fn radial_potential_gauss_law() {
    // r Π_0(r) tends to the total radial charge ∫ g s² ds = (n+1)!/ζ^{n+2}.
    let g = RadialDensity::new(1, 2.0, 0).unwrap();
    let q = 2.0 / 8.0;
    assert_abs_diff_eq!(40.0 * radial_potential(&g, 40.0).unwrap(), q, epsilon = 1e-12);
    assert!(RadialDensity::new(0, 1.0, 0).is_err());
    assert!(radial_potential(&g, -1.0).is_err());
}

#[test]
fn one_center_values() {
    let o = Vec3::zeros();
    let s = BasisFunction::sto(1, 0, 0, 1.042999, 0).unwrap();
    assert_abs_diff_eq!(eri_one_center(&s, &s, &s, &s, &o).unwrap(), 0.625 * 1.042999, epsilon = 1e-13);
    assert_abs_diff_eq!(table1_convention(&s, &s, &s, &s).unwrap(), 1.042999, epsilon = 1e-13);

    // (1s 1s | 1s' 1s'), ζ and ζ': independent closed form from the nested radial integral.
    let (a, b) = (1.042999, 1.599999);
    let sp = BasisFunction::sto(1, 0, 0, b, 0).unwrap();
    let j = a * b * (a * a + 3.0 * a * b + b * b) / (a + b).powi(3);
    assert_abs_diff_eq!(eri_one_center(&s, &s, &sp, &sp, &o).unwrap(), j, epsilon = 1e-13);
}

#[test]
fn atomic_exchange_examples() {
    let m = h2();
    assert_abs_diff_eq!(label(&m, "1212"), 0.720716, epsilon = 2e-5);
    assert_abs_diff_eq!(label(&m, "1313"), 0.585172, epsilon = 2e-5);
}

#[test]
fn exchange_matches_sugiura() {
    for (zeta, r) in [(1.0, 1.4), (1.042999, 1.402), (1.3, 2.5), (0.8, 0.6)] {
        let m = h2_minimal(zeta, r);
        let b = &m.basis;
        let k = eri_two_center(&b[0], &b[1], &b[0], &b[1], &m).unwrap();
        assert_abs_diff_eq!(k, sugiura_exchange(zeta, r), epsilon = 1e-10);
        let j = eri_two_center(&b[0], &b[0], &b[1], &b[1], &m).unwrap();
        assert_abs_diff_eq!(j, coulomb_1s(zeta, r), epsilon = 1e-12);
    }
    // The tabulated 1515 value.
    assert_abs_diff_eq!(label(&h2(), "1515"), 0.319902, epsilon = 1e-4);
    assert_abs_diff_eq!(label(&h2(), "1515"), sugiura_exchange(1.042999, 1.402), epsilon = 1e-10);
}

#[test]
fn two_center_exchange_matches_numerical_route() {
    let m = h2();
    let p: Vec<Primitive> = m.basis.iter().map(|b| Primitive::from_sto(b, m.position_of(b)).unwrap()).collect();
    for (i, j) in [(1, 4), (0, 6), (3, 7)] {
        let closed = primitive_eri(&p[i], &p[j], &p[i], &p[j]).unwrap();
        let numeric = fallback_eri(&p[i], &p[j], &p[i], &p[j], 1e-9).unwrap();
        assert_abs_diff_eq!(closed, numeric, epsilon = 1e-8);
    }
}

#[test]
fn long_range_limit() {
    let m = h2_minimal(1.042999, 50.0);
    let b = &m.basis;
    let j = eri_two_center(&b[0], &b[0], &b[1], &b[1], &m).unwrap();
    assert_abs_diff_eq!(j, 0.02, epsilon = 1e-6);
}

#[test]
fn engine_agrees_with_direct_route() {
    let m = h2();
    let e = PoissonEngine::new(&m).unwrap();
    let b = &m.basis;
    for (i, j, k, l) in [(0, 0, 0, 0), (3, 2, 1, 0), (4, 0, 0, 0), (4, 0, 4, 0), (7, 3, 7, 3), (7, 4, 1, 0)] {
        let direct = eri_two_center(&b[i], &b[j], &b[k], &b[l], &m).unwrap();
        assert_abs_diff_eq!(e.eri(i, j, k, l).unwrap(), direct, epsilon = 1e-12);
    }
}

#[test]
fn pair_potential_matches_numeric() {
    let m = h2();
    let p: Vec<Primitive> = m.basis.iter().map(|b| Primitive::from_sto(b, m.position_of(b)).unwrap()).collect();
    for point in [Vec3::new(0.3, -0.4, 0.9), Vec3::new(2.0, 1.0, -1.0), Vec3::new(0.0, 0.0, 4.0)] {
        let a = pair_potential_at(&p[0], &p[5], &point).unwrap();
        let n = numeric_pair_potential(&p[0], &p[5], &point).unwrap();
        assert_abs_diff_eq!(a, n, epsilon = 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_center_permutation_symmetry(i in 0usize..8, j in 0usize..8, k in 0usize..8, l in 0usize..8) {
        let m = h2();
        let b = &m.basis;
        let e = |a: usize, bb: usize, c: usize, d: usize| eri_two_center(&b[a], &b[bb], &b[c], &b[d], &m).unwrap();
        let v = e(i, j, k, l);
        for w in [e(j, i, k, l), e(i, j, l, k), e(k, l, i, j), e(l, k, j, i)] {
            prop_assert!((v - w).abs() <= 1e-12);
        }
    }
}
