//! One line per acceptance criterion. Every criterion runs even when an
//! earlier one fails; the test fails at the end if any did.

use std::time::Instant;

use sturmint::basis::{parse_molecule, BasisFunction, Molecule};
use sturmint::eri::EriTensor;
use sturmint::geometry::rotation;
use sturmint::mathcore::{aux_a_table, aux_b_table, quad, Domain, QuadratureSpec};
use sturmint::nmr::{cartesian_decomposition, dipole_tensor, Axis, DipoleQuadrature, PlacedOrbital};
use sturmint::poisson::{fallback_eri, table1_convention, PoissonEngine};
use sturmint::resolution::{potential_v0, potential_v_hankel, ResolutionConfig, ResolutionEngine};
use sturmint::scf::{cusp_diagnostic, interaction_energy, rhf, ScfConfig};
use sturmint::twocenter::{overlap_matrix, Primitive};
use sturmint::{Complex, Vec3};
use sturmint_validation::*;

const H2: &str = include_str!("../../../data/h2.mol");
const DIMER: &str = include_str!("../../../data/h2_dimer.mol");

const TOL_ATOMIC: f64 = 2e-5;
const TOL_TABLE1: f64 = 2e-5;
const TOL_TWO_CENTER: f64 = 1e-4;
const TOL_EQUALITY: f64 = 1e-10;
const TOL_H2_ENERGY: f64 = 5e-4;
const TOL_DIMER_ENERGY: f64 = 1e-3;
const TOL_INTERACTION_KCAL: f64 = 0.03;
const TOL_RESOLUTION: f64 = 1e-6;
const RESOLUTION_N_MAX: u32 = 25;
const RESOLUTION_L_MAX: u32 = 4;
const TOL_HANKEL: f64 = 1e-8;
const BENCH_EPS: f64 = 1e-6;
/// l_max 4 leaves a few 1e-5 on the intermolecular set; 8 reaches BENCH_EPS.
const BENCH_L_MAX: u32 = 8;
/// Resolution and fallback each within BENCH_EPS of the exact value.
const TOL_BENCH_MATCH: f64 = 2.0 * BENCH_EPS;
/// Fallback integrals actually timed; the rest of the set is extrapolated.
const BENCH_SAMPLE: usize = 40;
const TOL_AUX: f64 = 1e-10;
const TOL_SYMMETRY: f64 = 1e-12;
const TOL_STURMIAN: f64 = 1e-8;
const TOL_CLOSURE: f64 = 1e-10;
const TOL_COVARIANCE: f64 = 1e-5;
const TOL_CUSP: f64 = 1e-6;
const LIMIT_ATOMIC_SECS: f64 = 1.0;
const LIMIT_H2_SECS: f64 = 10.0;
const LIMIT_TOTAL_SECS: f64 = 300.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn h2() -> Molecule {
    parse_molecule(H2).unwrap()
}

fn centers_in(mol: &Molecule, idx: [usize; 4]) -> usize {
    let mut c = idx.map(|i| mol.basis[i].center_index);
    c.sort_unstable();
    c.windows(2).filter(|w| w[0] != w[1]).count() + 1
}

fn labeled(e: &PoissonEngine, label: &str) -> f64 {
    let (i, j, k, l) = quartet(label).unwrap();
    e.eri(i, j, k, l).unwrap()
}

fn atomic_exchange() -> Outcome {
    let t = Instant::now();
    let m = h2();
    let e = PoissonEngine::new(&m).unwrap();
    let values: Vec<(&str, f64, f64)> = ATOMIC_EXCHANGE.iter().map(|&(lab, v)| (lab, labeled(&e, lab), v)).collect();
    let secs = t.elapsed().as_secs_f64();
    let ok = values.iter().all(|(_, got, want)| (got - want).abs() <= TOL_ATOMIC) && secs < LIMIT_ATOMIC_SECS;
    let parts: Vec<String> = values.iter().map(|(l, g, w)| format!("{l} = {g:.6} (ref {w}, Δ {:.1e})", g - w)).collect();
    outcome(ok, format!("{}; {secs:.3} s", parts.join(", ")))
}

fn table1() -> Outcome {
    let m = h2();
    let b = &m.basis;
    let cell = |r: usize, c: usize| table1_convention(&b[r - 1], &b[r - 1], &b[c - 1], &b[c - 1]).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, &z) in EXPONENTS.iter().enumerate() {
        let v = cell(i + 1, i + 1);
        ok &= (v - z).abs() <= TOL_TABLE1;
        parts.push(format!("({0},{0}) {v:.6}", i + 1));
    }
    for &(r, c, want) in &TABLE1_OFF_DIAGONAL {
        let v = cell(r, c);
        ok &= (v - want).abs() <= TOL_TABLE1;
        parts.push(format!("({r},{c}) {v:.6} vs {want}"));
    }
    let (r, c, listed) = TABLE1_ANOMALOUS;
    let e = PoissonEngine::new(&m).unwrap();
    let computed = e.eri(r - 1, r - 1, c - 1, c - 1).unwrap();
    parts.push(format!("excluded ({r},{c}) listed {listed}, computed {computed:.6} Ha"));
    outcome(ok, parts.join("; "))
}

fn two_center_exchange() -> Outcome {
    let m = h2();
    let e = PoissonEngine::new(&m).unwrap();
    let res = ResolutionEngine::new(&m, ResolutionConfig::default()).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for &(lab, want) in &TWO_CENTER_EXCHANGE {
        let (i, j, k, l) = quartet(lab).unwrap();
        let p = e.eri(i, j, k, l).unwrap();
        let r = res.eri(i, j, k, l).unwrap().value;
        ok &= (p - want).abs() <= TOL_TWO_CENTER && (r - want).abs() <= TOL_TWO_CENTER;
        parts.push(format!("{lab} poisson {p:.6} resolution {r:.6} (ref {want})"));
    }
    for &(x, y) in &EXCHANGE_EQUALITIES {
        let (a, b) = (labeled(&e, x), labeled(&e, y));
        let held = (a - b).abs() <= TOL_EQUALITY;
        ok &= held;
        if !held {
            parts.push(format!("{x} {a:.6} ≠ {y} {b:.6}"));
        }
    }
    outcome(ok, parts.join("; "))
}

fn h2_energy() -> Outcome {
    let t = Instant::now();
    let r = rhf(&h2(), &ScfConfig::default()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let e = r.energy_total;
    let ok = r.converged && (e - H2_ENERGY).abs() <= TOL_H2_ENERGY && e > HF_LIMIT && secs < LIMIT_H2_SECS;
    outcome(ok, format!("E = {e:.7} Ha (ref {H2_ENERGY}, HF limit {HF_LIMIT}); {secs:.2} s"))
}

fn dimer() -> Outcome {
    let d = parse_molecule(DIMER).unwrap();
    let i = interaction_energy(&d, &h2(), &ScfConfig::default()).unwrap();
    let e = i.dimer.energy_total;
    let ok = i.dimer.converged
        && i.monomer.converged
        && (e - DIMER_ENERGY).abs() <= TOL_DIMER_ENERGY
        && (i.kcal_per_mol - INTERACTION_KCAL).abs() <= TOL_INTERACTION_KCAL;
    outcome(
        ok,
        format!(
            "E(dimer) = {e:.6} Ha (ref {DIMER_ENERGY}), ΔE = {:+.4} kcal/mol (ref {INTERACTION_KCAL})",
            i.kcal_per_mol
        ),
    )
}

fn resolution_convergence() -> Outcome {
    let m = h2();
    let exact = PoissonEngine::new(&m).unwrap();
    let cfg = ResolutionConfig { n_max: RESOLUTION_N_MAX, l_max: RESOLUTION_L_MAX, ..Default::default() };
    let res = ResolutionEngine::new(&m, cfg).unwrap();
    let mut worst = (0.0f64, (0, 0, 0, 0));
    let mut count = 0;
    for (i, j, k, l) in EriTensor::unique_quartets(m.nbasis()) {
        let d = (res.eri(i, j, k, l).unwrap().value - exact.eri(i, j, k, l).unwrap()).abs();
        count += 1;
        if d > worst.0 {
            worst = (d, (i, j, k, l));
        }
    }
    let (i, j, k, l) = worst.1;
    outcome(
        worst.0 <= TOL_RESOLUTION,
        format!(
            "{count} quartets at n_max {RESOLUTION_N_MAX}, l_max {RESOLUTION_L_MAX}: worst |Δ| = {:.2e} at ({}{}|{}{})",
            worst.0,
            i + 1,
            j + 1,
            k + 1,
            l + 1
        ),
    )
}

fn hankel_closed_forms() -> Outcome {
    let (lo, hi) = (1e-3f64.ln(), 50f64.ln());
    let mut worst = 0.0f64;
    for n in 0..=10 {
        for s in 0..80 {
            let r = (lo + (hi - lo) * s as f64 / 79.0).exp();
            worst = worst.max((potential_v0(n, r) - potential_v_hankel(n, 0, r).unwrap()).abs());
        }
    }
    outcome(worst <= TOL_HANKEL, format!("n ≤ 10, 80 radii in [1e-3, 50]: worst |Δ| = {worst:.2e}"))
}

fn benchmark_ordering() -> Outcome {
    let m = parse_molecule(DIMER).unwrap();
    let set: Vec<_> = EriTensor::unique_quartets(m.nbasis())
        .into_iter()
        .filter(|&(i, j, k, l)| centers_in(&m, [i, j, k, l]) > 2)
        .collect();
    let cfg = ResolutionConfig { eps: BENCH_EPS, l_max: BENCH_L_MAX, ..Default::default() };
    let t = Instant::now();
    let engine = ResolutionEngine::new(&m, cfg).unwrap();
    let res: Vec<f64> = set.iter().map(|&(i, j, k, l)| engine.eri(i, j, k, l).unwrap().value).collect();
    let t_res = t.elapsed().as_secs_f64();

    let prims: Vec<Primitive> =
        m.basis.iter().map(|bf| Primitive::from_sto(bf, m.position_of(bf)).unwrap()).collect();
    let picks: Vec<usize> = (0..BENCH_SAMPLE).map(|s| s * set.len() / BENCH_SAMPLE).collect();
    let t = Instant::now();
    let mut worst = 0.0f64;
    for &p in &picks {
        let (i, j, k, l) = set[p];
        let v = fallback_eri(&prims[i], &prims[j], &prims[k], &prims[l], BENCH_EPS).unwrap();
        worst = worst.max((v - res[p]).abs());
    }
    let t_fb = t.elapsed().as_secs_f64() * set.len() as f64 / picks.len() as f64;
    outcome(
        t_res < t_fb && worst <= TOL_BENCH_MATCH,
        format!(
            "{} quartets at l_max {BENCH_L_MAX}: resolution {t_res:.1} s, fallback {t_fb:.1} s (from {BENCH_SAMPLE} timed), ratio {:.1}; sample |Δ| ≤ {worst:.1e}",
            set.len(),
            t_fb / t_res
        ),
    )
}

fn radial_integral<F: Fn(f64) -> f64>(f: F) -> f64 {
    let spec = QuadratureSpec::new(Domain::SemiInfinite { a: 0.0 }).tol(1e-13, 1e-13);
    quad(|x: &[f64]| f(x[0]), &spec).unwrap().checked().unwrap()
}

fn sturmian_residual(bf: &BasisFunction, r: f64) -> f64 {
    let h = 1e-3 * r.max(0.1);
    let f = |x: f64| bf.radial(x);
    let (fm2, fm1, f0, fp1, fp2) = (f(r - 2.0 * h), f(r - h), f(r), f(r + h), f(r + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    let (n, l, b) = (bf.n as f64, bf.l as f64, bf.zeta);
    -0.5 * (d2 + 2.0 * d1 / r - l * (l + 1.0) * f0 / (r * r)) - n * b * f0 / r + 0.5 * b * b * f0
}

fn properties() -> Outcome {
    let mut fails = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            fails.push(name.to_string());
        }
    };
    let m = h2();

    for mol in [m.clone(), parse_molecule(DIMER).unwrap()] {
        let s = overlap_matrix(&mol).unwrap();
        check("overlap positive definite", s.symmetric_eigenvalues().min() > 0.0);
    }

    let mut aux = 0.0f64;
    for p in [0.3, 1.7, 6.0, 15.0] {
        for (i, &v) in aux_a_table(20, p).unwrap().iter().enumerate() {
            let spec = QuadratureSpec::new(Domain::SemiInfinite { a: 1.0 });
            let q = quad(|x: &[f64]| x[0].powi(i as i32) * (-p * x[0]).exp(), &spec).unwrap().checked().unwrap();
            aux = aux.max((v - q).abs() / q.abs().max(1.0));
        }
    }
    for q in [0.0, 0.05, 0.2, 1.3, 7.5, -2.0] {
        for (j, &v) in aux_b_table(20, q).iter().enumerate() {
            let spec = QuadratureSpec::new(Domain::Interval { a: -1.0, b: 1.0 }).tol(1e-12, 1e-13);
            let o = quad(|x: &[f64]| x[0].powi(j as i32) * (-q * x[0]).exp(), &spec).unwrap().checked().unwrap();
            aux = aux.max((v - o).abs() / o.abs().max(1.0));
        }
    }
    check("A/B tables vs quadrature", aux <= TOL_AUX);

    let e = PoissonEngine::new(&m).unwrap();
    let n = m.nbasis();
    let diag: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| e.eri(i, j, i, j).unwrap().sqrt()).collect()).collect();
    let (mut sym, mut schwarz) = (0.0f64, true);
    for (i, j, k, l) in EriTensor::unique_quartets(n) {
        let v = e.eri(i, j, k, l).unwrap();
        for (a, b, c, d) in [(j, i, k, l), (i, j, l, k), (j, i, l, k), (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)] {
            sym = sym.max((e.eri(a, b, c, d).unwrap() - v).abs());
        }
        schwarz &= v.abs() <= diag[i][j] * diag[k][l] * (1.0 + 1e-12);
    }
    check("ERI 8-fold symmetry", sym <= TOL_SYMMETRY);
    check("Schwarz bound", schwarz);

    let mut ode = 0.0f64;
    for (n, l, beta) in [(1, 0, 1.0), (2, 0, 0.7), (3, 1, 1.3), (4, 2, 0.9), (5, 0, 1.1)] {
        let bf = BasisFunction::sturmian(n, l, 0, beta, 0).unwrap();
        let scale = (1..200).map(|i| bf.radial(i as f64 * 0.1).abs()).fold(0.0, f64::max);
        for r in [0.3, 0.9, 2.0, 4.5, 8.0, 15.0] {
            ode = ode.max((sturmian_residual(&bf, r) / scale).abs());
        }
    }
    check("Sturmian ODE residual", ode <= TOL_STURMIAN);
    let mut ortho = 0.0f64;
    for l in 0..3 {
        for n1 in (l + 1)..6 {
            for n2 in (l + 1)..6 {
                let a = BasisFunction::sturmian(n1, l, 0, 1.2, 0).unwrap();
                let b = BasisFunction::sturmian(n2, l, 0, 1.2, 0).unwrap();
                let v = radial_integral(|r| a.radial(r) * b.radial(r) * r);
                ortho = ortho.max((v - if n1 == n2 { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    check("Sturmian 1/r orthonormality", ortho <= TOL_STURMIAN);

    let mut closure = 0.0f64;
    let nu_c = Vec3::new(0.4, 0.3, -0.2);
    let nuc = Vec3::new(-0.5, -0.4, 0.6);
    for a in Axis::ALL {
        for b in Axis::ALL {
            let op = cartesian_decomposition(a, b);
            for s in 0..50 {
                let t = s as f64;
                let p = Vec3::new(2.5 * (0.7 * t).sin(), 2.5 * (1.3 * t + 0.4).cos(), 2.5 * (0.37 * t + 1.0).sin());
                if (p - nuc).norm() < 0.05 || (p - nu_c).norm() < 0.05 {
                    continue;
                }
                let c = op.eval_cartesian(&nu_c, &nuc, &p);
                let h = op.eval_spherical(&nu_c, &nuc, &p);
                closure = closure.max((h.re - c).abs() / c.abs().max(1.0)).max(h.im.abs());
            }
        }
    }
    check("harmonic closure", closure <= TOL_CLOSURE);

    let mu = PlacedOrbital { bf: BasisFunction::sto(1, 0, 0, 1.1, 0).unwrap(), center: Vec3::new(0.3, -0.2, 0.5) };
    let nu = PlacedOrbital { bf: BasisFunction::sto(2, 0, 0, 0.9, 0).unwrap(), center: Vec3::new(-0.8, 0.4, 1.1) };
    let nucleus = Vec3::new(0.5, 0.9, -0.4);
    let q = DipoleQuadrature::default();
    let t = dipole_tensor(&mu, &nu, &nucleus, &q).unwrap();
    let rot = rotation(Vec3::new(1.0, -2.0, 0.7), 1.1);
    let turn = |p: &PlacedOrbital| PlacedOrbital { bf: p.bf, center: rot * p.center };
    let tr = dipole_tensor(&turn(&mu), &turn(&nu), &(rot * nucleus), &q).unwrap();
    let mut cov = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            let mut expect = Complex::new(0.0, 0.0);
            for c in 0..3 {
                for d in 0..3 {
                    expect += t[c][d] * rot[(a, c)] * rot[(b, d)];
                }
            }
            cov = cov.max((tr[a][b] - expect).norm());
        }
    }
    check("rank-2 rotation covariance", cov <= TOL_COVARIANCE);

    let zeta = 1.6875;
    let he = parse_molecule(&format!("center He 0 0 0\nbasis He sto 1 0 0 {zeta}\n")).unwrap();
    let r = rhf(&he, &ScfConfig::default()).unwrap();
    let samples = cusp_diagnostic(&r, &he, &Vec3::zeros(), &Vec3::new(0.3, 0.4, 0.5), 20, 4.0).unwrap();
    check("cusp of a single 1s atom", samples.iter().all(|&(_, v)| (v - zeta).abs() <= TOL_CUSP));

    let summary = format!(
        "aux {aux:.1e}, symmetry {sym:.1e}, ODE {ode:.1e}, 1/r ortho {ortho:.1e}, closure {closure:.1e}, covariance {cov:.1e}"
    );
    if fails.is_empty() {
        outcome(true, summary)
    } else {
        outcome(false, format!("failed: {}; {summary}", fails.join(", ")))
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("atomic exchange 1212, 1313", atomic_exchange),
        ("one-center Coulomb, table convention", table1),
        ("two-center exchange, both routes", two_center_exchange),
        ("H2 RHF energy", h2_energy),
        ("dimer and interaction energy", dimer),
        ("resolution convergence on the H2 set", resolution_convergence),
        ("potential closed forms vs Hankel quadrature", hankel_closed_forms),
        ("resolution faster than fallback on 3-/4-center set", benchmark_ordering),
        ("property suites", properties),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {name}: {} [{:.1} s]", k + 1, o.detail, t.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(k + 1);
        }
    }
    let total = start.elapsed().as_secs_f64();
    let in_time = total < LIMIT_TOTAL_SECS;
    println!(
        "{} criterion 10: full run under {LIMIT_TOTAL_SECS:.0} s: {total:.1} s",
        if in_time { "PASS" } else { "FAIL" }
    );
    if !in_time {
        failed.push(10);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
