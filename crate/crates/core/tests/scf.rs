use approx::assert_abs_diff_eq;
use sturmint::basis::{parse_molecule, Molecule};
use sturmint::eri::EriRoute;
use sturmint::geometry::rotation;
use sturmint::resolution::ResolutionConfig;
use sturmint::scf::*;
use sturmint::twocenter::overlap_matrix;
use sturmint::{ScfError, Vec3};

const H2: &str = include_str!("../../../data/h2.mol");

fn h2() -> Molecule {
    parse_molecule(H2).unwrap()
}

/// Minimal-basis H2 pair, the second molecule displaced by `sep` along x.
fn minimal_dimer(sep: f64) -> (Molecule, Molecule) {
    let mono = "center Ha 0 0 0\ncenter Hb 0 0 1.402\nbasis Ha sto 1 0 0 1.2\nbasis Hb sto 1 0 0 1.2\n";
    let dimer = format!(
        "center Ha 0 0 0\ncenter Hb 0 0 1.402\ncenter Hc {sep} 0 0\ncenter Hd {sep} 0 1.402\n\
         basis Ha sto 1 0 0 1.2\nbasis Hb sto 1 0 0 1.2\nbasis Hc sto 1 0 0 1.2\nbasis Hd sto 1 0 0 1.2\n"
    );
    (parse_molecule(&dimer).unwrap(), parse_molecule(mono).unwrap())
}

#[test]
fn h2_total_energy() {
    let m = h2();
    let r = rhf(&m, &ScfConfig::default()).unwrap();
    assert!(r.converged);
    assert_abs_diff_eq!(r.energy_total, -1.1284436, epsilon = 5e-4);
    assert!(r.energy_total > -1.1336296);
    assert_abs_diff_eq!(r.nuclear_repulsion, 1.0 / 1.402, epsilon = 1e-14);
    assert_abs_diff_eq!(r.energy_total, r.energy_electronic + r.nuclear_repulsion, epsilon = 1e-14);

    let s = overlap_matrix(&m).unwrap();
    assert!(r.idempotency_error(&s) < 1e-8);
    assert_abs_diff_eq!(r.electron_count(&s), 2.0, epsilon = 1e-10);
    assert!(r.orbital_energies[0] < 0.0);
    assert!(r.orbital_energies.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn energy_is_invariant_under_rigid_motion() {
    let m = h2();
    let cfg = ScfConfig::default();
    let e0 = rhf(&m, &cfg).unwrap().energy_total;
    let moved = m.translated(&Vec3::new(0.7, -1.1, 2.3));
    assert_abs_diff_eq!(rhf(&moved, &cfg).unwrap().energy_total, e0, epsilon = 1e-9);
    let rot = rotation(Vec3::new(1.0, 2.0, -0.5), 0.83);
    let turned = m.rotated(&rot);
    assert_abs_diff_eq!(rhf(&turned, &cfg).unwrap().energy_total, e0, epsilon = 1e-9);
}

#[test]
fn resolution_route_gives_the_same_energy() {
    let m = h2();
    let exact = rhf(&m, &ScfConfig::default()).unwrap().energy_total;
    let cfg = ScfConfig {
        eri_route: EriRoute::ResolutionOnly,
        resolution: ResolutionConfig { l_max: 8, ..Default::default() },
        ..Default::default()
    };
    let r = rhf(&m, &cfg).unwrap();
    assert!(r.eri_stats.resolution > 0);
    assert_abs_diff_eq!(r.energy_total, exact, epsilon = 1e-5);
}

#[test]
fn separated_dimer_does_not_interact() {
    let (dimer, mono) = minimal_dimer(50.0);
    let i = interaction_energy(&dimer, &mono, &ScfConfig::default()).unwrap();
    assert!(i.dimer.converged && i.monomer.converged);
    assert_abs_diff_eq!(i.kcal_per_mol, 0.0, epsilon = 1e-3);
    assert!(matches!(interaction_energy(&mono, &mono, &ScfConfig::default()), Err(ScfError::Config(_))));
}

#[test]
fn validation_errors() {
    let hydrogen = parse_molecule("center H 0 0 0\nbasis H sto 1 0 0 1.0\n").unwrap();
    assert!(matches!(rhf(&hydrogen, &ScfConfig::default()), Err(ScfError::OddElectrons(1))));

    let dependent = parse_molecule("center He 0 0 0\nbasis He sto 1 0 0 1.5\nbasis He sto 1 0 0 1.50001\n").unwrap();
    assert!(matches!(rhf(&dependent, &ScfConfig::default()), Err(ScfError::Conditioning(_))));

    let m = h2();
    for cfg in [
        ScfConfig { damping: 1.0, ..Default::default() },
        ScfConfig { max_iter: 0, ..Default::default() },
        ScfConfig { energy_tol: 0.0, ..Default::default() },
    ] {
        assert!(matches!(rhf(&m, &cfg), Err(ScfError::Config(_))));
    }
}

#[test]
fn cusp_of_single_exponential_is_exact() {
    let zeta = 1.6875;
    let he = parse_molecule(&format!("center He 0 0 0\nbasis He sto 1 0 0 {zeta}\n")).unwrap();
    let r = rhf(&he, &ScfConfig::default()).unwrap();
    let samples = cusp_diagnostic(&r, &he, &Vec3::zeros(), &Vec3::new(0.3, 0.4, 0.5), 20, 4.0).unwrap();
    assert_eq!(samples.len(), 20);
    for (_, v) in samples {
        assert_abs_diff_eq!(v, zeta, epsilon = 1e-6);
    }
}

#[test]
fn h2_cusp_and_tail() {
    let m = h2();
    let r = rhf(&m, &ScfConfig::default()).unwrap();
    let a = m.centers[0].position;
    let near = cusp_diagnostic(&r, &m, &a, &Vec3::new(0.0, 0.0, -1.0), 5, 1e-3).unwrap();
    let limit = near[0].1;
    assert!((limit - 1.0).abs() < 0.15, "cusp value {limit}");

    // Far out the slowest exponential, 1s with ζ = 1.042999, takes over.
    let far = cusp_diagnostic(&r, &m, &a, &Vec3::new(1.0, 0.0, 0.0), 4, 60.0).unwrap();
    let tail = far.last().unwrap().1;
    assert!((tail - 1.042999).abs() < 0.02, "tail value {tail}");

    assert!(cusp_diagnostic(&r, &m, &a, &Vec3::zeros(), 4, 1.0).is_err());
}
