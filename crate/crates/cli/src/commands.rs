//! Subcommand implementations.

use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use sturmint::basis::{parse_molecule, Molecule};
use sturmint::eri::{EriStats, EriTensor};
use sturmint::geometry::rotation;
use sturmint::nmr::{dipole_tensor, DipoleQuadrature, PlacedOrbital};
use sturmint::poisson::{fallback_eri, table1_convention, PoissonEngine};
use sturmint::resolution::{ResolutionConfig, ResolutionEngine};
use sturmint::scf::{interaction_energy, rhf_with, Integrals, ScfConfig, ScfResult};
use sturmint::twocenter::{overlap_matrix, Primitive};
use sturmint::{BasisError, IntegralError, Mat3, ScfError, Vec3};

use crate::report::{list, matrix, quantity, RunReport};
use crate::{Common, Route};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("SCF did not converge")]
    NotConverged(Box<RunReport>),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<IntegralError> for CliError {
    fn from(e: IntegralError) -> Self {
        match e {
            IntegralError::Invalid(m) => CliError::Input(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ScfError> for CliError {
    fn from(e: ScfError) -> Self {
        match e {
            ScfError::Integral(i) => i.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Input {
    mol: Molecule,
    text: String,
}

fn load(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mol = parse_molecule(&text).map_err(|e: BasisError| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Input { mol, text })
}

fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    format!("{:x}", h.finalize())
}

fn resolution_config(c: &Common) -> Result<ResolutionConfig> {
    let cfg = ResolutionConfig { n_max: c.n_max, l_max: c.l_max, eps: c.eps, ..Default::default() };
    cfg.validate()?;
    Ok(cfg)
}

/// Orbital labels are 1-based basis indices; four of them name (d1 d4|d2 d3).
fn label(idx: &[usize], nbasis: usize) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    if nbasis <= 9 {
        parts.concat()
    } else {
        parts.join(".")
    }
}

fn canonical(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    let (a, b) = (p.max(q), p.min(q));
    let (c, d) = (r.max(s), r.min(s));
    if (a, b) >= (c, d) {
        (a, b, c, d)
    } else {
        (c, d, a, b)
    }
}

fn distinct_centers(mol: &Molecule, q: [usize; 4]) -> usize {
    let mut c = q.map(|i| mol.basis[i].center_index);
    c.sort_unstable();
    1 + c.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Two-center-at-most ERIs by the selected route.
struct SmallEri<'m> {
    closed: Option<PoissonEngine>,
    resolution: Option<ResolutionEngine<'m>>,
    cache: HashMap<(usize, usize, usize, usize), f64>,
}

impl<'m> SmallEri<'m> {
    fn new(mol: &'m Molecule, route: Route, cfg: &ResolutionConfig) -> Result<Self> {
        Ok(if route == Route::Resolution {
            SmallEri { closed: None, resolution: Some(ResolutionEngine::new(mol, *cfg)?), cache: HashMap::new() }
        } else {
            SmallEri { closed: Some(PoissonEngine::new(mol)?), resolution: None, cache: HashMap::new() }
        })
    }

    fn get(&mut self, p: usize, q: usize, r: usize, s: usize) -> Result<f64> {
        let key = canonical(p, q, r, s);
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let (i, j, k, l) = key;
        let v = match (&self.closed, &self.resolution) {
            (Some(c), _) => c.eri(i, j, k, l)?,
            (None, Some(r)) => r.eri(i, j, k, l)?.value,
            (None, None) => unreachable!("one engine is always present"),
        };
        self.cache.insert(key, v);
        Ok(v)
    }
}

pub fn integrals(path: &Path, c: &Common, table1: bool) -> Result<RunReport> {
    let input = load(path)?;
    let mol = &input.mol;
    let cfg = resolution_config(c)?;
    let flags = format!("{};table1={table1}", c.canonical());
    let mut report = RunReport::new("integrals", digest(&[&input.text, &flags]));
    let n = mol.nbasis();
    let t = Instant::now();
    let mut eri = SmallEri::new(mol, c.route, &cfg)?;
    report.time("setup", t);

    let t = Instant::now();
    let mut coulomb = Vec::new();
    for i in 0..n {
        for j in 0..=i {
            if distinct_centers(mol, [i, i, j, j]) > 2 {
                continue;
            }
            let same = mol.basis[i].center_index == mol.basis[j].center_index;
            let value = if table1 && same {
                let (a, b) = (&mol.basis[i], &mol.basis[j]);
                table1_convention(a, a, b, b)?
            } else {
                eri.get(i, i, j, j)?
            };
            let unit = if table1 && same { "dimensionless" } else { "Ha" };
            coulomb.push(json!({ "label": label(&[i, j, j, i], n), "value": value, "unit": unit, "centers": if same { 1 } else { 2 } }));
        }
    }
    report.time("coulomb", t);

    let t = Instant::now();
    let mut atomic = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if mol.basis[i].center_index == mol.basis[j].center_index {
                let v = eri.get(i, j, j, i)?;
                atomic.push(json!({ "label": label(&[i, j, i, j], n), "value": v, "unit": "Ha" }));
            }
        }
    }
    report.time("atomic_exchange", t);

    let t = Instant::now();
    let mut two_center: Vec<Value> = Vec::new();
    let mut seen: HashMap<(usize, usize, usize, usize), ()> = HashMap::new();
    let mut values: Vec<(String, f64)> = Vec::new();
    for d1 in 0..n {
        for d2 in 0..n {
            let (ca, cb) = (mol.basis[d1].center_index, mol.basis[d2].center_index);
            if ca == cb {
                continue;
            }
            let on_pair: Vec<usize> =
                (0..n).filter(|&k| mol.basis[k].center_index == ca || mol.basis[k].center_index == cb).collect();
            for &d3 in &on_pair {
                for &d4 in &on_pair {
                    let key = canonical(d1, d4, d2, d3);
                    if seen.insert(key, ()).is_some() {
                        continue;
                    }
                    let v = eri.get(d1, d4, d2, d3)?;
                    let lab = label(&[d1, d2, d3, d4], n);
                    let equal = values.iter().find(|(_, x)| (x - v).abs() <= 1e-10).map(|(l, _)| l.clone());
                    let mut row = json!({ "label": lab, "value": v, "unit": "Ha" });
                    if let Some(e) = equal {
                        row["equal_to"] = json!(e);
                    }
                    values.push((lab, v));
                    two_center.push(row);
                }
            }
        }
    }
    report.time("two_center_exchange", t);

    report.insert("route", json!(format!("{:?}", c.route).to_lowercase()));
    report.insert("table1_convention", json!(table1));
    report.insert("coulomb", Value::Array(coulomb));
    report.insert("atomic_exchange", Value::Array(atomic));
    report.insert("two_center_exchange", Value::Array(two_center));
    Ok(report)
}

fn scf_block(r: &ScfResult, mol: &Molecule) -> Result<Value> {
    let overlap = &overlap_matrix(mol)?;
    let n = r.density.nrows();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| r.density[(i, j)]).collect()).collect();
    Ok(json!({
        "energy_total": quantity(r.energy_total, "Ha"),
        "energy_electronic": quantity(r.energy_electronic, "Ha"),
        "nuclear_repulsion": quantity(r.nuclear_repulsion, "Ha"),
        "orbital_energies": list(&r.orbital_energies, "Ha"),
        "density": matrix(rows, "dimensionless"),
        "converged": r.converged,
        "iterations": r.iterations,
        "idempotency_error": quantity(r.idempotency_error(overlap), "dimensionless"),
        "electron_count": quantity(r.electron_count(overlap), "dimensionless"),
        "eri": stats_block(&r.eri_stats),
    }))
}

fn stats_block(s: &EriStats) -> Value {
    json!({
        "closed_form": s.poisson,
        "fallback": s.fallback,
        "resolution": s.resolution,
        "screened": s.screened,
        "unconverged": s.unconverged,
        "max_tail": quantity(s.max_tail, "Ha"),
    })
}

pub fn scf(path: &Path, c: &Common, dimer_of: Option<&Path>, max_iter: usize) -> Result<RunReport> {
    let input = load(path)?;
    let monomer = dimer_of.map(load).transpose()?;
    let cfg = ScfConfig { max_iter, eri_route: c.route.eri_route(), resolution: resolution_config(c)?, ..Default::default() };
    cfg.validate()?;
    let flags = format!("{};max_iter={max_iter}", c.canonical());
    let mono_text = monomer.as_ref().map(|m| m.text.as_str()).unwrap_or("");
    let mut report = RunReport::new("scf", digest(&[&input.text, mono_text, &flags]));
    report.insert("route", json!(format!("{:?}", c.route).to_lowercase()));
    let converged = match &monomer {
        None => {
            let t = Instant::now();
            let ints = Integrals::compute(&input.mol, cfg.eri_route, &cfg.resolution)?;
            report.time("integrals", t);
            let t = Instant::now();
            let r = rhf_with(&input.mol, &ints, &cfg)?;
            report.time("scf", t);
            report.insert("scf", scf_block(&r, &input.mol)?);
            r.converged
        }
        Some(m) => {
            let t = Instant::now();
            let i = interaction_energy(&input.mol, &m.mol, &cfg)?;
            report.time("scf", t);
            report.insert("dimer", scf_block(&i.dimer, &input.mol)?);
            report.insert("monomer", scf_block(&i.monomer, &m.mol)?);
            report.insert(
                "interaction_energy",
                json!({
                    "hartree": quantity(i.dimer.energy_total - 2.0 * i.monomer.energy_total, "Ha"),
                    "kcal_per_mol": quantity(i.kcal_per_mol, "kcal/mol"),
                    "counterpoise": false,
                }),
            );
            i.dimer.converged && i.monomer.converged
        }
    };
    if converged {
        Ok(report)
    } else {
        Err(CliError::NotConverged(Box::new(report)))
    }
}

fn parse_indices<const N: usize>(s: &str, n: usize) -> Result<[usize; N]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(CliError::Input(format!("expected {N} comma-separated indices, got {s:?}")));
    }
    let mut out = [0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        let v: usize = p.parse().map_err(|_| CliError::Input(format!("bad index {p:?}")))?;
        if v == 0 || v > n {
            return Err(CliError::Input(format!("index {v} outside 1..={n}")));
        }
        *o = v - 1;
    }
    Ok(out)
}

pub fn benchmark(path: &Path, c: &Common, sample: usize, quartet: Option<&str>) -> Result<RunReport> {
    let input = load(path)?;
    let mol = &input.mol;
    let cfg = resolution_config(c)?;
    let flags = format!("{};sample={sample};quartet={}", c.canonical(), quartet.unwrap_or(""));
    let mut report = RunReport::new("benchmark", digest(&[&input.text, &flags]));
    report.insert("eps", quantity(c.eps, "Ha"));
    report.insert("threads", json!(rayon::current_num_threads()));

    if let Some(q) = quartet {
        let [i, j, k, l] = parse_indices::<4>(q, mol.nbasis())?;
        let engine = ResolutionEngine::new(mol, cfg)?;
        let t = Instant::now();
        let steps = engine.trace(i, j, k, l)?;
        let r = engine.eri(i, j, k, l)?;
        report.time("trace", t);
        let rows: Vec<Value> = steps
            .iter()
            .map(|s| {
                json!({ "label": format!("l={}", s.l), "value": s.partial, "unit": "Ha",
                        "block": quantity(s.block, "Ha"), "terms": s.terms })
            })
            .collect();
        report.insert("quartet", json!(label(&[i, k, l, j], mol.nbasis())));
        report.insert("trace", Value::Array(rows));
        report.insert("value", quantity(r.value, "Ha"));
        report.insert("terms_used", json!(r.terms_used));
        report.insert("tail_estimate", quantity(r.tail_estimate, "Ha"));
        report.insert("converged", json!(r.converged));
        if distinct_centers(mol, [i, j, k, l]) <= 2 {
            let exact = PoissonEngine::new(mol)?.eri(i, j, k, l)?;
            report.insert("closed_form", quantity(exact, "Ha"));
        }
        return Ok(report);
    }

    let quartets = EriTensor::unique_quartets(mol.nbasis());
    let (small, large): (Vec<_>, Vec<_>) =
        quartets.into_iter().partition(|&(i, j, k, l)| distinct_centers(mol, [i, j, k, l]) <= 2);
    report.insert("two_center_count", json!(small.len()));
    report.insert("three_four_center_count", json!(large.len()));

    // 2-center set: closed forms against resolution
    let t = Instant::now();
    let closed = PoissonEngine::new(mol)?;
    let exact: Vec<f64> = small.iter().map(|&(i, j, k, l)| closed.eri(i, j, k, l)).collect::<std::result::Result<_, _>>()?;
    report.time("two_center.closed_form", t);
    let t = Instant::now();
    let engine = ResolutionEngine::new(mol, cfg)?;
    let mut worst2 = 0.0f64;
    let mut terms2 = 0usize;
    for (&(i, j, k, l), e) in small.iter().zip(&exact) {
        let r = engine.eri(i, j, k, l)?;
        worst2 = worst2.max((r.value - e).abs());
        terms2 += r.terms_used;
    }
    report.time("two_center.resolution", t);
    report.insert("two_center_max_deviation", quantity(worst2, "Ha"));
    report.insert("two_center_terms_used", json!(terms2));

    if large.is_empty() {
        return Ok(report);
    }
    // 3-/4-center set: resolution against the per-integral fallback
    let t = Instant::now();
    let engine = ResolutionEngine::new(mol, cfg)?;
    let mut res = Vec::with_capacity(large.len());
    let mut terms = 0usize;
    let mut unconverged = 0usize;
    for &(i, j, k, l) in &large {
        let r = engine.eri(i, j, k, l)?;
        terms += r.terms_used;
        unconverged += usize::from(!r.converged);
        res.push(r.value);
    }
    let t_res = t.elapsed().as_secs_f64() * 1e3;
    report.time("three_four_center.resolution", t);

    let prims: Vec<Primitive> = mol
        .basis
        .iter()
        .map(|bf| Primitive::from_sto(bf, mol.position_of(bf)))
        .collect::<std::result::Result<_, _>>()?;
    let picks: Vec<usize> = if sample == 0 || sample >= large.len() {
        (0..large.len()).collect()
    } else {
        (0..sample).map(|s| s * large.len() / sample).collect()
    };
    let t = Instant::now();
    let mut worst = 0.0f64;
    for &p in &picks {
        let (i, j, k, l) = large[p];
        let v = fallback_eri(&prims[i], &prims[j], &prims[k], &prims[l], c.eps)?;
        worst = worst.max((v - res[p]).abs());
    }
    let t_fb = t.elapsed().as_secs_f64() * 1e3;
    report.time("three_four_center.fallback_sample", t);
    let t_fb_total = t_fb * large.len() as f64 / picks.len() as f64;
    report.timings.insert("three_four_center.fallback_extrapolated".into(), t_fb_total);
    report.insert("fallback_sampled", json!(picks.len()));
    report.insert("resolution_terms_used", json!(terms));
    report.insert("resolution_unconverged", json!(unconverged));
    report.insert("sample_max_deviation", quantity(worst, "Ha"));
    report.insert("resolution_faster", json!(t_res < t_fb_total));
    Ok(report)
}

fn parse_rotation(s: &str) -> Result<Mat3> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad rotation component {x:?}"))))
        .collect::<Result<_>>()?;
    if v.len() != 4 {
        return Err(CliError::Input("rotation needs x,y,z,degrees".into()));
    }
    let axis = Vec3::new(v[0], v[1], v[2]);
    if axis.norm() == 0.0 {
        return Err(CliError::Input("rotation axis must be nonzero".into()));
    }
    Ok(rotation(axis, v[3].to_radians()))
}

pub fn nmr(
    path: &Path,
    c: &Common,
    nucleus: &str,
    pairs: &[String],
    rotate: Option<&str>,
    radial: usize,
    theta: usize,
) -> Result<RunReport> {
    let input = load(path)?;
    let flags = format!("{};nucleus={nucleus};pairs={};rotate={};radial={radial};theta={theta}", c.canonical(), pairs.join("/"), rotate.unwrap_or(""));
    let mut report = RunReport::new("nmr", digest(&[&input.text, &flags]));
    let rot = rotate.map(parse_rotation).transpose()?;
    let mol = match &rot {
        Some(r) => input.mol.rotated(r),
        None => input.mol.clone(),
    };
    let n = mol.nbasis();
    let idx = mol
        .centers
        .iter()
        .position(|x| x.label == nucleus)
        .ok_or_else(|| CliError::Input(format!("no center labelled {nucleus:?}")))?;
    let pos = mol.centers[idx].position;
    let pair_list: Vec<[usize; 2]> = if pairs.is_empty() {
        (0..n).map(|i| [i, i]).collect()
    } else {
        pairs.iter().map(|p| parse_indices::<2>(p, n)).collect::<Result<_>>()?
    };
    if radial < 8 || theta < 4 {
        return Err(CliError::Input("quadrature needs radial ≥ 8 and theta ≥ 4".into()));
    }
    let quad = DipoleQuadrature { radial, theta, tol: c.eps };
    let place = |i: usize| PlacedOrbital { bf: mol.basis[i], center: mol.position_of(&mol.basis[i]) };
    let t = Instant::now();
    let mut rows = Vec::new();
    for [i, j] in pair_list {
        let tensor = dipole_tensor(&place(i), &place(j), &pos, &quad)?;
        let re: Vec<Vec<f64>> = tensor.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        let im: Vec<Vec<f64>> = tensor.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
        let mut row = json!({ "label": format!("{},{}", i + 1, j + 1), "real": matrix(re.clone(), "bohr^-1"), "imag": matrix(im, "bohr^-1") });
        if let Some(r) = &rot {
            // Rᵀ T R expresses the tensor in the input frame.
            let back: Vec<Vec<f64>> = (0..3)
                .map(|a| {
                    (0..3)
                        .map(|b| {
                            let mut s = 0.0;
                            for p in 0..3 {
                                for q in 0..3 {
                                    s += r[(p, a)] * re[p][q] * r[(q, b)];
                                }
                            }
                            s
                        })
                        .collect()
                })
                .collect();
            row["real_input_frame"] = matrix(back, "bohr^-1");
        }
        rows.push(row);
    }
    report.time("dipole", t);
    report.insert("nucleus", json!(nucleus));
    report.insert("axes", json!(["x", "y", "z"]));
    if let Some(r) = &rot {
        report.insert("rotation", matrix((0..3).map(|a| (0..3).map(|b| r[(a, b)]).collect()).collect(), "dimensionless"));
    }
    report.insert("tensors", Value::Array(rows));
    Ok(report)
}
