//! Line-oriented geometry and basis input.
//!
//! ```text
//! # comment
//! center H1 0.0 0.0 0.0        # charge taken from the element prefix
//! center X  0.0 0.0 1.4 2.0    # explicit charge
//! basis  H1 sto 1 0 0 1.042999
//! basis  H1 sturmian 2 1 0 1.0
//! basis  H1 eto:-1 2 0 0 1.0   # generalized ETO with alpha = -1
//! ```

use std::collections::HashMap;

use super::{BasisFunction, Center, Molecule, OrbitalKind};
use crate::{BasisError, Real, Vec3};

const ELEMENTS: [&str; 18] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar",
];

/// Parse the text format above into a validated [`Molecule`].
pub fn parse_molecule(text: &str) -> Result<Molecule, BasisError> {
    let mut centers: Vec<Center> = Vec::new();
    let mut charges: Vec<Real> = Vec::new();
    let mut basis: Vec<BasisFunction> = Vec::new();
    let mut by_label: HashMap<String, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: String| BasisError::Syntax { line, message };
        match tokens[0] {
            "center" => {
                if tokens.len() != 5 && tokens.len() != 6 {
                    return Err(syntax(format!(
                        "expected `center <label> <x> <y> <z> [charge]`, found {} fields",
                        tokens.len()
                    )));
                }
                let label = tokens[1].to_string();
                if by_label.contains_key(&label) {
                    return Err(syntax(format!("duplicate center label `{label}`")));
                }
                let mut xyz = [0.0; 3];
                for (k, v) in xyz.iter_mut().enumerate() {
                    *v = parse_real(tokens[2 + k], line)?;
                    if !v.is_finite() {
                        return Err(syntax(format!("coordinate `{}` is not finite", tokens[2 + k])));
                    }
                }
                let charge = match tokens.get(5) {
                    Some(tok) => parse_real(tok, line)?,
                    None => element_charge(&label).ok_or_else(|| {
                        syntax(format!("cannot infer nuclear charge from label `{label}`; give it explicitly"))
                    })?,
                };
                if !(charge > 0.0) {
                    return Err(BasisError::Invalid { line, message: format!("nuclear charge {charge} must be > 0") });
                }
                by_label.insert(label.clone(), centers.len());
                centers.push(Center { label, position: Vec3::new(xyz[0], xyz[1], xyz[2]) });
                charges.push(charge);
            }
            "basis" => {
                if tokens.len() != 7 {
                    return Err(syntax(format!(
                        "expected `basis <center> <kind> <n> <l> <m> <zeta>`, found {} fields",
                        tokens.len()
                    )));
                }
                let center_index = *by_label
                    .get(tokens[1])
                    .ok_or_else(|| syntax(format!("unknown center `{}`", tokens[1])))?;
                let kind = parse_kind(tokens[2], line)?;
                let n = parse_int(tokens[3], line)?;
                let l = parse_int(tokens[4], line)?;
                let m = parse_int(tokens[5], line)?;
                let zeta = parse_real(tokens[6], line)?;
                let bf = BasisFunction::new(kind, n, l, m, zeta, center_index).map_err(|e| match e {
                    BasisError::Quantum(message) => BasisError::Invalid { line, message },
                    other => other,
                })?;
                if basis.iter().any(|b| same_function(b, &bf)) {
                    return Err(BasisError::Invalid { line, message: "duplicate basis entry".into() });
                }
                basis.push(bf);
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    Molecule::new(centers, charges, basis)
}

fn same_function(a: &BasisFunction, b: &BasisFunction) -> bool {
    a.kind == b.kind
        && (a.n, a.l, a.m, a.center_index) == (b.n, b.l, b.m, b.center_index)
        && a.zeta.to_bits() == b.zeta.to_bits()
}

fn parse_real(tok: &str, line: usize) -> Result<Real, BasisError> {
    tok.parse::<Real>()
        .map_err(|_| BasisError::Syntax { line, message: format!("`{tok}` is not a number") })
}

fn parse_int(tok: &str, line: usize) -> Result<i32, BasisError> {
    tok.parse::<i32>()
        .map_err(|_| BasisError::Syntax { line, message: format!("`{tok}` is not an integer") })
}

fn parse_kind(tok: &str, line: usize) -> Result<OrbitalKind, BasisError> {
    let lower = tok.to_ascii_lowercase();
    match lower.as_str() {
        "sto" => return Ok(OrbitalKind::Sto),
        "sturmian" => return Ok(OrbitalKind::Sturmian),
        _ => {}
    }
    let alpha = lower
        .strip_prefix("eto:")
        .or_else(|| lower.strip_prefix("geto:"))
        .ok_or_else(|| BasisError::Syntax {
            line,
            message: format!("unknown basis kind `{tok}` (expected sto, sturmian or eto:<alpha>)"),
        })?;
    match alpha.parse::<i32>() {
        Ok(a) => Ok(OrbitalKind::GeneralizedEto(a)),
        Err(_) if alpha.parse::<Real>().is_ok() => Err(BasisError::Invalid {
            line,
            message: format!("alpha = {alpha} must be an integer"),
        }),
        Err(_) => Err(BasisError::Syntax { line, message: format!("`{alpha}` is not a valid alpha") }),
    }
}

/// Nuclear charge from the alphabetic prefix of a label ("H1" → 1, "Cl2" → 17).
fn element_charge(label: &str) -> Option<Real> {
    let prefix: String = label.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
    let mut chars = prefix.chars();
    let first = chars.next()?.to_ascii_uppercase();
    let two = chars.next().map(|c| format!("{first}{}", c.to_ascii_lowercase()));
    let one = first.to_string();
    for cand in two.iter().chain(std::iter::once(&one)) {
        if let Some(pos) = ELEMENTS.iter().position(|e| e == cand) {
            return Some((pos + 1) as Real);
        }
    }
    None
}
