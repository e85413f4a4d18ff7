//! Published H₂ reference values and the orbital-label convention they use.
//!
//! Basis order is that of `data/h2.mol`: 1s, 1s′, 2s, 2s′ on Ha, then the
//! same four on Hb.

/// Bond length in bohr.
pub const H2_BOND: f64 = 1.402;

/// Exponents of the four functions on each center.
pub const EXPONENTS: [f64; 4] = [1.042999, 1.599999, 1.615000, 1.784059];

/// One-center Coulomb cells (row, column, value), 1-based, in table convention.
pub const TABLE1_OFF_DIAGONAL: [(usize, usize, f64); 3] = [(2, 1, 0.934309), (3, 1, 0.980141), (4, 3, 1.189241)];

/// Cell (1s_b1, 1s_a1), out of scale with its neighbours; reported, never compared.
pub const TABLE1_ANOMALOUS: (usize, usize, f64) = (5, 1, 3.455363);

pub const ATOMIC_EXCHANGE: [(&str, f64); 2] = [("1212", 0.720716), ("1313", 0.585172)];

pub const TWO_CENTER_EXCHANGE: [(&str, f64); 2] = [("1515", 0.319902), ("2525", 0.260034)];

/// Pairs of labels listed as equal.
pub const EXCHANGE_EQUALITIES: [(&str, &str); 6] =
    [("1516", "1525"), ("1517", "1535"), ("1518", "1545"), ("1527", "1536"), ("1528", "1547"), ("1538", "1548")];

pub const H2_ENERGY: f64 = -1.1284436;
pub const HF_LIMIT: f64 = -1.1336296;
pub const DIMER_ENERGY: f64 = -2.256998;
pub const INTERACTION_KCAL: f64 = -0.069;

/// Four 1-based digits d1d2d3d4 naming (d1 d4|d2 d3), as 0-based (i, j, k, l) of (ij|kl).
pub fn quartet(label: &str) -> Option<(usize, usize, usize, usize)> {
    let d: Vec<usize> = label.chars().map(|c| c.to_digit(10).map(|v| v as usize)).collect::<Option<_>>()?;
    match d[..] {
        [a, b, c, e] if d.iter().all(|&x| x >= 1) => Some((a - 1, e - 1, b - 1, c - 1)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::quartet;

    #[test]
    fn label_order() {
        assert_eq!(quartet("1212"), Some((0, 1, 1, 0)));
        assert_eq!(quartet("1525"), Some((0, 4, 4, 1)));
        assert_eq!(quartet("15"), None);
        assert_eq!(quartet("1025"), None);
    }
}
