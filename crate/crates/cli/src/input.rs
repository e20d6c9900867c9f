//! Cubic input from `--poly` or a coefficient file.

use cubic_core::algebra::{cubic_index, parse_poly, parse_rational};
use cubic_core::tropical::ValuationVector;
use cubic_core::{parse_cubic, CubicForm, Rational};
use num_traits::{One, Zero};
use serde_json::Value;

pub fn from_poly(text: &str) -> Result<CubicForm, String> {
    parse_cubic(text).map_err(|e| format!("invalid polynomial: {e}"))
}

/// A JSON array of 20 coefficients, or lines `name value` where `name` is a
/// cubic monomial (`x^2*y`, `xyz`) or `c1`..`c20`. Missing entries are zero.
pub fn from_coeff_file(text: &str) -> Result<CubicForm, String> {
    let coeffs = if text.trim_start().starts_with('[') {
        json_entries(text)?
            .iter()
            .map(|s| parse_rational(s).map_err(|e| format!("invalid coefficient {s:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        named_lines(text)?
    };
    let arr: [Rational; 20] = coeffs.try_into().map_err(|_| "expected 20 coefficients".to_string())?;
    CubicForm::new(arr).map_err(|e| e.to_string())
}

fn json_entries(text: &str) -> Result<Vec<String>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let items = v.as_array().ok_or("expected a JSON array")?;
    if items.len() != 20 {
        return Err(format!("expected 20 entries, got {}", items.len()));
    }
    items
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
            other => Err(format!("entry {other} is not an integer or a rational string")),
        })
        .collect()
}

fn slot(name: &str) -> Result<usize, String> {
    if let Some(k) = name.strip_prefix('c').and_then(|d| d.parse::<usize>().ok()) {
        return (1..=20).contains(&k).then(|| k - 1).ok_or(format!("no coefficient {name}"));
    }
    let p = parse_poly(name).map_err(|e| format!("invalid monomial {name:?}: {e}"))?;
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if c.is_one() => cubic_index(m.exponents()).ok_or(format!("{name:?} is not cubic")),
        _ => Err(format!("{name:?} is not a single monomial")),
    }
}

fn named_lines(text: &str) -> Result<Vec<Rational>, String> {
    let mut out = vec![Rational::zero(); 20];
    let mut seen = [false; 20];
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("expected `name value`, got {line:?}"));
        };
        let i = slot(name)?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(format!("coefficient {name} given twice"));
        }
        out[i] = parse_rational(value).map_err(|e| format!("invalid coefficient {value:?}: {e}"))?;
    }
    Ok(out)
}

/// 20 entries (rationals or `inf`), whitespace/comma separated or a JSON array.
pub fn valuation_file(text: &str) -> Result<ValuationVector, String> {
    let items: Vec<String> = if text.trim_start().starts_with('[') {
        json_entries(text)?
    } else {
        text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect()
    };
    ValuationVector::parse(&items).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_file() {
        let f = from_coeff_file("x^3 1\ny^3 1\n# comment\nz^3 1\nc4 1\n").unwrap();
        assert_eq!(f, CubicForm::fermat());
        assert!(from_coeff_file("x^3 1\nx^3 2").is_err());
        assert!(from_coeff_file("x^2 1").is_err());
        let g = from_coeff_file("xyz 1\nxyw 1\nxzw 1\nyzw 1").unwrap();
        assert_eq!(g, CubicForm::cayley_nodal());
    }

    #[test]
    fn json_file() {
        let mut v = vec!["0"; 20];
        v[..4].copy_from_slice(&["1", "1", "1", "1"]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(from_coeff_file(&text).unwrap(), CubicForm::fermat());
        assert!(from_coeff_file("[1, 2]").is_err());
        assert!(from_coeff_file("[1.5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]").is_err());
    }

    #[test]
    fn valuations() {
        let mut s = "inf ".repeat(16);
        s.push_str("0 1 1/2 -3");
        let v = valuation_file(&s).unwrap();
        assert_eq!(v.finite_indices(), vec![16, 17, 18, 19]);
    }
}
