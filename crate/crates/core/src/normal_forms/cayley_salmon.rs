use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use super::{complex_coeffs, fit, product_coefficients, NormalFormError};
use crate::algebra::CubicForm;
use crate::lines::TritangentPlane;

/// Expected number of trihedral pairs on a smooth cubic surface.
pub const TRIHEDRAL_PAIRS: usize = 120;

/// `f = λ·P₁P₂P₃ + μ·Q₁Q₂Q₃` for two triples of tritangent planes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CayleySalmonRep {
    pub p: [usize; 3],
    pub q: [usize; 3],
    pub lambda: Complex64,
    pub mu: Complex64,
    pub residual: f64,
    /// `grid[i][j]` is the line lying on `P_i` and `Q_j`.
    pub grid: [[usize; 3]; 3],
}

fn disjoint(a: &[usize; 3], b: &[usize; 3]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// All trihedral pairs of tritangent planes, validated by a two-term fit.
pub fn cayley_salmon_all(
    f: &CubicForm,
    planes: &[TritangentPlane],
    tol: f64,
) -> Result<Vec<CayleySalmonRep>, NormalFormError> {
    let n = planes.len();
    let target = complex_coeffs(f);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !disjoint(&planes[i].lines, &planes[j].lines) {
                continue;
            }
            for k in j + 1..n {
                if !disjoint(&planes[i].lines, &planes[k].lines) || !disjoint(&planes[j].lines, &planes[k].lines) {
                    continue;
                }
                let p = [i, j, k];
                // Planes meeting each P-plane in exactly one line.
                let transversal: Vec<usize> = (0..n)
                    .filter(|q| p.iter().all(|&pi| planes[pi].lines.iter().filter(|l| planes[*q].contains(**l)).count() == 1))
                    .collect();
                for (a, &q0) in transversal.iter().enumerate() {
                    for (b, &q1) in transversal.iter().enumerate().skip(a + 1) {
                        if !disjoint(&planes[q0].lines, &planes[q1].lines) {
                            continue;
                        }
                        for &q2 in &transversal[b + 1..] {
                            if !disjoint(&planes[q0].lines, &planes[q2].lines)
                                || !disjoint(&planes[q1].lines, &planes[q2].lines)
                            {
                                continue;
                            }
                            let q = [q0, q1, q2];
                            let key = if p < q { (p, q) } else { (q, p) };
                            if !seen.insert(key) {
                                continue;
                            }
                            if let Some(rep) = validate(planes, &target, key.0, key.1, tol) {
                                out.push(rep);
                            }
                        }
                    }
                }
            }
        }
    }
    if out.len() != TRIHEDRAL_PAIRS {
        return Err(NormalFormError::CayleySalmonCount(out.len()));
    }
    Ok(out)
}

fn validate(
    planes: &[TritangentPlane],
    target: &[Complex64; 20],
    p: [usize; 3],
    q: [usize; 3],
    tol: f64,
) -> Option<CayleySalmonRep> {
    let product = |t: [usize; 3]| product_coefficients(&planes[t[0]].plane, &planes[t[1]].plane, &planes[t[2]].plane);
    let (x, residual) = fit(&[product(p), product(q)], target);
    if residual >= tol {
        return None;
    }
    let grid = p.map(|pi| {
        q.map(|qj| {
            *planes[pi]
                .lines
                .iter()
                .find(|l| planes[qj].contains(**l))
                .expect("transversal plane shares a line")
        })
    });
    Some(CayleySalmonRep {
        p,
        q,
        lambda: x[0],
        mu: x[1],
        residual,
        grid,
    })
}
