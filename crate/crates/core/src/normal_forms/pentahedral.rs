use num_complex::Complex64;
use serde::Serialize;

use super::{complex_coeffs, fit, product_coefficients, NormalFormError};
use crate::algebra::CubicForm;
use crate::lines::geom::{norm, normalize_phase};
use crate::numeric::linalg::null_vector4;
use crate::numeric::{square_up, total_degree_solve, Chart, ComplexPoly, PathStats, TrackerConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PentaConfig {
    pub tracker: TrackerConfig,
    /// Residual against all four partials of the Hessian when filtering nodes.
    pub node_tol: f64,
    /// Normalized point-plane distance for plane membership.
    pub plane_tol: f64,
    pub residual_tol: f64,
}

impl Default for PentaConfig {
    fn default() -> Self {
        Self {
            tracker: TrackerConfig {
                failure_budget: 27,
                ..TrackerConfig::default()
            },
            node_tol: 1e-8,
            plane_tol: 1e-6,
            residual_tol: 1e-8,
        }
    }
}

impl PentaConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut c = Self::default();
        c.tracker.seed = seed;
        c
    }
}

/// `f = Σ aᵢ ℓᵢ³`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pentahedron {
    /// Linear forms with the first entry of maximal modulus equal to 1.
    pub forms: [[Complex64; 4]; 5],
    pub coefficients: [Complex64; 5],
    pub residual: f64,
    /// The ten Hessian nodes (unit norm, phase-normalized).
    pub nodes: Vec<[Complex64; 4]>,
    pub stats: PathStats,
}

impl Pentahedron {
    /// Coefficients of `Σ aᵢ ℓᵢ³`.
    pub fn reconstruct(&self) -> [Complex64; 20] {
        let mut out = [Complex64::new(0.0, 0.0); 20];
        for (l, a) in self.forms.iter().zip(&self.coefficients) {
            for (o, c) in out.iter_mut().zip(product_coefficients(l, l, l)) {
                *o += a * c;
            }
        }
        out
    }
}

fn normalize_form(v: [Complex64; 4]) -> [Complex64; 4] {
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = *v.iter().find(|z| z.norm() >= (1.0 - 1e-9) * m).expect("nonzero form");
    v.map(|z| z / lead)
}

fn plane_distance(plane: &[Complex64; 4], p: &[Complex64; 4]) -> f64 {
    let d: Complex64 = plane.iter().zip(p).map(|(a, b)| a * b).sum();
    d.norm() / (norm(plane) * norm(p))
}

fn hessian_nodes(f: &CubicForm, cfg: &PentaConfig) -> Result<(Vec<[Complex64; 4]>, bool, PathStats), NormalFormError> {
    let h = ComplexPoly::from_multipoly(&f.hessian_det());
    if h.is_zero() {
        return Ok((Vec::new(), true, PathStats::default()));
    }
    let grad: Vec<ComplexPoly> = (0..4).map(|i| h.derivative(i)).collect();
    if grad.iter().any(ComplexPoly::is_zero) {
        return Ok((Vec::new(), true, PathStats::default()));
    }
    let seed = cfg.tracker.seed;
    let chart = Chart::random(seed);
    let squared = square_up(&chart.restrict_system(&grad), seed, cfg.node_tol);
    let set = total_degree_solve(&squared.square, &cfg.tracker)?;
    let stats = set.stats.clone();
    let mut degenerate = stats.failed > 0;
    let kept = squared.filter(set);
    let mut nodes = Vec::with_capacity(kept.len());
    for s in &kept.solutions {
        degenerate |= s.singular;
        nodes.push(normalize_phase(chart.lift(&s.point)));
    }
    Ok((nodes, degenerate, stats))
}

/// The five planes each containing exactly six of the ten nodes.
fn group_planes(nodes: &[[Complex64; 4]], tol: f64) -> Vec<[Complex64; 4]> {
    let mut planes: Vec<([Complex64; 4], Vec<usize>)> = Vec::new();
    let n = nodes.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (v, s) = null_vector4(&[nodes[i], nodes[j], nodes[k]]);
                // Collinear triples do not determine a plane.
                if s[2] < 1e-6 * s[0] {
                    continue;
                }
                let on: Vec<usize> = (0..n).filter(|&p| plane_distance(&v, &nodes[p]) < tol).collect();
                if on.len() == 6 && !planes.iter().any(|(_, m)| *m == on) {
                    planes.push((v, on));
                }
            }
        }
    }
    planes.sort_by(|a, b| a.1.cmp(&b.1));
    planes.into_iter().map(|(v, _)| normalize_form(v)).collect()
}

/// Sylvester's pentahedral form via the ten nodes of the Hessian quartic.
pub fn pentahedral(f: &CubicForm, cfg: &PentaConfig) -> Result<Pentahedron, NormalFormError> {
    let (nodes, degenerate, stats) = hessian_nodes(f, cfg)?;
    if degenerate || nodes.len() != 10 {
        return Err(NormalFormError::HessianNodes {
            found: nodes.len(),
            degenerate,
        });
    }
    let forms = group_planes(&nodes, cfg.plane_tol);
    if forms.len() != 5 {
        return Err(NormalFormError::Grouping(forms.len()));
    }
    let basis: Vec<[Complex64; 20]> = forms.iter().map(|l| product_coefficients(l, l, l)).collect();
    let (a, residual) = fit(&basis, &complex_coeffs(f));
    if residual >= cfg.residual_tol {
        return Err(NormalFormError::Residual(residual));
    }
    Ok(Pentahedron {
        forms: [forms[0], forms[1], forms[2], forms[3], forms[4]],
        coefficients: [a[0], a[1], a[2], a[3], a[4]],
        residual,
        nodes,
        stats,
    })
}
