//! Classical normal forms: Sylvester's pentahedron, the Cayley–Salmon
//! trihedral pairs and the Brundu–Logar form.

mod brundu_logar;
mod cayley_salmon;
mod pentahedral;

pub use brundu_logar::{
    brundu_logar, brundu_logar_with, family_generators, reference_lset, BrunduLogarConfig, BrunduLogarResult, ReferenceLSet,
};
pub use cayley_salmon::{cayley_salmon_all, CayleySalmonRep, TRIHEDRAL_PAIRS};
pub use pentahedral::{pentahedral, PentaConfig, Pentahedron};

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{cubic_index, CubicForm};
use crate::lines::LinesError;
use crate::numeric::linalg::least_squares;
use crate::numeric::SolverError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormalFormError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Lines(#[from] LinesError),
    #[error("fewer than 10 Hessian nodes: found {found}{}", if *.degenerate { " (singular locus not isolated)" } else { "" })]
    HessianNodes { found: usize, degenerate: bool },
    #[error("coplanar grouping failed: {0} planes carry six nodes")]
    Grouping(usize),
    #[error("reconstruction residual {0:e} above tolerance")]
    Residual(f64),
    #[error("expected 120 Cayley-Salmon representations, found {0}")]
    CayleySalmonCount(usize),
    #[error("no L-set candidate produced a valid transform ({tested} tested of {candidates})")]
    NoValidTransform { tested: usize, candidates: usize },
    #[error("reference L-set bootstrap found {0} common lines")]
    Bootstrap(usize),
}

/// Coefficients (monomial order of `CubicForm`) of a product of three linear forms.
pub fn product_coefficients(a: &[Complex64; 4], b: &[Complex64; 4], c: &[Complex64; 4]) -> [Complex64; 20] {
    let mut out = [Complex64::new(0.0, 0.0); 20];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let mut e = [0u32; 4];
                e[i] += 1;
                e[j] += 1;
                e[k] += 1;
                out[cubic_index(e).expect("cubic monomial")] += a[i] * b[j] * c[k];
            }
        }
    }
    out
}

/// Coefficients of `f(T·X)` for a complex matrix `T`.
pub fn compose_complex(f: &[Complex64; 20], t: &[[Complex64; 4]; 4]) -> [Complex64; 20] {
    let mut out = [Complex64::new(0.0, 0.0); 20];
    for (e, c) in crate::algebra::CUBIC_MONOMIALS.iter().zip(f) {
        if c.norm() == 0.0 {
            continue;
        }
        // Expand c · Π (row_i · X)^{e_i} as a product of three linear forms.
        let rows: Vec<&[Complex64; 4]> = (0..4).flat_map(|i| std::iter::repeat_n(&t[i], e[i] as usize)).collect();
        let p = product_coefficients(rows[0], rows[1], rows[2]);
        for (o, v) in out.iter_mut().zip(p) {
            *o += c * v;
        }
    }
    out
}

/// Least-squares fit `target ≈ Σ xᵢ·basisᵢ`; residual is the largest
/// coefficient error over the largest target coefficient.
pub(crate) fn fit(basis: &[[Complex64; 20]], target: &[Complex64; 20]) -> (Vec<Complex64>, f64) {
    let a: Vec<Vec<Complex64>> = (0..20).map(|r| basis.iter().map(|b| b[r]).collect()).collect();
    let (x, _) = least_squares(&a, target);
    let scale = target.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let err = (0..20)
        .map(|r| (basis.iter().zip(&x).map(|(b, xi)| b[r] * xi).sum::<Complex64>() - target[r]).norm())
        .fold(0.0, f64::max);
    (x, err / scale)
}

pub(crate) fn complex_coeffs(f: &CubicForm) -> [Complex64; 20] {
    f.to_complex()
}
