//! Eigenpoints of a cubic form: fixed points of the gradient map `P³ ⇢ P³`.
//!
//! λ is reported for the representative `v` of unit norm whose first entry of
//! (nearly) maximal modulus is real and positive; then `λ = vᴴ·∇f(v)`.

use num_complex::{Complex, Complex64};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{CubicForm, CUBIC_MONOMIALS};
use crate::lines::geom::{hdot, norm, normalize_phase};
use crate::numeric::{
    cx, refine, square_up, total_degree_solve, Chart, ComplexPoly, Dd, PathStats, Real, SolverError,
    TrackerConfig,
};

/// Number of eigenpoints of a generic cubic form in four variables.
pub const GENERIC_COUNT: usize = 15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenConfig {
    pub tracker: TrackerConfig,
    /// Residual threshold against all six minors when filtering candidates.
    pub filter_tol: f64,
    /// Projective distance below which two eigenpoints count as near-coincident.
    pub multiplicity_distance: f64,
    pub reality_tol: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            tracker: TrackerConfig {
                failure_budget: 27,
                ..TrackerConfig::default()
            },
            filter_tol: 1e-8,
            multiplicity_distance: 1e-4,
            reality_tol: 1e-8,
        }
    }
}

impl EigenConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut c = Self::default();
        c.tracker.seed = seed;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("census requires real input")]
    ComplexInput,
    #[error("reality of eigenpoint {0} is ambiguous (imaginary part {1:e})")]
    AmbiguousReality(usize, f64),
    #[error("eigenpoint {0} has no complex-conjugate partner")]
    UnpairedPoint(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigenpoint {
    pub point: [Complex64; 4],
    pub lambda: Complex64,
    /// `‖∇f(v) − λv‖ / max(‖∇f(v)‖, Σ|cᵢ|·ε)` with `v` of unit norm.
    pub fixed_point_residual: f64,
    /// Residual against the six minors.
    pub residual: f64,
    pub is_real: bool,
    pub imaginary_part: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EigenFlags {
    /// Count differs from 15.
    pub non_generic: bool,
    /// Two eigenpoints lie within the multiplicity distance.
    pub near_eigendiscriminant: bool,
    /// Some candidate was singular or some path failed: the fixed locus is
    /// probably not finite.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenConfiguration {
    pub points: Vec<Eigenpoint>,
    pub real_input: bool,
    pub flags: EigenFlags,
    pub stats: PathStats,
    pub seed: u64,
    #[serde(skip)]
    extended: Vec<Option<[Complex<Dd>; 4]>>,
}

impl EigenConfiguration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn gradient_of(coeffs: &[Complex64; 20]) -> Vec<ComplexPoly> {
    let f = ComplexPoly::from_terms(4, CUBIC_MONOMIALS.iter().zip(coeffs).map(|(e, c)| (e.to_vec(), *c)));
    (0..4).map(|i| f.derivative(i)).collect()
}

fn minors(grad: &[ComplexPoly]) -> Vec<ComplexPoly> {
    let mut out = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            let xi = ComplexPoly::var(4, i);
            let xj = ComplexPoly::var(4, j);
            out.push(xi.mul(&grad[j]).sub(&xj.mul(&grad[i])));
        }
    }
    out
}

fn lift<R: Real>(chart: &Chart, t: &[Complex<R>]) -> [Complex<R>; 4] {
    std::array::from_fn(|i| {
        (0..3).fold(cx::<R>(chart.base[i]), |s, k| s + t[k] * cx::<R>(chart.dirs[k][i]))
    })
}

fn fixed_point<R: Real>(grad: &[ComplexPoly], v: &[Complex<R>; 4], floor: f64) -> (Complex<R>, f64) {
    let g: Vec<Complex<R>> = grad.iter().map(|p| p.eval(v)).collect();
    let lambda = hdot(v, &g);
    let r: Vec<Complex<R>> = (0..4).map(|i| g[i] - lambda * v[i]).collect();
    let scale = norm(&g).to_f64().max(floor);
    (lambda, norm(&r).to_f64() / scale)
}

/// Eigenpoints of a rational cubic.
pub fn eigenpoints(f: &CubicForm, cfg: &EigenConfig) -> Result<EigenConfiguration, EigenError> {
    let mut out = eigenpoints_complex(&f.to_complex(), cfg)?;
    out.real_input = true;
    Ok(out)
}

/// Eigenpoints of a cubic with complex coefficients, in the order of `CUBIC_MONOMIALS`.
pub fn eigenpoints_complex(coeffs: &[Complex64; 20], cfg: &EigenConfig) -> Result<EigenConfiguration, EigenError> {
    let seed = cfg.tracker.seed;
    let grad = gradient_of(coeffs);
    let chart = Chart::random(seed);
    let restricted = chart.restrict_system(&minors(&grad));
    let squared = square_up(&restricted, seed, cfg.filter_tol);
    let set = total_degree_solve(&squared.square, &cfg.tracker)?;
    let mut flags = EigenFlags {
        degenerate: set.stats.failed > 0,
        ..EigenFlags::default()
    };
    let stats = set.stats.clone();
    let kept = squared.filter(set);
    let floor = coeffs.iter().map(|c| c.norm()).sum::<f64>() * 1e-12;

    let mut points = Vec::with_capacity(kept.len());
    let mut extended = Vec::with_capacity(kept.len());
    for s in &kept.solutions {
        flags.degenerate |= s.singular;
        let v = normalize_phase(chart.lift(&s.point));
        let (lambda, fixed_point_residual) = fixed_point(&grad, &v, floor);
        let imaginary_part = v.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        points.push(Eigenpoint {
            point: v,
            lambda,
            fixed_point_residual,
            residual: s.residual,
            is_real: imaginary_part <= cfg.reality_tol,
            imaginary_part,
        });
        extended.push(if imaginary_part > cfg.reality_tol && imaginary_part < 10.0 * cfg.reality_tol {
            let start: Vec<Complex<Dd>> = s.point.iter().map(|z| cx(*z)).collect();
            let r = refine(&start, &squared.square, 12, 1e-28);
            Some(normalize_phase(lift(&chart, &r.point)))
        } else {
            None
        });
    }
    flags.non_generic = points.len() != GENERIC_COUNT;
    flags.near_eigendiscriminant = (0..points.len()).any(|i| {
        (i + 1..points.len()).any(|j| projective_distance(&points[i].point, &points[j].point) < cfg.multiplicity_distance)
    });
    Ok(EigenConfiguration {
        points,
        real_input: coeffs.iter().all(|c| c.im == 0.0),
        flags,
        stats,
        seed,
        extended,
    })
}

/// `sqrt(1 − |⟨p, q⟩|²)` for unit vectors.
pub fn projective_distance(p: &[Complex64; 4], q: &[Complex64; 4]) -> f64 {
    (1.0 - hdot(p, q).norm_sqr()).max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EigenCensus {
    pub real: usize,
    pub conjugate_pairs: usize,
}

/// Number of real eigenpoints; the remaining ones must pair up under conjugation.
pub fn eigen_real_census(config: &EigenConfiguration, tol: f64) -> Result<EigenCensus, EigenError> {
    if !config.real_input {
        return Err(EigenError::ComplexInput);
    }
    let mut real = Vec::with_capacity(config.len());
    for (i, p) in config.points.iter().enumerate() {
        let mut im = p.imaginary_part;
        if im > tol && im < 10.0 * tol {
            im = match &config.extended[i] {
                Some(v) => v.iter().map(|z| z.im.to_f64().abs()).fold(0.0, f64::max),
                None => return Err(EigenError::AmbiguousReality(i, im)),
            };
            if im > tol && im < 10.0 * tol {
                return Err(EigenError::AmbiguousReality(i, im));
            }
        }
        real.push(im <= tol);
    }
    let mut used = vec![false; config.len()];
    let mut pairs = 0;
    for i in 0..config.len() {
        if real[i] || used[i] {
            continue;
        }
        let conj = config.points[i].point.map(|z| z.conj());
        let partner = (0..config.len())
            .filter(|&j| j != i && !real[j] && !used[j])
            .map(|j| (j, projective_distance(&config.points[j].point, &conj)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, d)) if d < 1e-6 => {
                used[i] = true;
                used[j] = true;
                pairs += 1;
            }
            _ => return Err(EigenError::UnpairedPoint(i)),
        }
    }
    Ok(EigenCensus {
        real: real.iter().filter(|&&r| r).count(),
        conjugate_pairs: pairs,
    })
}
