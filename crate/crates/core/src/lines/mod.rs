//! The 27 lines of a cubic surface and their combinatorics.
//!
//! Lines are found on the chart `x = a·z + b·w, y = c·z + d·w` after a seeded
//! random integer coordinate change, as the 27 solutions of the four
//! coefficient equations in `(a, b, c, d)`.

mod combinatorics;
pub mod geom;

use num_complex::{Complex, Complex64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{CubicForm, ProjTransform};
use crate::numeric::{cx, refine, total_degree_solve, ComplexPoly, Dd, PathStats, PolySystem, Real, SolverError, TrackerConfig};

pub use combinatorics::{
    double_sixes, eckardt_points, incidence_graph, real_line_census, tritangent_planes, DoubleSix, EckardtPoint,
    IncidenceGraph, RealCensus, TritangentPlane,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineConfig {
    pub tracker: TrackerConfig,
    /// Threshold on `|pairing|` of unit Plücker vectors for "meets".
    pub incidence_tol: f64,
    /// Threshold on the relative size of the restricted binary cubic.
    pub restriction_tol: f64,
    /// Threshold on imaginary parts of phase-normalized Plücker vectors.
    pub reality_tol: f64,
    pub coplanarity_tol: f64,
    pub concurrency_tol: f64,
    /// Entry bound of the random integer coordinate change.
    pub transform_bound: i64,
    /// Coordinate changes tried while fewer than 27 lines are visible.
    pub attempts: usize,
}

impl Default for LineConfig {
    fn default() -> Self {
        Self {
            tracker: TrackerConfig {
                failure_budget: 81,
                ..TrackerConfig::default()
            },
            incidence_tol: 1e-7,
            restriction_tol: 1e-8,
            reality_tol: 1e-7,
            coplanarity_tol: 1e-6,
            concurrency_tol: 1e-6,
            transform_bound: 30,
            attempts: 3,
        }
    }
}

impl LineConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut c = Self::default();
        c.tracker.seed = seed;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinesError {
    #[error("fewer than 27 lines found: {found} (paths: {stats:?})")]
    FewerLines { found: usize, stats: PathStats },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("incidence of lines {0} and {1} is ambiguous (pairing {2:e}) even in extended precision")]
    AmbiguousIncidence(usize, usize, f64),
    #[error("incidence graph is not 10-regular (degrees {0:?}); suspect numerics")]
    NotRegular(Vec<usize>),
    #[error("lines {0:?} pairwise meet but are not coplanar (ratio {1:e})")]
    NonCoplanar([usize; 3], f64),
    #[error("expected 45 tritangent planes, found {0}")]
    PlaneCount(usize),
    #[error("expected 36 double-sixes, found {0}")]
    DoubleSixCount(usize),
    #[error("concurrency of the lines in plane {0} is ambiguous (distance {1:e})")]
    AmbiguousConcurrency(usize, f64),
    #[error("reality of line {0} is ambiguous (imaginary part {1:e})")]
    AmbiguousReality(usize, f64),
    #[error("line {0} has no complex-conjugate partner")]
    UnpairedLine(usize),
}

/// A line in `P³`: an orthonormal spanning pair and its unit Plücker vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Line {
    pub span: [[Complex64; 4]; 2],
    pub pluecker: [Complex64; 6],
    pub is_real: bool,
    /// Largest imaginary part of the phase-normalized Plücker vector.
    pub imaginary_part: f64,
    /// Relative size of the restriction of the surface to the line (0 when unset).
    pub restriction_residual: f64,
    pub solver_residual: f64,
    pub singular: bool,
    #[serde(skip)]
    chart: Option<[Complex64; 4]>,
}

impl Line {
    pub fn through(p: &[Complex64; 4], q: &[Complex64; 4], reality_tol: f64) -> Self {
        let (u, v) = geom::orthonormalize(p, q);
        let pl = geom::normalize_phase(geom::pluecker(&u, &v));
        let imaginary_part = pl.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        Self {
            span: [u, v],
            pluecker: pl,
            is_real: imaginary_part <= reality_tol,
            imaginary_part,
            restriction_residual: 0.0,
            solver_residual: 0.0,
            singular: false,
            chart: None,
        }
    }

    /// Plücker quadric residual.
    pub fn quadric_residual(&self) -> f64 {
        geom::quadric(&self.pluecker).norm()
    }

    /// Distance between the stored Plücker vector and the one recomputed from the span.
    pub fn consistency_residual(&self) -> f64 {
        let p = geom::normalize_phase(geom::pluecker(&self.span[0], &self.span[1]));
        p.iter().zip(&self.pluecker).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn canonical_key(&self) -> [i64; 12] {
        std::array::from_fn(|k| {
            let z = self.pluecker[k / 2];
            let v = if k % 2 == 0 { z.re } else { z.im };
            (v * 1e8).round() as i64
        })
    }
}

/// Outcome of [`meets`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Incidence {
    Meet,
    Skew,
    /// Pairing within ten times the tolerance: needs a higher-precision recheck.
    Ambiguous(f64),
}

pub fn meets(l1: &Line, l2: &Line, tol: f64) -> Incidence {
    classify_pairing(geom::pairing(&l1.pluecker, &l2.pluecker).norm(), tol)
}

fn classify_pairing(v: f64, tol: f64) -> Incidence {
    if v <= tol {
        Incidence::Meet
    } else if v >= 10.0 * tol {
        Incidence::Skew
    } else {
        Incidence::Ambiguous(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSet27 {
    pub lines: Vec<Line>,
    pub surface: CubicForm,
    pub seed: u64,
    pub stats: PathStats,
    pub max_restriction_residual: f64,
    pub max_solver_residual: f64,
    /// Any chart solution was flagged singular (surface likely singular).
    pub singular_solutions: bool,
    /// Chart solutions discarded because the line is not on the surface.
    pub rejected: usize,
    /// Coordinate changes tried.
    pub attempts: usize,
    #[serde(skip)]
    chart_system: PolySystem,
    #[serde(skip)]
    transform: [[Complex64; 4]; 4],
    #[serde(skip)]
    config: LineConfig,
}

/// A line recomputed in double-double precision.
pub(crate) struct LineDd {
    pub span: [geom::Vec4<Dd>; 2],
    pub pluecker: geom::Pl<Dd>,
}

impl LineSet27 {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.lines.len() == 27
    }

    pub fn config(&self) -> &LineConfig {
        &self.config
    }

    pub(crate) fn require_complete(&self) -> Result<(), LinesError> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(LinesError::FewerLines {
                found: self.lines.len(),
                stats: self.stats.clone(),
            })
        }
    }

    /// Line `i` recomputed by Newton refinement in double-double arithmetic.
    pub(crate) fn extended(&self, i: usize) -> Option<LineDd> {
        let start: Vec<Complex<Dd>> = self.lines[i].chart?.iter().map(|z| cx(*z)).collect();
        let r = refine(&start, &self.chart_system, 12, 1e-28);
        let (p, q) = chart_points(&r.point, &self.transform);
        let (u, v) = geom::orthonormalize(&p, &q);
        let pl = geom::normalize_phase(geom::pluecker(&u, &v));
        Some(LineDd { span: [u, v], pluecker: pl })
    }
}

/// The binary cubic `f(s·p + t·q)` has coefficients recovered from its values
/// at `t/s ∈ {1, i, −1, −i}`; returns their largest modulus over `Σ|cᵢ|`.
pub fn restriction_residual(f: &CubicForm, p: &[Complex64; 4], q: &[Complex64; 4]) -> f64 {
    let roots = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];
    let vals: Vec<Complex64> = roots
        .iter()
        .map(|r| f.eval_complex(&std::array::from_fn(|i| p[i] + r * q[i])))
        .collect();
    let scale: f64 = f.to_complex().iter().map(|c| c.norm()).sum();
    (0..4)
        .map(|j| {
            let c: Complex64 = (0..4).map(|k| vals[k] * roots[(4 - (j * k) % 4) % 4]).sum::<Complex64>() / 4.0;
            c.norm()
        })
        .fold(0.0, f64::max)
        / scale
}

fn chart_points<R: Real>(abcd: &[Complex<R>], t: &[[Complex64; 4]; 4]) -> (geom::Vec4<R>, geom::Vec4<R>) {
    let zero = Complex::new(R::zero(), R::zero());
    let one = Complex::new(R::one(), R::zero());
    let p0 = [abcd[0], abcd[2], one, zero];
    let q0 = [abcd[1], abcd[3], zero, one];
    let apply = |v: &geom::Vec4<R>| -> geom::Vec4<R> {
        std::array::from_fn(|i| (0..4).fold(zero, |s, j| s + cx::<R>(t[i][j]) * v[j]))
    };
    (apply(&p0), apply(&q0))
}

/// Coefficients of `z³, z²w, zw², w³` in `g(a z + b w, c z + d w, z, w)`,
/// as polynomials in `(a, b, c, d)`.
fn chart_equations(g: &CubicForm) -> Vec<ComplexPoly> {
    let n = 6;
    let var = |i| ComplexPoly::var(n, i);
    let images = [
        var(0).mul(&var(4)).add(&var(1).mul(&var(5))),
        var(2).mul(&var(4)).add(&var(3).mul(&var(5))),
        var(4),
        var(5),
    ];
    let gp = ComplexPoly::from_multipoly(&g.to_poly());
    let sub = gp.compose(&images);
    (0..4)
        .map(|k| {
            let terms = sub
                .terms()
                .iter()
                .filter(|(e, _)| e[4] == 3 - k && e[5] == k)
                .map(|(e, c)| (e[..4].to_vec(), *c));
            ComplexPoly::from_terms(4, terms)
        })
        .collect()
}

/// Computes the lines on `f`. Never refuses: a singular or degenerate surface
/// yields fewer lines, with the path statistics and flags recording why.
///
/// A line meeting the centre `{z = w = 0}` of the chart is invisible; when
/// fewer than 27 lines are found another random coordinate change is tried,
/// up to `cfg.attempts` in total, keeping the attempt with the most lines.
pub fn find_lines(f: &CubicForm, cfg: &LineConfig) -> Result<LineSet27, LinesError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.tracker.seed ^ 0x4c49_4e45_5300);
    let mut best: Option<LineSet27> = None;
    for attempt in 1..=cfg.attempts.max(1) {
        let t = ProjTransform::random_integer(&mut rng, cfg.transform_bound);
        let mut set = lines_in_chart(f, &t, cfg)?;
        set.attempts = attempt;
        let done = set.is_complete();
        if best.as_ref().is_none_or(|b| set.len() > b.len()) {
            best = Some(set);
        }
        if done {
            break;
        }
    }
    Ok(best.expect("at least one attempt"))
}

fn lines_in_chart(f: &CubicForm, t: &ProjTransform, cfg: &LineConfig) -> Result<LineSet27, LinesError> {
    let g = f.act(t);
    let system = PolySystem::new(4, chart_equations(&g));
    let tc = t.to_complex();
    let set = total_degree_solve(&system, &cfg.tracker)?;

    let mut lines: Vec<Line> = set
        .solutions
        .iter()
        .map(|s| {
            let (p, q) = chart_points(&s.point, &tc);
            let mut line = Line::through(&p, &q, cfg.reality_tol);
            line.restriction_residual = restriction_residual(f, &line.span[0], &line.span[1]);
            line.solver_residual = s.residual;
            line.singular = s.singular;
            line.chart = Some([s.point[0], s.point[1], s.point[2], s.point[3]]);
            line
        })
        .collect();
    let before = lines.len();
    lines.retain(|l| l.restriction_residual <= cfg.restriction_tol);
    let rejected = before - lines.len();
    lines.sort_by_key(Line::canonical_key);
    let fold = |g: fn(&Line) -> f64| lines.iter().map(g).fold(0.0, f64::max);
    Ok(LineSet27 {
        max_restriction_residual: fold(|l| l.restriction_residual),
        max_solver_residual: fold(|l| l.solver_residual),
        singular_solutions: lines.iter().any(|l| l.singular),
        rejected,
        attempts: 1,
        lines,
        surface: f.clone(),
        seed: cfg.tracker.seed,
        stats: set.stats,
        chart_system: system.normalized(),
        transform: tc,
        config: cfg.clone(),
    })
}
