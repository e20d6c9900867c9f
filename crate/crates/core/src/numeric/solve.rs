use std::f64::consts::TAU;

use num_complex::{Complex, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::{ComplexPoly, PolySystem};
use super::scalar::{cabs, cx, to_c64, Dd, Real};
use super::tracker::{newton, point_norm, Homotopy, Refined, StepParams, TrackOutcome};
use super::SolverError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub seed: u64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Relative corrector tolerance while tracking.
    pub track_tol: f64,
    /// Residual (relative backward error) every reported solution must meet.
    pub newton_tol: f64,
    pub max_corrector_iters: usize,
    pub max_refine_iters: usize,
    pub max_steps: usize,
    /// Affine points larger than this are treated as solutions at infinity.
    pub divergence_bound: f64,
    pub dedup_distance: f64,
    /// Number of paths allowed to fail (neither converge nor diverge).
    pub failure_budget: usize,
    /// Retry flagged paths in double-double arithmetic.
    pub extended_retry: bool,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            initial_step: 0.01,
            min_step: 1e-13,
            max_step: 0.05,
            track_tol: 1e-9,
            newton_tol: 1e-10,
            max_corrector_iters: 3,
            max_refine_iters: 40,
            max_steps: 20_000,
            divergence_bound: 1e8,
            dedup_distance: 1e-6,
            failure_budget: 0,
            extended_retry: true,
        }
    }
}

impl TrackerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = [
            self.initial_step,
            self.min_step,
            self.max_step,
            self.track_tol,
            self.newton_tol,
            self.divergence_bound,
            self.dedup_distance,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || self.max_refine_iters == 0 {
            return Err(SolverError::InvalidConfig("tolerances and step bounds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub point: Vec<Complex64>,
    pub residual: f64,
    pub condition: f64,
    pub singular: bool,
    /// Another reported solution lies within `sqrt(dedup_distance)`.
    pub near_multiple: bool,
    /// Obtained from the double-double retry.
    pub extended: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathStats {
    pub tracked: usize,
    pub converged: usize,
    pub diverged: usize,
    pub failed: usize,
    pub deduplicated: usize,
    pub retried: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSet {
    pub solutions: Vec<Solution>,
    pub stats: PathStats,
    pub seed: u64,
    pub config: TrackerConfig,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &[Complex64]> {
        self.solutions.iter().map(|s| s.point.as_slice())
    }
}

enum Endpoint {
    Finite(Solution),
    Infinite,
    Failed,
}

fn relative_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    d / point_norm(a).max(point_norm(b)).max(1.0)
}

/// Sort key that makes solution order independent of path scheduling.
fn canonical_key(p: &[Complex64]) -> Vec<i64> {
    p.iter()
        .flat_map(|z| [z.re, z.im])
        .map(|v| (v * 1e8).round().clamp(-9e18, 9e18) as i64)
        .collect()
}

/// Largest relative distance Newton may move a tracked endpoint.
const MAX_REFINE_MOVE: f64 = 1e-4;

struct Solver<'a> {
    affine: PolySystem,
    homotopy: Homotopy,
    cfg: &'a TrackerConfig,
}

impl Solver<'_> {
    fn params<R: Real>(&self) -> StepParams {
        let extended = R::EPS < f64::EPSILON;
        StepParams {
            initial_step: self.cfg.initial_step,
            min_step: if extended { self.cfg.min_step * 1e-3 } else { self.cfg.min_step },
            max_step: self.cfg.max_step,
            tol: if extended { self.cfg.track_tol * 1e-6 } else { self.cfg.track_tol },
            max_corrector_iters: self.cfg.max_corrector_iters,
            max_steps: if extended { 4 * self.cfg.max_steps } else { self.cfg.max_steps },
        }
    }

    fn run_path<R: Real>(&self, start: &[Complex64]) -> Endpoint {
        let x0: Vec<Complex<R>> = start.iter().map(|z| cx(*z)).collect();
        let end = match self.homotopy.track(x0, &self.params::<R>()) {
            TrackOutcome::Reached(x) => x,
            TrackOutcome::Stalled(x, t) if t > 0.9 => x,
            TrackOutcome::Stalled(..) => return Endpoint::Failed,
        };
        self.finish(&end)
    }

    fn finish<R: Real>(&self, big: &[Complex<R>]) -> Endpoint {
        let scale = point_norm(big);
        let h0 = to_c64(big[0]).norm();
        if !(scale.is_finite()) {
            return Endpoint::Failed;
        }
        if h0 <= 1e-14 * scale {
            return Endpoint::Infinite;
        }
        let affine: Vec<Complex<R>> = big[1..].iter().map(|v| *v / big[0]).collect();
        let r: Refined<R> = newton(&self.affine, &affine, self.cfg.max_refine_iters, self.cfg.newton_tol);
        let norm = point_norm(&r.point);
        if !norm.is_finite() || norm > self.cfg.divergence_bound {
            return Endpoint::Infinite;
        }
        // Refinement must polish the endpoint, not jump to another solution.
        let moved = r
            .point
            .iter()
            .zip(&affine)
            .map(|(a, b)| cabs(*a - *b).to_f64())
            .fold(0.0, f64::max)
            / point_norm(&affine).max(1.0);
        if r.converged && moved <= MAX_REFINE_MOVE {
            return Endpoint::Finite(Solution {
                point: r.point.iter().map(|v| to_c64(*v)).collect(),
                residual: r.residual,
                condition: r.condition,
                singular: r.singular,
                near_multiple: false,
                extended: R::EPS < f64::EPSILON,
            });
        }
        if h0 <= 1e-3 * scale {
            Endpoint::Infinite
        } else {
            Endpoint::Failed
        }
    }
}

/// Solves a square system by total-degree homotopy continuation.
///
/// Tracks `Π dᵢ` paths from `xᵢ^{dᵢ} = bᵢ` (random unit-modulus `bᵢ`) with a
/// random `γ`, in projective coordinates on a random affine patch. Paths ending
/// at infinity are counted as diverged; paths that stall or end singular are
/// retried once in double-double arithmetic.
pub fn total_degree_solve(system: &PolySystem, cfg: &TrackerConfig) -> Result<SolutionSet, SolverError> {
    cfg.validate()?;
    let n = system.nvars();
    if system.len() != n {
        return Err(SolverError::NotSquare {
            equations: system.len(),
            unknowns: n,
        });
    }
    let degrees = system.degrees();
    if n == 0 || degrees.contains(&0) {
        return Err(SolverError::ConstantEquation);
    }
    let affine = system.normalized();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gamma = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
    let b: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..TAU))).collect();
    let patch: Vec<Complex64> = (0..=n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();

    let target = PolySystem::new(
        n + 1,
        affine
            .equations()
            .iter()
            .zip(&degrees)
            .map(|(p, &d)| p.homogenize(d))
            .collect(),
    );
    let start = PolySystem::new(
        n + 1,
        (0..n)
            .map(|i| {
                let d = degrees[i];
                let mut e1 = vec![0; n + 1];
                e1[i + 1] = d;
                let mut e0 = vec![0; n + 1];
                e0[0] = d;
                ComplexPoly::from_terms(n + 1, [(e1, Complex64::new(1.0, 0.0)), (e0, -b[i])])
            })
            .collect(),
    );

    let total: usize = degrees.iter().map(|&d| d as usize).product();
    let starts: Vec<Vec<Complex64>> = (0..total)
        .map(|mut k| {
            let mut x = vec![Complex64::new(1.0, 0.0)];
            for i in 0..n {
                let d = degrees[i] as usize;
                let j = k % d;
                k /= d;
                let root = Complex64::from_polar(1.0, (b[i].arg() + TAU * j as f64) / d as f64);
                x.push(root);
            }
            let s: Complex64 = x.iter().zip(&patch).map(|(a, b)| a * b).sum();
            x.into_iter().map(|v| v / s).collect()
        })
        .collect();

    let solver = Solver {
        affine,
        homotopy: Homotopy {
            target,
            start,
            gamma,
            patch,
        },
        cfg,
    };

    let outcomes: Vec<(Endpoint, bool)> = starts
        .par_iter()
        .map(|s| {
            let first = solver.run_path::<f64>(s);
            let flagged = match &first {
                Endpoint::Failed => true,
                Endpoint::Finite(sol) => sol.singular,
                Endpoint::Infinite => false,
            };
            if flagged && cfg.extended_retry {
                let second = solver.run_path::<Dd>(s);
                let better = match (&first, &second) {
                    (_, Endpoint::Finite(s2)) => !s2.singular || !matches!(first, Endpoint::Finite(_)),
                    (Endpoint::Failed, Endpoint::Infinite) => true,
                    _ => false,
                };
                (if better { second } else { first }, true)
            } else {
                (first, false)
            }
        })
        .collect();

    let mut stats = PathStats {
        tracked: total,
        ..PathStats::default()
    };
    let mut found = Vec::new();
    for (endpoint, retried) in outcomes {
        stats.retried += usize::from(retried);
        match endpoint {
            Endpoint::Finite(s) => {
                stats.converged += 1;
                found.push(s);
            }
            Endpoint::Infinite => stats.diverged += 1,
            Endpoint::Failed => stats.failed += 1,
        }
    }
    if stats.failed > cfg.failure_budget {
        return Err(SolverError::PathFailures {
            failed: stats.failed,
            diverged: stats.diverged,
            tracked: stats.tracked,
        });
    }
    let solutions = deduplicate(found, cfg.dedup_distance, &mut stats);
    Ok(SolutionSet {
        solutions,
        stats,
        seed: cfg.seed,
        config: cfg.clone(),
    })
}

fn deduplicate(mut found: Vec<Solution>, dist: f64, stats: &mut PathStats) -> Vec<Solution> {
    found.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then_with(|| canonical_key(&a.point).cmp(&canonical_key(&b.point)))
    });
    let mut kept: Vec<Solution> = Vec::new();
    for s in found {
        if kept.iter().any(|k| relative_distance(&k.point, &s.point) <= dist) {
            stats.deduplicated += 1;
        } else {
            kept.push(s);
        }
    }
    let near = dist.sqrt();
    let flags: Vec<bool> = (0..kept.len())
        .map(|i| (0..kept.len()).any(|j| j != i && relative_distance(&kept[i].point, &kept[j].point) <= near))
        .collect();
    for (s, f) in kept.iter_mut().zip(flags) {
        s.near_multiple = f;
    }
    kept.sort_by_key(|s| canonical_key(&s.point));
    kept
}

/// Newton refinement of `point` on a square system in the precision `R`.
pub fn refine<R: Real>(point: &[Complex<R>], system: &PolySystem, iterations: usize, tol: f64) -> Refined<R> {
    newton(system, point, iterations, tol)
}

/// A square system of random linear combinations of an overdetermined one,
/// together with the original equations for filtering.
#[derive(Clone, Debug)]
pub struct SquaredSystem {
    pub square: PolySystem,
    pub original: PolySystem,
    pub tol: f64,
}

impl SquaredSystem {
    /// Whether `x` satisfies every original equation to tolerance.
    pub fn accepts(&self, x: &[Complex64]) -> bool {
        self.original.residual(x) <= self.tol
    }

    /// Keeps only true solutions of the original system; residuals are
    /// re-measured against the original equations.
    pub fn filter(&self, mut set: SolutionSet) -> SolutionSet {
        let before = set.solutions.len();
        set.solutions.retain(|s| self.accepts(&s.point));
        for s in &mut set.solutions {
            s.residual = s.residual.max(self.original.residual(&s.point));
        }
        debug_assert!(set.solutions.len() <= before);
        set
    }
}

/// Squares up `m >= n` equations in `n` unknowns to `n` random complex
/// combinations. With `m == n` the system is returned unchanged.
pub fn square_up(system: &PolySystem, seed: u64, tol: f64) -> SquaredSystem {
    let n = system.nvars();
    let m = system.len();
    assert!(m >= n, "square_up needs at least as many equations as unknowns");
    let original = system.normalized();
    let square = if m == n {
        original.clone()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157_4152_4555_5000);
        PolySystem::new(
            n,
            (0..n)
                .map(|_| {
                    original.equations().iter().fold(ComplexPoly::zero(n), |acc, p| {
                        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        acc.add(&p.scale(c))
                    })
                })
                .collect(),
        )
    };
    SquaredSystem { square, original, tol }
}
