//! Predictor-corrector tracking of one homotopy path in projective coordinates.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use super::linalg::{norm_inf, Lu};
use super::poly::PolySystem;
use super::scalar::{cabs, cx, Real};

/// `H(X, t) = (1 − t)·γ·G(X) + t·F(X)` on the affine patch `a·X = 1`.
pub(crate) struct Homotopy {
    pub target: PolySystem,
    pub start: PolySystem,
    pub gamma: Complex64,
    pub patch: Vec<Complex64>,
}

pub(crate) struct StepParams {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub tol: f64,
    pub max_corrector_iters: usize,
    pub max_steps: usize,
}

pub(crate) enum TrackOutcome<R: Real> {
    /// Reached `t = 1` with a converged corrector.
    Reached(Vec<Complex<R>>),
    /// Step size collapsed or the step budget ran out at parameter `t`.
    Stalled(Vec<Complex<R>>, f64),
}

impl Homotopy {
    fn dim(&self) -> usize {
        self.patch.len()
    }

    /// Returns `H`, `∂H/∂X` (row-major) and `∂H/∂t`.
    fn eval<R: Real>(&self, x: &[Complex<R>], t: R) -> (Vec<Complex<R>>, Vec<Complex<R>>, Vec<Complex<R>>) {
        let n = self.dim();
        let (fv, fj) = self.target.eval_jacobian(x);
        let (gv, gj) = self.start.eval_jacobian(x);
        let g = cx::<R>(self.gamma);
        let s: Complex<R> = g * (R::one() - t);
        let tc = Complex::new(t, R::zero());
        let m = fv.len();
        let mut h = Vec::with_capacity(n);
        let mut ht = Vec::with_capacity(n);
        let mut hx = vec![Complex::zero(); n * n];
        for i in 0..m {
            h.push(s * gv[i] + tc * fv[i]);
            ht.push(fv[i] - g * gv[i]);
            for j in 0..n {
                hx[i * n + j] = s * gj[i * n + j] + tc * fj[i * n + j];
            }
        }
        let mut p = -Complex::<R>::one();
        for (j, a) in self.patch.iter().enumerate() {
            let a = cx::<R>(*a);
            p = p + a * x[j];
            hx[m * n + j] = a;
        }
        h.push(p);
        ht.push(Complex::zero());
        (h, hx, ht)
    }

    /// Tangent `dX/dt = −H_X⁻¹ H_t`.
    fn tangent<R: Real>(&self, x: &[Complex<R>], t: R) -> Option<Vec<Complex<R>>> {
        let (_, hx, ht) = self.eval(x, t);
        let lu = Lu::new(hx, self.dim())?;
        let neg: Vec<Complex<R>> = ht.into_iter().map(|v| -v).collect();
        Some(lu.solve(&neg))
    }

    fn correct<R: Real>(&self, x: &mut [Complex<R>], t: R, p: &StepParams) -> bool {
        let n = self.dim();
        let mut prev = f64::INFINITY;
        for _ in 0..p.max_corrector_iters {
            let (h, hx, _) = self.eval(x, t);
            let Some(lu) = Lu::new(hx, n) else {
                return false;
            };
            let neg: Vec<Complex<R>> = h.into_iter().map(|v| -v).collect();
            let dx = lu.solve(&neg);
            for (xi, d) in x.iter_mut().zip(&dx) {
                *xi = *xi + *d;
            }
            let size = norm_inf(x).to_f64().max(1.0);
            let step = norm_inf(&dx).to_f64() / size;
            if !step.is_finite() || step > 0.5 * prev || step > 0.1 {
                return false;
            }
            if step <= p.tol {
                return true;
            }
            prev = step;
        }
        false
    }

    pub fn track<R: Real>(&self, start: Vec<Complex<R>>, p: &StepParams) -> TrackOutcome<R> {
        let n = self.dim();
        let mut x = start;
        let mut t = 0.0f64;
        let mut dt = p.initial_step;
        let mut streak = 0;
        for _ in 0..p.max_steps {
            if t >= 1.0 {
                return TrackOutcome::Reached(x);
            }
            let h = dt.min(1.0 - t);
            let Some(xp) = self.rk4(&x, t, h) else {
                dt *= 0.5;
                if dt < p.min_step {
                    return TrackOutcome::Stalled(x, t);
                }
                continue;
            };
            let mut xc = xp;
            let t_new = if h >= 1.0 - t { 1.0 } else { t + h };
            if self.correct(&mut xc, R::from_f64(t_new), p) {
                x = xc;
                t = t_new;
                streak += 1;
                if streak >= 3 {
                    dt = (dt * 2.0).min(p.max_step);
                    streak = 0;
                }
            } else {
                streak = 0;
                dt *= 0.5;
                if dt < p.min_step {
                    return TrackOutcome::Stalled(x, t);
                }
            }
            debug_assert_eq!(x.len(), n);
        }
        TrackOutcome::Stalled(x, t)
    }

    fn rk4<R: Real>(&self, x: &[Complex<R>], t: f64, h: f64) -> Option<Vec<Complex<R>>> {
        let hr = R::from_f64(h);
        let half = R::from_f64(h * 0.5);
        let tr = R::from_f64(t);
        let axpy = |a: R, k: &[Complex<R>]| -> Vec<Complex<R>> {
            x.iter().zip(k).map(|(xi, ki)| *xi + *ki * a).collect()
        };
        let k1 = self.tangent(x, tr)?;
        let k2 = self.tangent(&axpy(half, &k1), tr + half)?;
        let k3 = self.tangent(&axpy(half, &k2), tr + half)?;
        let k4 = self.tangent(&axpy(hr, &k3), tr + hr)?;
        let sixth = hr / R::from_f64(6.0);
        let two = R::from_f64(2.0);
        Some(
            x.iter()
                .enumerate()
                .map(|(i, xi)| *xi + (k1[i] + k2[i] * two + k3[i] * two + k4[i]) * sixth)
                .collect(),
        )
    }
}

/// Outcome of Newton refinement on a square system.
#[derive(Clone, Debug)]
pub struct Refined<R: Real> {
    pub point: Vec<Complex<R>>,
    pub residual: f64,
    /// `‖J_s⁻¹‖ · max(1, ‖x‖)` with rows of `J` scaled by the equation magnitudes.
    pub condition: f64,
    pub converged: bool,
    pub quadratic: bool,
    pub singular: bool,
    pub iterations: usize,
}

pub(crate) const SINGULAR_CONDITION: f64 = 1e8;

pub(crate) fn newton<R: Real>(sys: &PolySystem, start: &[Complex<R>], max_iters: usize, tol: f64) -> Refined<R> {
    let n = sys.nvars();
    assert_eq!(sys.len(), n, "Newton needs a square system");
    let mut x = start.to_vec();
    let floor = 64.0 * R::EPS;
    let mut steps: Vec<f64> = Vec::new();
    let mut singular = false;
    let mut iterations = 0;
    for _ in 0..max_iters {
        if sys.residual(&x) <= 4.0 * R::EPS {
            break;
        }
        let (f, j) = sys.eval_jacobian(&x);
        let Some(lu) = Lu::new(j, n) else {
            singular = true;
            break;
        };
        iterations += 1;
        let neg: Vec<Complex<R>> = f.into_iter().map(|v| -v).collect();
        let dx = lu.solve(&neg);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi = *xi + *d;
        }
        let size = norm_inf(&x).to_f64().max(1.0);
        let rel = norm_inf(&dx).to_f64() / size;
        if !rel.is_finite() {
            break;
        }
        steps.push(rel);
        if rel <= floor {
            break;
        }
    }
    let residual = sys.residual(&x);
    let condition = scaled_condition(sys, &x);
    let quadratic = steps
        .windows(2)
        .filter(|w| w[0] > 1e3 * floor && w[1] > floor && w[0] < 1e-2)
        .all(|w| w[1] <= 0.25 * w[0]);
    let converged = residual.is_finite() && residual <= tol;
    singular |= condition > SINGULAR_CONDITION || (converged && !quadratic);
    Refined {
        point: x,
        residual,
        condition,
        converged,
        quadratic,
        singular,
        iterations,
    }
}

pub(crate) fn scaled_condition<R: Real>(sys: &PolySystem, x: &[Complex<R>]) -> f64 {
    let n = sys.nvars();
    let (_, mut j) = sys.eval_jacobian(x);
    for (i, p) in sys.equations().iter().enumerate() {
        let s = p.eval_abs(x);
        if s > R::zero() {
            let inv = R::one() / s;
            for v in &mut j[i * n..(i + 1) * n] {
                *v = *v * inv;
            }
        }
    }
    match Lu::new(j, n) {
        Some(lu) => lu.inverse_norm_inf().to_f64() * norm_inf(x).to_f64().max(1.0),
        None => f64::INFINITY,
    }
}

pub(crate) fn point_norm<R: Real>(x: &[Complex<R>]) -> f64 {
    x.iter().map(|v| cabs(*v).to_f64()).fold(0.0, f64::max)
}
