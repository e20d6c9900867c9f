use std::collections::BTreeMap;

use num_complex::{Complex, Complex64};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::scalar::{cabs, cx, Real};
use crate::algebra::MultiPoly;

/// Sparse polynomial in `n` variables with complex coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl ComplexPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, [(e, Complex64::new(1.0, 0.0))])
    }

    /// Collects like terms and drops exact zeros. Terms end up sorted by
    /// exponent vector so equal polynomials compare equal.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Complex64)>>(nvars: usize, terms: I) -> Self {
        let mut map: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            *map.entry(e).or_insert_with(Complex64::zero) += c;
        }
        Self {
            nvars,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_multipoly(p: &MultiPoly) -> Self {
        Self::from_terms(
            4,
            p.terms().map(|(m, c)| {
                (m.0.to_vec(), Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            }),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.im == 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        Self::from_terms(self.nvars, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.push((e, c1 * c2));
            }
        }
        Self::from_terms(self.nvars, out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * f64::from(e[i]))
            }),
        )
    }

    /// Substitutes variable `i` by `images[i]` (all images share one variable count).
    pub fn compose(&self, images: &[ComplexPoly]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let m = images.first().map_or(0, |p| p.nvars);
        let max_e = self.terms.iter().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<ComplexPoly>> = images
            .iter()
            .map(|p| {
                let mut v = vec![Self::constant(m, Complex64::new(1.0, 0.0))];
                for k in 1..=max_e as usize {
                    let next = v[k - 1].mul(p);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, *c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out.extend(t.terms);
        }
        Self::from_terms(m, out)
    }

    pub fn eval<R: Real>(&self, x: &[Complex<R>]) -> Complex<R> {
        let mut acc = Complex::<R>::zero();
        for (e, c) in &self.terms {
            let mut t = cx::<R>(*c);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t * xi.powu(k);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// `Σ |c_k| · ρ^{|α_k|}` with `ρ = max(1, ‖x‖∞)`, the natural scale of the
    /// value at `x`. Using the norm rather than `|x^{α_k}|` keeps the scale
    /// honest when a coordinate common to every term tends to zero.
    pub fn eval_abs<R: Real>(&self, x: &[Complex<R>]) -> R {
        let rho = x.iter().map(|v| cabs(*v)).fold(R::one(), |m, a| if a > m { a } else { m });
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut t = R::from_f64(c.norm());
            for _ in 0..e.iter().sum::<u32>() {
                t = t * rho;
            }
            acc = acc + t;
        }
        acc
    }

    /// Value and gradient at `x`.
    pub fn eval_with_gradient<R: Real>(&self, x: &[Complex<R>], grad: &mut [Complex<R>]) -> Complex<R> {
        for g in grad.iter_mut() {
            *g = Complex::zero();
        }
        let mut acc = Complex::<R>::zero();
        let n = self.nvars;
        let mut pw = vec![Complex::<R>::zero(); n];
        for (e, c) in &self.terms {
            let cc = cx::<R>(*c);
            for i in 0..n {
                pw[i] = if e[i] > 0 { x[i].powu(e[i] - 1) } else { Complex::zero() };
            }
            let mut full = cc;
            for i in 0..n {
                if e[i] > 0 {
                    full = full * pw[i] * x[i];
                }
            }
            acc = acc + full;
            for (i, g) in grad.iter_mut().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                let mut d = cc * R::from_f64(f64::from(e[i])) * pw[i];
                for (j, &k) in e.iter().enumerate() {
                    if j != i && k > 0 {
                        d = d * pw[j] * x[j];
                    }
                }
                *g = *g + d;
            }
        }
        acc
    }

    /// Homogenizes to degree `d` with the new variable placed first.
    pub fn homogenize(&self, d: u32) -> Self {
        Self::from_terms(
            self.nvars + 1,
            self.terms.iter().map(|(e, c)| {
                let deg: u32 = e.iter().sum();
                let mut h = Vec::with_capacity(e.len() + 1);
                h.push(d - deg);
                h.extend_from_slice(e);
                (h, *c)
            }),
        )
    }
}

/// A list of polynomial equations in a common set of variables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolySystem {
    nvars: usize,
    equations: Vec<ComplexPoly>,
}

impl PolySystem {
    pub fn new(nvars: usize, equations: Vec<ComplexPoly>) -> Self {
        assert!(equations.iter().all(|p| p.nvars() == nvars), "equations must share variables");
        Self { nvars, equations }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn equations(&self) -> &[ComplexPoly] {
        &self.equations
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.equations.iter().map(ComplexPoly::degree).collect()
    }

    pub fn is_real(&self) -> bool {
        self.equations.iter().all(ComplexPoly::is_real)
    }

    /// Each equation divided by its largest coefficient modulus.
    pub fn normalized(&self) -> Self {
        Self::new(
            self.nvars,
            self.equations
                .iter()
                .map(|p| {
                    let s = p.max_abs_coeff();
                    if s > 0.0 {
                        p.scale(Complex64::new(1.0 / s, 0.0))
                    } else {
                        p.clone()
                    }
                })
                .collect(),
        )
    }

    pub fn eval<R: Real>(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        self.equations.iter().map(|p| p.eval(x)).collect()
    }

    /// Normwise relative backward error: `max_i |F_i(x)| / Σ_k |c_k| ρ^{|α_k|}`.
    pub fn residual<R: Real>(&self, x: &[Complex<R>]) -> f64 {
        self.equations
            .iter()
            .map(|p| {
                let v = cabs(p.eval(x)).to_f64();
                let s = p.eval_abs(x).to_f64();
                if s > 0.0 {
                    v / s
                } else {
                    v
                }
            })
            .fold(0.0, f64::max)
    }

    /// Values and row-major Jacobian.
    pub fn eval_jacobian<R: Real>(&self, x: &[Complex<R>]) -> (Vec<Complex<R>>, Vec<Complex<R>>) {
        let n = self.nvars;
        let mut jac = vec![Complex::zero(); self.equations.len() * n];
        let vals = self
            .equations
            .iter()
            .enumerate()
            .map(|(i, p)| p.eval_with_gradient(x, &mut jac[i * n..(i + 1) * n]))
            .collect();
        (vals, jac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gradient_matches_derivative() {
        let x = ComplexPoly::var(2, 0);
        let y = ComplexPoly::var(2, 1);
        let p = x.pow(3).mul(&y).add(&y.pow(2).scale(c(-2.0)));
        let pt = [Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5)];
        let mut g = [Complex64::zero(); 2];
        let v = p.eval_with_gradient(&pt, &mut g);
        assert!((v - p.eval(&pt)).norm() < 1e-14);
        for i in 0..2 {
            assert!((g[i] - p.derivative(i).eval(&pt)).norm() < 1e-13);
        }
    }

    #[test]
    fn compose_affine() {
        // p(u) = u^2, u = 1 + 2t
        let u = ComplexPoly::var(1, 0);
        let p = u.pow(2);
        let img = ComplexPoly::constant(1, c(1.0)).add(&ComplexPoly::var(1, 0).scale(c(2.0)));
        let q = p.compose(&[img]);
        let t = [Complex64::new(0.7, 0.1)];
        let expected = (Complex64::new(1.0, 0.0) + t[0] * 2.0).powu(2);
        assert!((q.eval(&t) - expected).norm() < 1e-14);
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn homogenize_places_new_variable_first() {
        let x = ComplexPoly::var(1, 0);
        let p = x.pow(2).sub(&ComplexPoly::constant(1, c(1.0)));
        let h = p.homogenize(2);
        assert_eq!(h.terms(), &[(vec![0, 2], c(1.0)), (vec![2, 0], c(-1.0))]);
    }
}
