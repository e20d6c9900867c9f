//! Exact resultant of four quadrics by Macaulay's quotient formula, and the
//! discriminant of a cubic surface as the resultant of its partials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{CubicForm, Monomial, MultiPoly, ProjTransform, Rational};
use crate::numeric::{square_up, total_degree_solve, Chart, ComplexPoly, TrackerConfig};

/// Critical degree `Σ(dᵢ − 1) + 1` for four quadrics.
pub const CRITICAL_DEGREE: u32 = 5;
/// Retries with random unimodular coordinate changes before giving up.
pub const COORDINATE_RETRIES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultantError {
    #[error("polynomial {0} is not a homogeneous quadric")]
    NotQuadric(usize),
    #[error("denominator identically zero after {0} coordinate changes")]
    DegenerateDenominator(usize),
}

/// Four homogeneous quadrics in `x, y, z, w`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricQuadruple([MultiPoly; 4]);

impl QuadricQuadruple {
    pub fn new(q: [MultiPoly; 4]) -> Result<Self, ResultantError> {
        for (i, p) in q.iter().enumerate() {
            if !(p.is_zero() || p.homogeneous_degree() == Some(2)) {
                return Err(ResultantError::NotQuadric(i));
            }
        }
        Ok(Self(q))
    }

    pub fn quadrics(&self) -> &[MultiPoly; 4] {
        &self.0
    }

    fn compose(&self, a: &ProjTransform) -> Self {
        Self(self.0.clone().map(|p| p.compose_linear(a.matrix())))
    }
}

/// Macaulay matrices in the critical degree.
#[derive(Clone, Debug)]
pub struct MacaulayData {
    /// The 56 monomials of degree 5, indexing rows and columns.
    pub monomials: Vec<Monomial>,
    /// Row `r` holds the coefficients of `(m_r / xᵢ²)·Qᵢ`, `i` the first index with `xᵢ² | m_r`.
    pub numerator: Vec<Vec<BigInt>>,
    /// Indices of the non-reduced monomials (divisible by two or more squares).
    pub minor: Vec<usize>,
    /// The quadrics were scaled by these integers to clear denominators.
    pub scales: [BigInt; 4],
}

fn integer_scale(p: &MultiPoly) -> BigInt {
    p.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()))
}

impl MacaulayData {
    pub fn new(q: &QuadricQuadruple) -> Self {
        let monomials = Monomial::all_of_degree(CRITICAL_DEGREE);
        let scales: [BigInt; 4] = std::array::from_fn(|i| integer_scale(&q.0[i]));
        let index = |m: &Monomial| monomials.binary_search_by(|x| m.cmp(x)).expect("degree-5 monomial");
        let numerator = monomials
            .iter()
            .map(|m| {
                let e = m.exponents();
                let i = (0..4).find(|&i| e[i] >= 2).expect("some square divides a degree-5 monomial");
                let mut sq = [0; 4];
                sq[i] = 2;
                let shift = m.checked_div(&Monomial(sq)).expect("divisible");
                let mut row = vec![BigInt::zero(); monomials.len()];
                for (t, c) in q.0[i].terms() {
                    let v = c * Rational::from_integer(scales[i].clone());
                    row[index(&shift.mul(t))] = v.to_integer();
                }
                row
            })
            .collect();
        let minor = monomials
            .iter()
            .enumerate()
            .filter(|(_, m)| m.exponents().iter().filter(|&&e| e >= 2).count() >= 2)
            .map(|(k, _)| k)
            .collect();
        Self {
            monomials,
            numerator,
            minor,
            scales,
        }
    }

    pub fn numerator_det(&self) -> BigInt {
        bareiss_det(self.numerator.clone())
    }

    pub fn minor_det(&self) -> BigInt {
        let sub = self
            .minor
            .iter()
            .map(|&r| self.minor.iter().map(|&c| self.numerator[r][c].clone()).collect())
            .collect();
        bareiss_det(sub)
    }

    /// The quotient, or `None` when the minor vanishes.
    pub fn quotient(&self) -> Option<Rational> {
        let den = self.minor_det();
        if den.is_zero() {
            return None;
        }
        let scaled = Rational::new(self.numerator_det(), den);
        // Res is of degree 8 in the coefficients of each quadric.
        let scale = self.scales.iter().fold(BigInt::one(), |acc, s| acc * s.pow(8));
        Some(scaled / Rational::from_integer(scale))
    }
}

/// Fraction-free Gaussian elimination; exact determinant of an integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Exact resultant of four quadrics (normalized by `Res(x², y², z², w²) = 1`).
///
/// If the Macaulay minor vanishes, retries with seeded random unimodular
/// coordinate changes `A`; since `Res(Q∘A) = det(A)^16 · Res(Q)` and
/// `det(A) = ±1`, the value is unchanged. If every retry is degenerate (as
/// when all four quadrics share a linear factor), the value is recovered as
/// `C(0)` for `C(s) = Res(Qᵢ − s·xᵢ²)`, a polynomial of degree at most 32,
/// by exact interpolation at points where the minor does not vanish.
pub fn macaulay_resultant(q: &QuadricQuadruple) -> Result<Rational, ResultantError> {
    if let Some(v) = MacaulayData::new(q).quotient() {
        return Ok(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5245_5355_4c54);
    for _ in 0..COORDINATE_RETRIES {
        let a = ProjTransform::random_unimodular(&mut rng);
        let moved = q.compose(&a);
        if let Some(v) = MacaulayData::new(&moved).quotient() {
            let correction = a.det().pow(16);
            return Ok(v / correction);
        }
    }
    perturbed_resultant(q).ok_or(ResultantError::DegenerateDenominator(COORDINATE_RETRIES))
}

/// Number of interpolation nodes: `C(s)` has degree at most `4 · 8`.
const PERTURBATION_NODES: usize = 33;

fn perturbed_resultant(q: &QuadricQuadruple) -> Option<Rational> {
    let mut nodes: Vec<(Rational, Rational)> = Vec::with_capacity(PERTURBATION_NODES);
    // The minor is a nonzero polynomial in s of degree at most 56, so at most
    // 56 nodes are skipped.
    for k in 1..=(PERTURBATION_NODES + 56) as i64 {
        if nodes.len() == PERTURBATION_NODES {
            break;
        }
        let s = Rational::from_integer(k.into());
        let shifted: [MultiPoly; 4] = std::array::from_fn(|i| {
            let mut e = [0; 4];
            e[i] = 2;
            &q.0[i] - &MultiPoly::monomial(Monomial(e), s.clone())
        });
        if let Some(v) = MacaulayData::new(&QuadricQuadruple(shifted)).quotient() {
            nodes.push((s, v));
        }
    }
    if nodes.len() < PERTURBATION_NODES {
        return None;
    }
    let mut total = Rational::zero();
    for (k, (sk, vk)) in nodes.iter().enumerate() {
        let mut w = vk.clone();
        for (j, (sj, _)) in nodes.iter().enumerate() {
            if j != k {
                w = w * (-sj) / (sk - sj);
            }
        }
        total += w;
    }
    Some(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantValue {
    pub value: Rational,
    pub zero: bool,
}

impl Serialize for DiscriminantValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DiscriminantValue", 2)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("zero", &self.zero)?;
        st.end()
    }
}

/// `Res(∂f/∂x, ∂f/∂y, ∂f/∂z, ∂f/∂w)`; zero exactly when the surface is singular.
pub fn discriminant(f: &CubicForm) -> Result<DiscriminantValue, ResultantError> {
    let q = QuadricQuadruple::new(f.gradient())?;
    let value = macaulay_resultant(&q)?;
    Ok(DiscriminantValue {
        zero: value.is_zero(),
        value,
    })
}

/// Numerically located singular points, when isolated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularWitness {
    pub points: Vec<[num_complex::Complex64; 4]>,
    pub residuals: Vec<f64>,
    /// False when the singular locus appears positive-dimensional (or the
    /// witness search did not isolate points).
    pub isolated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityReport {
    pub singular: bool,
    pub discriminant: DiscriminantValue,
    pub witness: Option<SingularWitness>,
}

/// Exact singularity test; for singular input, also solves `∇f = 0` on a
/// random chart (squared to three equations) for witness points.
pub fn is_singular(f: &CubicForm, seed: u64) -> Result<SingularityReport, ResultantError> {
    let d = discriminant(f)?;
    let witness = d.zero.then(|| singular_witness(f, seed));
    Ok(SingularityReport {
        singular: d.zero,
        discriminant: d,
        witness,
    })
}

fn singular_witness(f: &CubicForm, seed: u64) -> SingularWitness {
    let not_isolated = SingularWitness {
        points: Vec::new(),
        residuals: Vec::new(),
        isolated: false,
    };
    let grad: Vec<ComplexPoly> = f.gradient().iter().map(ComplexPoly::from_multipoly).collect();
    if grad.iter().any(ComplexPoly::is_zero) {
        return not_isolated;
    }
    let chart = Chart::random(seed);
    let restricted = chart.restrict_system(&grad);
    let tol = 1e-8;
    let squared = square_up(&restricted, seed, tol);
    let cfg = TrackerConfig {
        failure_budget: 8,
        ..TrackerConfig::with_seed(seed)
    };
    let Ok(set) = total_degree_solve(&squared.square, &cfg) else {
        return not_isolated;
    };
    let kept = squared.filter(set);
    if kept.is_empty() || kept.solutions.iter().any(|s| s.singular) {
        return not_isolated;
    }
    let points = kept
        .solutions
        .iter()
        .map(|s| crate::lines::geom::normalize_phase(chart.lift(&s.point)))
        .collect();
    SingularWitness {
        points,
        residuals: kept.solutions.iter().map(|s| s.residual).collect(),
        isolated: true,
    }
}
