use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{det4, Monomial, MultiPoly};
use super::{parse_rational, AlgebraError, Rational};

/// Exponents of the 20 cubic monomials in the fixed coefficient order
/// `x³, y³, z³, w³, x²y, x²z, x²w, xy², y²z, y²w, xz², yz², z²w, xw², yw², zw², xyz, xyw, xzw, yzw`.
pub const CUBIC_MONOMIALS: [[u32; 4]; 20] = [
    [3, 0, 0, 0],
    [0, 3, 0, 0],
    [0, 0, 3, 0],
    [0, 0, 0, 3],
    [2, 1, 0, 0],
    [2, 0, 1, 0],
    [2, 0, 0, 1],
    [1, 2, 0, 0],
    [0, 2, 1, 0],
    [0, 2, 0, 1],
    [1, 0, 2, 0],
    [0, 1, 2, 0],
    [0, 0, 2, 1],
    [1, 0, 0, 2],
    [0, 1, 0, 2],
    [0, 0, 1, 2],
    [1, 1, 1, 0],
    [1, 1, 0, 1],
    [1, 0, 1, 1],
    [0, 1, 1, 1],
];

/// Position of a degree-3 exponent vector in [`CUBIC_MONOMIALS`].
pub fn cubic_index(e: [u32; 4]) -> Option<usize> {
    CUBIC_MONOMIALS.iter().position(|m| *m == e)
}

/// A cubic surface, stored as its 20 coefficients `c1..c20`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    coeffs: [Rational; 20],
}

impl CubicForm {
    pub fn new(coeffs: [Rational; 20]) -> Result<Self, AlgebraError> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(AlgebraError::ZeroForm);
        }
        Ok(Self { coeffs })
    }

    pub fn from_integers(c: [i64; 20]) -> Result<Self, AlgebraError> {
        Self::new(c.map(|v| Rational::from_integer(v.into())))
    }

    pub fn from_poly(p: &MultiPoly) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroForm);
        }
        if p.homogeneous_degree() != Some(3) {
            return Err(AlgebraError::NotCubic);
        }
        let mut coeffs: [Rational; 20] = std::array::from_fn(|_| Rational::zero());
        for (m, c) in p.terms() {
            let i = cubic_index(m.0).ok_or(AlgebraError::NotCubic)?;
            coeffs[i] = c.clone();
        }
        Self::new(coeffs)
    }

    /// `x³ + y³ + z³ + w³`.
    pub fn fermat() -> Self {
        let mut c = [0; 20];
        c[..4].copy_from_slice(&[1, 1, 1, 1]);
        Self::from_integers(c).expect("nonzero")
    }

    /// The 4-nodal Cayley cubic `xyz + xyw + xzw + yzw`.
    pub fn cayley_nodal() -> Self {
        let mut c = [0; 20];
        c[16..].copy_from_slice(&[1, 1, 1, 1]);
        Self::from_integers(c).expect("nonzero")
    }

    /// Clebsch diagonal cubic `x³ + y³ + z³ + w³ − (x + y + z + w)³`.
    pub fn clebsch() -> Self {
        let s = MultiPoly::linear(&std::array::from_fn(|_| Rational::one()));
        let p = &Self::fermat().to_poly() - &s.pow(3);
        Self::from_poly(&p).expect("cubic")
    }

    /// Random cubic with small integer numerators and denominators.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let coeffs = std::array::from_fn(|_| {
                let n: i64 = rng.random_range(-9..=9);
                let d: i64 = rng.random_range(1..=4);
                Rational::new(n.into(), d.into())
            });
            if let Ok(f) = Self::new(coeffs) {
                return f;
            }
        }
    }

    pub fn coeffs(&self) -> &[Rational; 20] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            CUBIC_MONOMIALS
                .iter()
                .zip(&self.coeffs)
                .map(|(e, c)| (Monomial(*e), c.clone())),
        )
    }

    pub fn to_complex(&self) -> [Complex64; 20] {
        std::array::from_fn(|i| Complex64::new(self.coeffs[i].to_f64().unwrap_or(f64::NAN), 0.0))
    }

    pub fn scale(&self, c: &Rational) -> Result<Self, AlgebraError> {
        Self::new(self.coeffs.clone().map(|v| v * c))
    }

    /// The four partial derivatives `∂f/∂x, ∂f/∂y, ∂f/∂z, ∂f/∂w`.
    pub fn gradient(&self) -> [MultiPoly; 4] {
        let p = self.to_poly();
        std::array::from_fn(|i| p.derivative(i))
    }

    /// Matrix of second partial derivatives (linear forms).
    pub fn hessian_matrix(&self) -> [[MultiPoly; 4]; 4] {
        let g = self.gradient();
        std::array::from_fn(|i| std::array::from_fn(|j| g[i].derivative(j)))
    }

    /// Determinant of the Hessian matrix, a quartic form.
    pub fn hessian_det(&self) -> MultiPoly {
        det4(&self.hessian_matrix())
    }

    /// `f(A·X)`.
    pub fn act(&self, a: &ProjTransform) -> Self {
        let p = self.to_poly().compose_linear(a.matrix());
        // An invertible substitution never annihilates a nonzero form.
        Self::from_poly(&p).expect("invertible action preserves cubic forms")
    }

    pub fn eval_rational(&self, p: &[Rational; 4]) -> Rational {
        self.to_poly().eval_rational(p)
    }

    pub fn eval_complex(&self, p: &[Complex64; 4]) -> Complex64 {
        CUBIC_MONOMIALS
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| Monomial(*e).eval_complex(p) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Least common multiple of denominators times `f`: an integer cubic.
    pub fn clear_denominators(&self) -> [BigInt; 20] {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        self.coeffs
            .clone()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

impl std::str::FromStr for CubicForm {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_cubic(s)
    }
}

/// Serialized as a JSON array of 20 strings `"num/den"` in coefficient order.
impl Serialize for CubicForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubicForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != 20 {
            return Err(D::Error::custom(format!("expected 20 coefficients, got {}", v.len())));
        }
        let mut coeffs: [Rational; 20] = std::array::from_fn(|_| Rational::zero());
        for (slot, s) in coeffs.iter_mut().zip(&v) {
            *slot = parse_rational(s).map_err(D::Error::custom)?;
        }
        CubicForm::new(coeffs).map_err(D::Error::custom)
    }
}

/// Serialized row-major as strings `"num/den"`.
impl Serialize for ProjTransform {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

/// An invertible 4x4 rational matrix acting on `P³` by `X ↦ A·X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjTransform {
    m: [[Rational; 4]; 4],
}

impl ProjTransform {
    pub fn new(m: [[Rational; 4]; 4]) -> Result<Self, AlgebraError> {
        if det_rational(&m).is_zero() {
            return Err(AlgebraError::SingularTransform);
        }
        Ok(Self { m })
    }

    pub fn from_integers(m: [[i64; 4]; 4]) -> Result<Self, AlgebraError> {
        Self::new(m.map(|r| r.map(|v| Rational::from_integer(v.into()))))
    }

    pub fn identity() -> Self {
        Self {
            m: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { Rational::one() } else { Rational::zero() })
            }),
        }
    }

    /// Permutation matrix sending coordinate `i` to `perm[i]`.
    pub fn permutation(perm: [usize; 4]) -> Result<Self, AlgebraError> {
        let mut m: [[i64; 4]; 4] = [[0; 4]; 4];
        for (i, &p) in perm.iter().enumerate() {
            m[p][i] = 1;
        }
        Self::from_integers(m)
    }

    /// Random invertible matrix with small integer entries.
    pub fn random_integer<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        loop {
            let m = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-bound..=bound)));
            if let Ok(t) = Self::from_integers(m) {
                return t;
            }
        }
    }

    /// Random integer matrix of determinant ±1, built from elementary row operations.
    pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut m: [[i64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j)));
        for _ in 0..12 {
            let i = rng.random_range(0..4);
            let mut j = rng.random_range(0..3);
            if j >= i {
                j += 1;
            }
            let k: i64 = rng.random_range(-2..=2);
            for c in 0..4 {
                m[i][c] += k * m[j][c];
            }
        }
        if rng.random_bool(0.5) {
            m.swap(0, 1);
        }
        Self::from_integers(m).expect("unimodular")
    }

    /// Random rational orthogonal matrix via the Cayley transform
    /// `(I − S)(I + S)⁻¹` of a random skew-symmetric `S`.
    pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut s: [[Rational; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
        for i in 0..4 {
            for j in i + 1..4 {
                let v = Rational::new(rng.random_range(-4i64..=4).into(), rng.random_range(1i64..=3).into());
                s[i][j] = v.clone();
                s[j][i] = -v;
            }
        }
        let id = Self::identity();
        let minus: [[Rational; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| &id.m[i][j] - &s[i][j]));
        let plus: [[Rational; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| &id.m[i][j] + &s[i][j]));
        // I + S is invertible for real skew-symmetric S.
        let plus = Self::new(plus).expect("I + S invertible");
        let minus = Self::new(minus).expect("I - S invertible");
        minus.mul(&plus.inverse())
    }

    pub fn matrix(&self) -> &[[Rational; 4]; 4] {
        &self.m
    }

    pub fn det(&self) -> Rational {
        det_rational(&self.m)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| &self.m[i][k] * &other.m[k][j]).sum())
        });
        Self { m }
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: std::array::from_fn(|i| std::array::from_fn(|j| self.m[j][i].clone())),
        }
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Self {
        let mut a: Vec<Vec<Rational>> = self
            .m
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.to_vec();
                row.extend((0..4).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !a[r][col].is_zero()).expect("invertible");
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..8 {
                        let delta = &factor * &a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
        Self {
            m: std::array::from_fn(|i| std::array::from_fn(|j| a[i][j + 4].clone())),
        }
    }

    pub fn apply(&self, p: &[Rational; 4]) -> [Rational; 4] {
        std::array::from_fn(|i| (0..4).map(|k| &self.m[i][k] * &p[k]).sum())
    }

    pub fn to_complex(&self) -> [[Complex64; 4]; 4] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| Complex64::new(self.m[i][j].to_f64().unwrap_or(f64::NAN), 0.0))
        })
    }
}

pub(crate) fn det_rational(m: &[[Rational; 4]; 4]) -> Rational {
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..4 {
        let Some(piv) = (col..4).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..4 {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            for c in col..4 {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}
