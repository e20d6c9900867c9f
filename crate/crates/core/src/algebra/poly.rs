use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Variable names in coordinate order.
pub const VARS: [char; 4] = ['x', 'y', 'z', 'w'];

/// Exponent vector of a monomial in `x, y, z, w`.
///
/// Ordered graded-lexicographically with `x > y > z > w`, so the largest
/// monomial of a polynomial is its leading term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> [u32; 4] {
        self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a = a.checked_sub(b)?;
        }
        Some(Monomial(e))
    }

    /// All monomials of total degree `d`, in descending graded-lex order.
    pub fn all_of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                for c in (0..=d - a - b).rev() {
                    out.push(Monomial([a, b, c, d - a - b - c]));
                }
            }
        }
        out
    }

    pub fn eval_complex(&self, p: &[Complex64; 4]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (x, &e) in p.iter().zip(&self.0) {
            acc *= x.powu(e);
        }
        acc
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &e) in VARS.iter().zip(&self.0) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Sparse polynomial in `x, y, z, w` with exact rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i), Rational::one())
    }

    /// Linear form `Σ coeffs[i] * var(i)`.
    pub fn linear(coeffs: &[Rational; 4]) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(i), c.clone());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(d)` if every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut n = *m;
            n.0[i] -= 1;
            out.add_term(n, c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn eval_rational(&self, p: &[Rational; 4]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in p.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, p: &[Complex64; 4]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| m.eval_complex(p) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Substitutes `x_i -> Σ_j a[i][j] x_j`, i.e. returns `p(A·X)`.
    pub fn compose_linear(&self, a: &[[Rational; 4]; 4]) -> Self {
        let images: Vec<MultiPoly> = a.iter().map(MultiPoly::linear).collect();
        let mut out = Self::zero();
        // Cache powers of each image since cubic terms reuse them heavily.
        let max_deg = self.terms.keys().flat_map(|m| m.0).max().unwrap_or(0);
        let powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|l| {
                let mut v = vec![MultiPoly::constant(Rational::one())];
                for k in 1..=max_deg as usize {
                    let next = &v[k - 1] * l;
                    v.push(next);
                }
                v
            })
            .collect();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Largest absolute coefficient, zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

/// Prints in descending graded-lex order using the input grammar, so the
/// output always parses back to the same polynomial.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// 4x4 determinant of polynomial entries by cofactor expansion.
pub(crate) fn det4(m: &[[MultiPoly; 4]; 4]) -> MultiPoly {
    fn det(m: &[[MultiPoly; 4]; 4], rows: &[usize], cols: &[usize]) -> MultiPoly {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]].clone();
        }
        let r = rows[0];
        let mut acc = MultiPoly::zero();
        for (k, &c) in cols.iter().enumerate() {
            if m[r][c].is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = det(m, &rows[1..], &sub_cols);
            let t = &m[r][c] * &minor;
            acc = if k % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }
    det(m, &[0, 1, 2, 3], &[0, 1, 2, 3])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn graded_lex_order() {
        let xyz = Monomial([1, 1, 1, 0]);
        let x2w = Monomial([2, 0, 0, 1]);
        let y3 = Monomial([0, 3, 0, 0]);
        assert!(x2w > xyz);
        assert!(xyz > y3);
        assert!(Monomial([1, 0, 0, 0]) < y3);
        assert_eq!(Monomial::all_of_degree(3).len(), 20);
        assert_eq!(Monomial::all_of_degree(5).len(), 56);
        assert_eq!(Monomial::all_of_degree(3)[0], Monomial([3, 0, 0, 0]));
    }

    #[test]
    fn arithmetic_cancels_terms() {
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        let s = &x + &y;
        let d = &x - &y;
        let p = &s * &d;
        let expected = &x.pow(2) - &y.pow(2);
        assert_eq!(p, expected);
        assert_eq!(p.num_terms(), 2);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivative_power_rule() {
        let p = MultiPoly::var(0).pow(3).scale(&q(5));
        let d = p.derivative(0);
        assert_eq!(d, MultiPoly::var(0).pow(2).scale(&q(15)));
        assert!(p.derivative(2).is_zero());
    }

    #[test]
    fn display_is_descending() {
        let p = &MultiPoly::var(3).scale(&q(-2)) + &MultiPoly::var(0).pow(2);
        assert_eq!(p.to_string(), "x^2 - 2*w");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }
}
