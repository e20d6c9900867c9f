//! Dense LU with partial pivoting for the small complex systems in Newton steps.

use num_complex::Complex;
use num_traits::Zero;

use super::scalar::{cabs, Real};

pub struct Lu<R: Real> {
    n: usize,
    lu: Vec<Complex<R>>,
    perm: Vec<usize>,
}

impl<R: Real> Lu<R> {
    /// Factors the row-major `n x n` matrix; `None` on an exactly zero pivot.
    pub fn new(mut a: Vec<Complex<R>>, n: usize) -> Option<Self> {
        assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|r| (r, cabs(a[r * n + k])))
                .fold((k, R::zero()), |acc, (r, v)| if v > acc.1 { (r, v) } else { acc });
            if best.is_zero() {
                return None;
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            for r in k + 1..n {
                let f = a[r * n + k] / pivot;
                a[r * n + k] = f;
                if f.is_zero() {
                    continue;
                }
                for c in k + 1..n {
                    let v = a[k * n + c];
                    a[r * n + c] = a[r * n + c] - f * v;
                }
            }
        }
        Some(Self { n, lu: a, perm })
    }

    pub fn solve(&self, b: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.n;
        let mut y: Vec<Complex<R>> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            for c in 0..r {
                let v = y[c];
                y[r] = y[r] - self.lu[r * n + c] * v;
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let v = y[c];
                y[r] = y[r] - self.lu[r * n + c] * v;
            }
            y[r] = y[r] / self.lu[r * n + r];
        }
        y
    }

    /// `‖A⁻¹‖∞`, computed column by column.
    pub fn inverse_norm_inf(&self) -> R {
        let n = self.n;
        let mut row_sums = vec![R::zero(); n];
        for j in 0..n {
            let mut e = vec![Complex::zero(); n];
            e[j] = Complex::new(R::one(), R::zero());
            let col = self.solve(&e);
            for (s, v) in row_sums.iter_mut().zip(&col) {
                *s = *s + cabs(*v);
            }
        }
        row_sums.into_iter().fold(R::zero(), |a, b| if b > a { b } else { a })
    }
}

pub fn norm_inf_matrix<R: Real>(a: &[Complex<R>], n: usize) -> R {
    a.chunks(n)
        .map(|row| row.iter().fold(R::zero(), |s, v| s + cabs(*v)))
        .fold(R::zero(), |a, b| if b > a { b } else { a })
}

pub fn norm_inf<R: Real>(v: &[Complex<R>]) -> R {
    v.iter().map(|z| cabs(*z)).fold(R::zero(), |a, b| if b > a { b } else { a })
}

/// Infinity-norm condition number of a square matrix, `+∞` when singular.
pub fn condition_inf<R: Real>(a: &[Complex<R>], n: usize) -> f64 {
    match Lu::new(a.to_vec(), n) {
        Some(lu) => (norm_inf_matrix(a, n) * lu.inverse_norm_inf()).to_f64(),
        None => f64::INFINITY,
    }
}

/// Right null vector of a complex `m x 4` matrix (rows are the given
/// vectors) with the singular values ordered descending.
pub fn null_vector4(rows: &[[num_complex::Complex64; 4]]) -> ([num_complex::Complex64; 4], Vec<f64>) {
    use nalgebra::DMatrix;
    let m = rows.len().max(4);
    // Pad with zero rows so the thin SVD exposes all four right singular vectors.
    let a = DMatrix::from_fn(m, 4, |r, c| rows.get(r).map_or(num_complex::Complex64::zero(), |row| row[c]));
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let k = order[3];
    let v = std::array::from_fn(|c| vt[(k, c)].conj());
    (v, order.iter().map(|&i| svd.singular_values[i]).collect())
}

/// Least-squares solution of `A x ≈ b` for a complex `m x k` matrix (`m >= k`),
/// returning the solution and the residual norm `‖A x − b‖₂`.
pub fn least_squares(
    a: &[Vec<num_complex::Complex64>],
    b: &[num_complex::Complex64],
) -> (Vec<num_complex::Complex64>, f64) {
    use nalgebra::{DMatrix, DVector};
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let am = DMatrix::from_fn(m, k, |r, c| a[r][c]);
    let bv = DVector::from_column_slice(b);
    let svd = am.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let x = svd
        .solve(&bv, smax * 1e-13)
        .unwrap_or_else(|_| DVector::zeros(k));
    let r = (&am * &x - bv).norm();
    (x.iter().copied().collect(), r)
}

/// Singular values (descending) and right singular vectors (rows of `V^H`,
/// conjugated to give null-space vectors) of a complex `m x k` matrix.
pub fn right_singular(a: &[Vec<num_complex::Complex64>]) -> (Vec<f64>, Vec<Vec<num_complex::Complex64>>) {
    use nalgebra::DMatrix;
    let k = a.first().map_or(0, Vec::len);
    let m = a.len().max(k);
    let am = DMatrix::from_fn(m, k, |r, c| a.get(r).map_or(num_complex::Complex64::zero(), |row| row[c]));
    let svd = am.svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..k).map(|c| vt[(i, c)].conj()).collect())
        .collect();
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn solves_with_pivoting() {
        let a = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(3.0, 0.0),
        ];
        let lu = Lu::new(a.clone(), 2).unwrap();
        let b = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let x = lu.solve(&b);
        for r in 0..2 {
            let v = a[r * 2] * x[0] + a[r * 2 + 1] * x[1];
            assert!((v - b[r]).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_detected() {
        let a = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(4.0, 0.0)];
        assert!(Lu::new(a.clone(), 2).is_none());
        assert_eq!(condition_inf(&a, 2), f64::INFINITY);
        let id = vec![Complex64::new(1.0, 0.0), Complex64::zero(), Complex64::zero(), Complex64::new(1.0, 0.0)];
        assert_eq!(condition_inf(&id, 2), 1.0);
    }
}
