//! Precision-generic projective geometry of lines in `P³`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::numeric::{cabs, Real};

pub type Vec4<R> = [Complex<R>; 4];
pub type Pl<R> = [Complex<R>; 6];

/// Index pairs of the Plücker coordinates `p12, p13, p14, p23, p24, p34`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn hdot<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> Complex<R> {
    a.iter().zip(b).fold(Complex::zero(), |s, (x, y)| s + x.conj() * *y)
}

pub fn norm<R: Real>(a: &[Complex<R>]) -> R {
    a.iter().fold(R::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

/// Scales to unit norm, then rotates the phase so that the first entry of
/// (nearly) maximal modulus is real and positive.
pub fn normalize_phase<R: Real, const N: usize>(v: [Complex<R>; N]) -> [Complex<R>; N] {
    let n = norm(&v);
    if n.is_zero() {
        return v;
    }
    let v = v.map(|z| z / n);
    let max = v.iter().map(|z| cabs(*z)).fold(R::zero(), |a, b| if b > a { b } else { a });
    let cut = max * R::from_f64(1.0 - 1e-6);
    let k = v.iter().position(|z| cabs(*z) >= cut).unwrap_or(0);
    let r = cabs(v[k]);
    let rot = v[k].conj() / r;
    v.map(|z| z * rot)
}

/// Hermitian Gram–Schmidt on a pair of spanning vectors.
pub fn orthonormalize<R: Real>(u: &Vec4<R>, v: &Vec4<R>) -> (Vec4<R>, Vec4<R>) {
    let nu = norm(u);
    let u = u.map(|z| z / nu);
    let c = hdot(&u, v);
    let w: Vec4<R> = std::array::from_fn(|i| v[i] - c * u[i]);
    let nw = norm(&w);
    (u, w.map(|z| z / nw))
}

pub fn pluecker<R: Real>(u: &Vec4<R>, v: &Vec4<R>) -> Pl<R> {
    PAIRS.map(|(i, j)| u[i] * v[j] - u[j] * v[i])
}

/// The bilinear Plücker pairing; zero iff the two lines meet.
pub fn pairing<R: Real>(p: &Pl<R>, q: &Pl<R>) -> Complex<R> {
    p[0] * q[5] - p[1] * q[4] + p[2] * q[3] + p[3] * q[2] - p[4] * q[1] + p[5] * q[0]
}

/// `p12·p34 − p13·p24 + p14·p23`.
pub fn quadric<R: Real>(p: &Pl<R>) -> Complex<R> {
    p[0] * p[5] - p[1] * p[4] + p[2] * p[3]
}

fn det3<R: Real>(m: [[Complex<R>; 3]; 3]) -> Complex<R> {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Kernel vector of a rank-3 `4 x 4` matrix from the largest cofactor row.
pub fn cofactor_kernel<R: Real>(m: &[Vec4<R>; 4]) -> Vec4<R> {
    let minor = |skip_r: usize, skip_c: usize| -> Complex<R> {
        let rows: Vec<usize> = (0..4).filter(|&r| r != skip_r).collect();
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip_c).collect();
        det3(std::array::from_fn(|a| std::array::from_fn(|b| m[rows[a]][cols[b]])))
    };
    let mut best: Option<(R, Vec4<R>)> = None;
    for r in 0..4 {
        let v: Vec4<R> = std::array::from_fn(|c| {
            let s = minor(r, c);
            if (r + c) % 2 == 0 {
                s
            } else {
                -s
            }
        });
        let n = norm(&v);
        if best.as_ref().is_none_or(|(b, _)| n > *b) {
            best = Some((n, v));
        }
    }
    best.map(|(_, v)| v).unwrap_or([Complex::zero(); 4])
}

/// Common point of two meeting lines given by spanning pairs, unit normalized.
pub fn intersection<R: Real>(a: (&Vec4<R>, &Vec4<R>), b: (&Vec4<R>, &Vec4<R>)) -> Vec4<R> {
    // Columns u1, v1, u2, v2; a kernel vector (s, t, -s', -t') gives s·u1 + t·v1 on both lines.
    let m: [Vec4<R>; 4] = std::array::from_fn(|i| [a.0[i], a.1[i], b.0[i], b.1[i]]);
    let k = cofactor_kernel(&m);
    let p: Vec4<R> = std::array::from_fn(|i| k[0] * a.0[i] + k[1] * a.1[i]);
    normalize_phase(p)
}

/// Distance from a unit point to the line with orthonormal span `(u, v)`.
pub fn distance_to_line<R: Real>(p: &Vec4<R>, u: &Vec4<R>, v: &Vec4<R>) -> R {
    let a = hdot(u, p);
    let b = hdot(v, p);
    let r: Vec4<R> = std::array::from_fn(|i| p[i] - a * u[i] - b * v[i]);
    norm(&r)
}

pub fn one<R: Real>() -> Complex<R> {
    Complex::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn e(i: usize) -> Vec4<f64> {
        std::array::from_fn(|k| Complex64::new(f64::from(u8::from(k == i)), 0.0))
    }

    #[test]
    fn coordinate_lines() {
        let zw = normalize_phase(pluecker(&e(0), &e(1)));
        let xy = normalize_phase(pluecker(&e(2), &e(3)));
        let yz = normalize_phase(pluecker(&e(0), &e(3)));
        assert_eq!(pairing(&zw, &xy), one());
        assert_eq!(pairing(&zw, &yz), Complex::zero());
        assert_eq!(pairing(&zw, &zw), Complex::zero());
        let p = intersection((&e(0), &e(1)), (&e(0), &e(3)));
        assert!((p[0] - one()).norm() < 1e-15);
    }

    #[test]
    fn phase_convention_is_stable_under_scaling() {
        let u = [Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0), Complex64::new(0.0, 1.0), Complex64::new(3.0, 0.0)];
        let v = [Complex64::new(-1.0, 0.0), Complex64::new(2.0, 2.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.5)];
        let p = normalize_phase(pluecker(&u, &v));
        let s = Complex64::new(-0.3, 1.7);
        let q = normalize_phase(pluecker(&u.map(|z| z * s), &v));
        for k in 0..6 {
            assert!((p[k] - q[k]).norm() < 1e-14);
        }
        assert!(quadric(&p).norm() < 1e-15);
        let (a, b) = orthonormalize(&u, &v);
        assert!(hdot(&a, &b).norm() < 1e-15);
        let r = normalize_phase(pluecker(&a, &b));
        for k in 0..6 {
            assert!((p[k] - r[k]).norm() < 1e-14);
        }
    }
}
