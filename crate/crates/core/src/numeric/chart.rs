use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::poly::{ComplexPoly, PolySystem};

/// Random affine chart `{h · X = 1}` of `P³`, parametrized as
/// `X = base + Σ tₖ dirₖ` with `h · dirₖ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chart {
    pub hyperplane: [Complex64; 4],
    pub base: [Complex64; 4],
    pub dirs: [[Complex64; 4]; 3],
}

fn dot(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn hdot(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl Chart {
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4348_4152_5400);
        let mut sample = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let h: [Complex64; 4] = std::array::from_fn(|_| sample());
        let hc = h.map(|v| v.conj());
        let hh = hdot(&hc, &hc).re;
        let base = hc.map(|v| v / hh);
        // Orthonormal (Hermitian) basis of the bilinear complement {v : h·v = 0},
        // which is the Hermitian complement of conj(h).
        let mut dirs: Vec<[Complex64; 4]> = Vec::new();
        let unit = |k: usize| -> [Complex64; 4] { std::array::from_fn(|i| Complex64::new(f64::from(u8::from(i == k)), 0.0)) };
        let mut k = 0;
        while dirs.len() < 3 {
            let mut v = unit(k);
            k += 1;
            let c = hdot(&hc, &v) / hh;
            for i in 0..4 {
                v[i] -= c * hc[i];
            }
            for d in &dirs {
                let c = hdot(d, &v);
                for i in 0..4 {
                    v[i] -= c * d[i];
                }
            }
            let nrm = hdot(&v, &v).re.sqrt();
            if nrm > 1e-3 {
                dirs.push(v.map(|x| x / nrm));
            }
        }
        debug_assert!(dirs.iter().all(|d| dot(&h, d).norm() < 1e-12));
        Self {
            hyperplane: h,
            base,
            dirs: [dirs[0], dirs[1], dirs[2]],
        }
    }

    pub fn lift(&self, t: &[Complex64]) -> [Complex64; 4] {
        std::array::from_fn(|i| self.base[i] + (0..3).map(|k| t[k] * self.dirs[k][i]).sum::<Complex64>())
    }

    /// Chart coordinates of a projective point (rescaled onto the chart).
    pub fn coordinates(&self, p: &[Complex64; 4]) -> Option<[Complex64; 3]> {
        let s = dot(&self.hyperplane, p);
        if s.norm() < 1e-300 {
            return None;
        }
        let q = p.map(|v| v / s);
        let d: [Complex64; 4] = std::array::from_fn(|i| q[i] - self.base[i]);
        Some(std::array::from_fn(|k| hdot(&self.dirs[k], &d)))
    }

    /// Restricts a polynomial in `x, y, z, w` to the chart (3 unknowns).
    pub fn restrict(&self, p: &ComplexPoly) -> ComplexPoly {
        assert_eq!(p.nvars(), 4);
        let images: Vec<ComplexPoly> = (0..4)
            .map(|i| {
                let mut terms = vec![(vec![0, 0, 0], self.base[i])];
                for k in 0..3 {
                    let mut e = vec![0, 0, 0];
                    e[k] = 1;
                    terms.push((e, self.dirs[k][i]));
                }
                ComplexPoly::from_terms(3, terms)
            })
            .collect();
        p.compose(&images)
    }

    pub fn restrict_system(&self, eqs: &[ComplexPoly]) -> PolySystem {
        PolySystem::new(3, eqs.iter().map(|p| self.restrict(p)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_round_trip() {
        let c = Chart::random(11);
        let t = [Complex64::new(0.3, 0.1), Complex64::new(-1.0, 0.4), Complex64::new(0.0, 2.0)];
        let p = c.lift(&t);
        assert!((dot(&c.hyperplane, &p) - 1.0).norm() < 1e-12);
        let back = c.coordinates(&p.map(|v| v * Complex64::new(2.0, -1.0))).unwrap();
        for k in 0..3 {
            assert!((back[k] - t[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn restriction_agrees_with_lift() {
        let c = Chart::random(5);
        let x = ComplexPoly::var(4, 0);
        let w = ComplexPoly::var(4, 3);
        let p = x.pow(2).mul(&w).add(&w.pow(3).scale(Complex64::new(0.0, 2.0)));
        let r = c.restrict(&p);
        let t = [Complex64::new(0.2, 0.0), Complex64::new(0.5, -0.3), Complex64::new(1.1, 0.7)];
        assert!((r.eval(&t) - p.eval(&c.lift(&t))).norm() < 1e-12);
    }
}
