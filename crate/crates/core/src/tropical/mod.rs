//! Regular subdivisions of the Newton polytope `3Δ₃` and tropical smoothness.
//!
//! All hull computations are exact: rational heights are scaled to a common
//! denominator and every orientation test is an integer determinant.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{parse_rational, CubicForm, ProjTransform, Rational, CUBIC_MONOMIALS};

/// Normalized volume of `3Δ₃`.
pub const TOTAL_VOLUME: u64 = 27;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropicalError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("valuation vector has no finite entry")]
    AllInfinite,
    #[error("lift not full-dimensional")]
    NotFullDimensional,
    #[error("expected 20 valuation entries, got {0}")]
    Length(usize),
    #[error("invalid valuation entry {0:?}")]
    Entry(String),
}

/// `(i, j, k)` exponents of `x, y, z` for each coefficient slot.
pub fn lattice_points() -> [[i64; 3]; 20] {
    CUBIC_MONOMIALS.map(|e| [i64::from(e[0]), i64::from(e[1]), i64::from(e[2])])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    PAdic { prime: u64 },
    Explicit,
}

/// Heights for the 20 lattice points; `None` is `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationVector {
    pub entries: [Option<Rational>; 20],
    pub provenance: Provenance,
}

impl Serialize for ValuationVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<String> = self
            .entries
            .iter()
            .map(|e| e.as_ref().map_or_else(|| "inf".to_string(), ToString::to_string))
            .collect();
        let mut st = s.serialize_struct("ValuationVector", 2)?;
        st.serialize_field("entries", &entries)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

impl fmt::Display for ValuationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| e.as_ref().map_or_else(|| "inf".to_string(), ToString::to_string))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl ValuationVector {
    pub fn new(entries: [Option<Rational>; 20], provenance: Provenance) -> Result<Self, TropicalError> {
        if entries.iter().all(Option::is_none) {
            return Err(TropicalError::AllInfinite);
        }
        Ok(Self { entries, provenance })
    }

    pub fn from_integers(v: [i64; 20]) -> Self {
        Self {
            entries: v.map(|x| Some(Rational::from_integer(x.into()))),
            provenance: Provenance::Explicit,
        }
    }

    /// Parses 20 entries, each a rational or `inf`.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, TropicalError> {
        if items.len() != 20 {
            return Err(TropicalError::Length(items.len()));
        }
        let mut entries: [Option<Rational>; 20] = std::array::from_fn(|_| None);
        for (e, s) in entries.iter_mut().zip(items) {
            let s = s.as_ref().trim();
            *e = match s {
                "inf" | "+inf" | "∞" => None,
                _ => Some(parse_rational(s).map_err(|_| TropicalError::Entry(s.to_string()))?),
            };
        }
        Self::new(entries, Provenance::Explicit)
    }

    pub fn finite_indices(&self) -> Vec<usize> {
        (0..20).filter(|&i| self.entries[i].is_some()).collect()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn ord(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `ord_p(numerator) − ord_p(denominator)`, `None` for zero.
pub fn padic_valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    Some(ord(q.numer(), &p) - ord(q.denom(), &p))
}

pub fn valuation_vector(f: &CubicForm, p: u64) -> Result<ValuationVector, TropicalError> {
    if !is_prime(p) {
        return Err(TropicalError::NotPrime(p));
    }
    let entries = std::array::from_fn(|i| padic_valuation(f.coeff(i), p).map(|v| Rational::from_integer(v.into())));
    ValuationVector::new(entries, Provenance::PAdic { prime: p })
}

/// A lower facet projected to `3Δ₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Lattice-point indices (into `lattice_points()`), ascending.
    pub points: Vec<usize>,
    /// Six times the Euclidean volume.
    pub volume: u64,
    /// `(a, b)` with `a·p + b` equal to the lift on the cell and strictly below it elsewhere.
    pub functional: ([Rational; 3], Rational),
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (a, b) = &self.functional;
        let functional: Vec<String> = a.iter().chain([b]).map(ToString::to_string).collect();
        let mut st = s.serialize_struct("Cell", 3)?;
        st.serialize_field("points", &self.points)?;
        st.serialize_field("volume", &self.volume)?;
        st.serialize_field("functional", &functional)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularSubdivision {
    pub cells: Vec<Cell>,
    pub lifting: ValuationVector,
}

impl RegularSubdivision {
    pub fn total_volume(&self) -> u64 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    pub fn max_volume(&self) -> u64 {
        self.cells.iter().map(|c| c.volume).max().unwrap_or(0)
    }

    /// Lattice points that are vertices of some cell.
    pub fn vertices_used(&self) -> BTreeSet<usize> {
        let pts = lattice_points();
        let mut out = BTreeSet::new();
        for c in &self.cells {
            if c.points.len() == 4 {
                out.extend(&c.points);
            } else {
                let sub: Vec<[i64; 3]> = c.points.iter().map(|&i| pts[i]).collect();
                out.extend(c.points.iter().enumerate().filter(|&(k, _)| is_vertex(&sub, k)).map(|(_, &i)| i));
            }
        }
        out
    }

    /// Re-verifies each cell's functional against the lift by exact arithmetic.
    pub fn verify(&self) -> bool {
        let pts = lattice_points();
        self.cells.iter().all(|c| {
            let (a, b) = &c.functional;
            (0..20).all(|i| match &self.lifting.entries[i] {
                None => true,
                Some(v) => {
                    let h = pts[i].iter().zip(a).fold(b.clone(), |s, (x, ai)| s + ai * Rational::from_integer((*x).into()));
                    if c.points.contains(&i) {
                        *v == h
                    } else {
                        *v > h
                    }
                }
            })
        })
    }
}

fn sub3(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn det3(r: [[i64; 3]; 3]) -> i64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// `D·(h_q − ℓ(q))` where `ℓ` is the affine interpolant of the lift on `a..d`
/// and `D = det[b−a, c−a, d−a]`.
fn height_above(p: &[[i64; 3]], h: &[BigInt], quad: [usize; 4], q: usize) -> BigInt {
    let [a, b, c, d] = quad;
    let v: [[i64; 3]; 4] = [sub3(&p[b], &p[a]), sub3(&p[c], &p[a]), sub3(&p[d], &p[a]), sub3(&p[q], &p[a])];
    let eta: [BigInt; 4] = [&h[b] - &h[a], &h[c] - &h[a], &h[d] - &h[a], &h[q] - &h[a]];
    // Expansion along the height column.
    let minor = |skip: usize| -> i64 {
        let rows: Vec<[i64; 3]> = (0..4).filter(|&r| r != skip).map(|r| v[r]).collect();
        det3([rows[0], rows[1], rows[2]])
    };
    (0..4).fold(BigInt::zero(), |s, r| {
        let sign = if (r + 3) % 2 == 0 { 1 } else { -1 };
        s + &eta[r] * BigInt::from(sign * minor(r))
    })
}

/// Lower facets of the lifted point set, as sorted index sets into `p`.
fn lower_facets(p: &[[i64; 3]], h: &[BigInt]) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let dd = det3([sub3(&p[b], &p[a]), sub3(&p[c], &p[a]), sub3(&p[d], &p[a])]);
                    if dd == 0 {
                        continue;
                    }
                    let quad = [a, b, c, d];
                    if cells.iter().any(|cell| quad.iter().all(|i| cell.binary_search(i).is_ok())) {
                        continue;
                    }
                    let mut on = Vec::with_capacity(4);
                    let mut lower = true;
                    for q in 0..n {
                        let e = height_above(p, h, quad, q);
                        match (e.sign(), dd > 0) {
                            (num_bigint::Sign::NoSign, _) => on.push(q),
                            (num_bigint::Sign::Plus, true) | (num_bigint::Sign::Minus, false) => {}
                            _ => {
                                lower = false;
                                break;
                            }
                        }
                    }
                    if lower && seen.insert(on.clone()) {
                        cells.push(on);
                    }
                }
            }
        }
    }
    cells
}

fn full_dimensional(p: &[[i64; 3]]) -> bool {
    let n = p.len();
    (0..n).any(|a| {
        (a + 1..n).any(|b| {
            (b + 1..n).any(|c| (c + 1..n).any(|d| det3([sub3(&p[b], &p[a]), sub3(&p[c], &p[a]), sub3(&p[d], &p[a])]) != 0))
        })
    })
}

/// Normalized volume of the convex hull of a full-dimensional point set,
/// summed over a generic (placing) triangulation.
fn hull_volume(p: &[[i64; 3]]) -> u64 {
    let mut base = BigInt::from(1000);
    loop {
        let h: Vec<BigInt> = (0..p.len()).map(|k| num_traits::pow(base.clone(), k)).collect();
        let facets = lower_facets(p, &h);
        if facets.iter().all(|f| f.len() == 4) {
            return facets
                .iter()
                .map(|f| det3([sub3(&p[f[1]], &p[f[0]]), sub3(&p[f[2]], &p[f[0]]), sub3(&p[f[3]], &p[f[0]])]).unsigned_abs())
                .sum();
        }
        base = &base * &base;
    }
}

/// Whether `p[k]` is a vertex of the convex hull of `p` (assumed full-dimensional).
fn is_vertex(p: &[[i64; 3]], k: usize) -> bool {
    // Raised above the others, a vertex still lies on the lower hull.
    let h: Vec<BigInt> = (0..p.len()).map(|i| BigInt::from(i64::from(i == k))).collect();
    lower_facets(p, &h).iter().any(|f| f.contains(&k))
}

/// Exact affine interpolant through four lifted points.
fn functional(p: &[[i64; 3]; 4], v: &[Rational; 4]) -> ([Rational; 3], Rational) {
    let mut m: Vec<Vec<Rational>> = (0..4)
        .map(|r| {
            p[r].iter()
                .map(|&x| Rational::from_integer(x.into()))
                .chain([Rational::one(), v[r].clone()])
                .collect()
        })
        .collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !m[r][col].is_zero()).expect("affinely independent");
        m.swap(col, piv);
        let inv = Rational::one() / &m[col][col];
        for c in col..5 {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..4 {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..5 {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    ([m[0][4].clone(), m[1][4].clone(), m[2][4].clone()], m[3][4].clone())
}

/// The regular subdivision induced by lifting each finite lattice point to its valuation.
pub fn regular_subdivision(v: &ValuationVector) -> Result<RegularSubdivision, TropicalError> {
    let all = lattice_points();
    let idx = v.finite_indices();
    let pts: Vec<[i64; 3]> = idx.iter().map(|&i| all[i]).collect();
    if !full_dimensional(&pts) {
        return Err(TropicalError::NotFullDimensional);
    }
    let vals: Vec<&Rational> = idx.iter().map(|&i| v.entries[i].as_ref().expect("finite")).collect();
    let lcm = vals.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let h: Vec<BigInt> = vals.iter().map(|q| (*q * Rational::from_integer(lcm.clone())).to_integer()).collect();

    let mut cells: Vec<Cell> = lower_facets(&pts, &h)
        .into_iter()
        .map(|local| {
            let cell_pts: Vec<[i64; 3]> = local.iter().map(|&k| pts[k]).collect();
            let volume = hull_volume(&cell_pts);
            let quad = first_independent(&cell_pts);
            let functional = functional(&quad.map(|k| cell_pts[k]), &quad.map(|k| vals[local[k]].clone()));
            Cell {
                points: local.iter().map(|&k| idx[k]).collect(),
                volume,
                functional,
            }
        })
        .collect();
    cells.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(RegularSubdivision {
        cells,
        lifting: v.clone(),
    })
}

fn first_independent(p: &[[i64; 3]]) -> [usize; 4] {
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if det3([sub3(&p[b], &p[a]), sub3(&p[c], &p[a]), sub3(&p[d], &p[a])]) != 0 {
                        return [a, b, c, d];
                    }
                }
            }
        }
    }
    unreachable!("cells of a full-dimensional subdivision are full-dimensional")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Offense {
    NotSimplex { cell: usize, points: usize },
    Volume { cell: usize, volume: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub smooth: bool,
    pub cells: usize,
    pub vertices_used: usize,
    /// 27 cells and all 20 lattice points used as vertices.
    pub count_criterion: bool,
    pub offending: Vec<Offense>,
}

/// Smooth iff every cell is a unimodular tetrahedron.
pub fn is_tropically_smooth(s: &RegularSubdivision) -> SmoothnessCertificate {
    let mut offending = Vec::new();
    for (i, c) in s.cells.iter().enumerate() {
        if c.points.len() != 4 {
            offending.push(Offense::NotSimplex {
                cell: i,
                points: c.points.len(),
            });
        } else if c.volume != 1 {
            offending.push(Offense::Volume { cell: i, volume: c.volume });
        }
    }
    let vertices_used = s.vertices_used().len();
    SmoothnessCertificate {
        smooth: offending.is_empty() && s.total_volume() == TOTAL_VOLUME,
        cells: s.cells.len(),
        vertices_used,
        count_criterion: s.cells.len() == TOTAL_VOLUME as usize && vertices_used == 20,
        offending,
    }
}

/// More cells is better, then a smaller largest cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Score {
    pub cells: usize,
    pub max_volume: u64,
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cells.cmp(&other.cells).then(other.max_volume.cmp(&self.max_volume))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    /// Candidate index; 0 is the identity.
    pub index: usize,
    pub transform: ProjTransform,
    pub valuation: ValuationVector,
    pub subdivision: RegularSubdivision,
    pub score: Score,
    pub smooth: bool,
    /// `(index, score)` each time the running best strictly improved, in index order.
    pub improvements: Vec<(usize, Score)>,
    pub budget: usize,
}

/// Seeded random search over integer coordinate changes for a smoother
/// tropicalization. A heuristic: a non-smooth result proves nothing.
pub fn smoothness_search(f: &CubicForm, p: u64, budget: usize, seed: u64) -> Result<SearchResult, TropicalError> {
    if !is_prime(p) {
        return Err(TropicalError::NotPrime(p));
    }
    let budget = budget.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5452_4f50);
    let transforms: Vec<ProjTransform> = std::iter::once(ProjTransform::identity())
        .chain((1..budget).map(|_| ProjTransform::random_integer(&mut rng, 3)))
        .collect();
    let evaluated: Vec<Option<(ValuationVector, RegularSubdivision, Score)>> = transforms
        .par_iter()
        .map(|t| {
            let v = valuation_vector(&f.act(t), p).ok()?;
            let s = regular_subdivision(&v).ok()?;
            let score = Score {
                cells: s.cells.len(),
                max_volume: s.max_volume(),
            };
            Some((v, s, score))
        })
        .collect();
    let mut best: Option<usize> = None;
    let mut improvements = Vec::new();
    for (i, e) in evaluated.iter().enumerate() {
        if let Some((_, _, score)) = e {
            if best.is_none_or(|b| *score > evaluated[b].as_ref().expect("scored").2) {
                best = Some(i);
                improvements.push((i, *score));
            }
        }
    }
    let index = best.ok_or(TropicalError::NotFullDimensional)?;
    let (valuation, subdivision, score) = evaluated[index].clone().expect("scored");
    let smooth = is_tropically_smooth(&subdivision).smooth;
    Ok(SearchResult {
        index,
        transform: transforms[index].clone(),
        valuation,
        subdivision,
        score,
        smooth,
        improvements,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn padic_examples() {
        assert_eq!(padic_valuation(&q(8, 3), 2), Some(3));
        assert_eq!(padic_valuation(&q(8, 3), 3), Some(-1));
        assert_eq!(padic_valuation(&q(-12, 1), 2), Some(2));
        assert_eq!(padic_valuation(&q(0, 1), 2), None);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(91));
        assert_eq!(
            valuation_vector(&CubicForm::fermat(), 4).unwrap_err(),
            TropicalError::NotPrime(4)
        );
    }

    #[test]
    fn unit_simplex_volume() {
        assert_eq!(hull_volume(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]), 1);
        let cube: Vec<[i64; 3]> = (0..8).map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1]).collect();
        assert_eq!(hull_volume(&cube), 6);
        assert!((0..8).all(|k| is_vertex(&cube, k)));
        assert_eq!(hull_volume(lattice_points().as_ref()), 27);
    }

    #[test]
    fn interior_point_is_not_a_vertex() {
        let p = lattice_points().to_vec();
        let centre = p.iter().position(|x| *x == [1, 1, 1]).unwrap();
        assert!(!is_vertex(&p, centre));
        let corner = p.iter().position(|x| *x == [3, 0, 0]).unwrap();
        assert!(is_vertex(&p, corner));
    }

    #[test]
    fn score_order() {
        let a = Score { cells: 5, max_volume: 9 };
        let b = Score { cells: 5, max_volume: 3 };
        let c = Score { cells: 6, max_volume: 20 };
        assert!(b > a && c > b);
    }
}
