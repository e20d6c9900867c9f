use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;
use serde::Serialize;

use super::geom;
use super::{classify_pairing, Incidence, LineDd, LineSet27, LinesError};
use crate::numeric::linalg::null_vector4;
use crate::numeric::{to_c64, Real};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceGraph {
    #[serde(skip)]
    pub adjacency: Vec<Vec<bool>>,
    pub edges: Vec<(usize, usize)>,
    /// Pairs decided only after an extended-precision recheck.
    pub rechecked: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn from_adjacency(adjacency: Vec<Vec<bool>>) -> Self {
        let n = adjacency.len();
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| adjacency[i][j])
            .collect();
        Self {
            adjacency,
            edges,
            rechecked: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn meets(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].iter().filter(|&&b| b).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.degree(i)).collect()
    }

    /// Triangles `i < j < k`.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.len();
        let mut out = Vec::new();
        for &(i, j) in &self.edges {
            for k in j + 1..n {
                if self.adjacency[i][k] && self.adjacency[j][k] {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }
}

struct Extended<'a> {
    set: &'a LineSet27,
    cache: HashMap<usize, Option<LineDd>>,
}

impl<'a> Extended<'a> {
    fn new(set: &'a LineSet27) -> Self {
        Self {
            set,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, i: usize) -> Option<&LineDd> {
        let set = self.set;
        self.cache.entry(i).or_insert_with(|| set.extended(i)).as_ref()
    }
}

/// Pairwise incidence of the 27 lines, with extended-precision rechecks of
/// borderline pairs; fails unless the result is 10-regular.
pub fn incidence_graph(set: &LineSet27) -> Result<IncidenceGraph, LinesError> {
    set.require_complete()?;
    let tol = set.config.incidence_tol;
    let n = set.lines.len();
    let mut adjacency = vec![vec![false; n]; n];
    let mut rechecked = Vec::new();
    let mut ext = Extended::new(set);
    for i in 0..n {
        for j in i + 1..n {
            let meet = match super::meets(&set.lines[i], &set.lines[j], tol) {
                Incidence::Meet => true,
                Incidence::Skew => false,
                Incidence::Ambiguous(v) => {
                    rechecked.push((i, j));
                    let pi = ext.get(i).map(|l| l.pluecker);
                    let pj = ext.get(j).map(|l| l.pluecker);
                    let (Some(pi), Some(pj)) = (pi, pj) else {
                        return Err(LinesError::AmbiguousIncidence(i, j, v));
                    };
                    let w = to_c64(geom::pairing(&pi, &pj)).norm();
                    match classify_pairing(w, tol) {
                        Incidence::Meet => true,
                        Incidence::Skew => false,
                        Incidence::Ambiguous(w) => return Err(LinesError::AmbiguousIncidence(i, j, w)),
                    }
                }
            };
            adjacency[i][j] = meet;
            adjacency[j][i] = meet;
        }
    }
    let mut g = IncidenceGraph::from_adjacency(adjacency);
    g.rechecked = rechecked;
    let degrees = g.degrees();
    if degrees.iter().any(|&d| d != 10) {
        return Err(LinesError::NotRegular(degrees));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TritangentPlane {
    /// Linear form, unit norm with the phase convention of Plücker vectors.
    pub plane: [Complex64; 4],
    pub lines: [usize; 3],
    /// Smallest over largest singular value of the six stacked span vectors.
    pub residual: f64,
}

impl TritangentPlane {
    pub fn contains(&self, line: usize) -> bool {
        self.lines.contains(&line)
    }
}

pub fn tritangent_planes(set: &LineSet27, graph: &IncidenceGraph) -> Result<Vec<TritangentPlane>, LinesError> {
    set.require_complete()?;
    let tol = set.config.coplanarity_tol;
    let mut planes = Vec::new();
    for tri in graph.triangles() {
        let rows: Vec<[Complex64; 4]> = tri.iter().flat_map(|&i| set.lines[i].span).collect();
        let (v, sv) = null_vector4(&rows);
        let ratio = sv[3] / sv[0];
        if ratio > tol {
            return Err(LinesError::NonCoplanar(tri, ratio));
        }
        planes.push(TritangentPlane {
            plane: geom::normalize_phase(v),
            lines: tri,
            residual: ratio,
        });
    }
    if planes.len() != 45 {
        return Err(LinesError::PlaneCount(planes.len()));
    }
    Ok(planes)
}

/// Two sextuples of pairwise skew lines; `a[i]` meets `b[j]` iff `i != j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DoubleSix {
    pub a: [usize; 6],
    pub b: [usize; 6],
}

impl DoubleSix {
    pub fn is_valid(&self, g: &IncidenceGraph) -> bool {
        let skew = |s: &[usize; 6]| (0..6).all(|i| (i + 1..6).all(|j| s[i] != s[j] && !g.meets(s[i], s[j])));
        skew(&self.a) && skew(&self.b) && (0..6).all(|i| (0..6).all(|j| g.meets(self.a[i], self.b[j]) == (i != j)))
    }
}

fn skew_cliques(g: &IncidenceGraph, size: usize) -> Vec<Vec<usize>> {
    fn extend(g: &IncidenceGraph, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        let start = current.last().map_or(0, |&l| l + 1);
        for c in start..g.len() {
            if current.iter().all(|&k| !g.meets(k, c)) {
                current.push(c);
                extend(g, size, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(g, size, &mut Vec::new(), &mut out);
    out
}

/// All double-sixes of the incidence graph, found from its 6-cliques of
/// pairwise skew lines.
pub fn double_sixes(graph: &IncidenceGraph) -> Result<Vec<DoubleSix>, LinesError> {
    let mut found = BTreeSet::new();
    for a in skew_cliques(graph, 6) {
        let partner: Option<Vec<usize>> = (0..6)
            .map(|i| {
                let mut cands = (0..graph.len()).filter(|&l| {
                    !a.contains(&l) && !graph.meets(l, a[i]) && (0..6).all(|j| j == i || graph.meets(l, a[j]))
                });
                let first = cands.next();
                if cands.next().is_some() {
                    None
                } else {
                    first
                }
            })
            .collect();
        let Some(b) = partner else { continue };
        let a: [usize; 6] = a.try_into().expect("six lines");
        let b: [usize; 6] = b.try_into().expect("six lines");
        let ds = if a[0] < b.iter().copied().min().unwrap_or(usize::MAX) {
            DoubleSix { a, b }
        } else {
            // Put the half containing the smallest index first, sorted, and
            // permute the other half to keep the pairing.
            let mut idx: Vec<usize> = (0..6).collect();
            idx.sort_by_key(|&i| b[i]);
            DoubleSix {
                a: std::array::from_fn(|k| b[idx[k]]),
                b: std::array::from_fn(|k| a[idx[k]]),
            }
        };
        if ds.is_valid(graph) {
            found.insert(ds);
        }
    }
    let out: Vec<DoubleSix> = found.into_iter().collect();
    if out.len() != 36 {
        return Err(LinesError::DoubleSixCount(out.len()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EckardtPoint {
    pub point: [Complex64; 4],
    /// Index into the tritangent plane list.
    pub plane: usize,
    pub lines: [usize; 3],
    /// Largest distance from a pairwise intersection point to the third line.
    pub distance: f64,
}

fn concurrency<R: Real>(spans: [&[geom::Vec4<R>; 2]; 3]) -> (geom::Vec4<R>, f64) {
    let mut worst = 0.0f64;
    let mut first = None;
    for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let p = geom::intersection((&spans[a][0], &spans[a][1]), (&spans[b][0], &spans[b][1]));
        let d = geom::distance_to_line(&p, &spans[c][0], &spans[c][1]).to_f64();
        worst = worst.max(d);
        first.get_or_insert(p);
    }
    (first.expect("three pairs"), worst)
}

/// Tritangent planes whose three lines pass through a common point.
pub fn eckardt_points(set: &LineSet27, planes: &[TritangentPlane]) -> Result<Vec<EckardtPoint>, LinesError> {
    set.require_complete()?;
    let tol = set.config.concurrency_tol;
    let mut ext = Extended::new(set);
    let mut out = Vec::new();
    for (k, plane) in planes.iter().enumerate() {
        let [i, j, l] = plane.lines;
        let spans = [&set.lines[i].span, &set.lines[j].span, &set.lines[l].span];
        let (mut point, mut d) = concurrency(spans);
        if d > tol && d < 10.0 * tol {
            let spans: Option<Vec<[geom::Vec4<_>; 2]>> = plane.lines.iter().map(|&m| ext.get(m).map(|x| x.span)).collect();
            let Some(s) = spans else {
                return Err(LinesError::AmbiguousConcurrency(k, d));
            };
            let (p, e) = concurrency([&s[0], &s[1], &s[2]]);
            if e > tol && e < 10.0 * tol {
                return Err(LinesError::AmbiguousConcurrency(k, e));
            }
            point = p.map(to_c64);
            d = e;
        }
        if d <= tol {
            out.push(EckardtPoint {
                point,
                plane: k,
                lines: plane.lines,
                distance: d,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RealCensus {
    pub real: usize,
    pub conjugate_pairs: usize,
}

/// Counts real lines and conjugate pairs; every non-real line must have its
/// conjugate in the set.
pub fn real_line_census(set: &LineSet27) -> Result<RealCensus, LinesError> {
    set.require_complete()?;
    let tol = set.config.reality_tol;
    let mut ext = Extended::new(set);
    let mut real = Vec::with_capacity(set.lines.len());
    for (i, line) in set.lines.iter().enumerate() {
        let mut im = line.imaginary_part;
        if im > tol && im < 10.0 * tol {
            im = match ext.get(i) {
                Some(l) => l.pluecker.iter().map(|z| z.im.to_f64().abs()).fold(0.0, f64::max),
                None => return Err(LinesError::AmbiguousReality(i, im)),
            };
            if im > tol && im < 10.0 * tol {
                return Err(LinesError::AmbiguousReality(i, im));
            }
        }
        real.push(im <= tol);
    }
    let mut paired = vec![false; set.lines.len()];
    let mut pairs = 0;
    for i in 0..set.lines.len() {
        if real[i] || paired[i] {
            continue;
        }
        let conj = set.lines[i].pluecker.map(|z| z.conj());
        let partner = (0..set.lines.len())
            .filter(|&j| j != i && !real[j] && !paired[j])
            .map(|j| {
                let d = set.lines[j].pluecker.iter().zip(&conj).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                (j, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, d)) if d <= 1e3 * tol => {
                paired[i] = true;
                paired[j] = true;
                pairs += 1;
            }
            _ => return Err(LinesError::UnpairedLine(i)),
        }
    }
    Ok(RealCensus {
        real: real.iter().filter(|&&r| r).count(),
        conjugate_pairs: pairs,
    })
}
