use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{complex_coeffs, compose_complex, fit, NormalFormError};
use crate::algebra::{parse_poly, CubicForm, Rational};
use crate::lines::geom::hdot;
use crate::lines::{find_lines, meets, Incidence, IncidenceGraph, Line, LineConfig, LineSet27};
use crate::numeric::linalg::right_singular;
use crate::resultant::discriminant;

const MEMBER_DRAWS: usize = 16;

const GENERATORS: [&str; 5] = [
    "2x^2y - 2xy^2 + xz^2 - xzw - yw^2 + yzw",
    "(x - w)(xz + yw)",
    "(z + w)(yw - xz)",
    "(y - z)(xz + yw)",
    "(x - y)(yw - xz)",
];

/// The five generators of the normal-form family.
pub fn family_generators() -> [CubicForm; 5] {
    GENERATORS.map(|g| CubicForm::from_poly(&parse_poly(g).expect("valid generator")).expect("cubic generator"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrunduLogarConfig {
    pub seed: u64,
    pub lines: LineConfig,
    /// Relative span residual for acceptance.
    pub tol: f64,
    /// Singular-value ratio below which a direction counts as kernel.
    pub kernel_tol: f64,
    /// Parameter bound for the two bootstrap members.
    pub member_bound: i64,
}

impl Default for BrunduLogarConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            lines: LineConfig::default(),
            tol: 1e-6,
            kernel_tol: 1e-8,
            member_bound: 9,
        }
    }
}

impl BrunduLogarConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            lines: LineConfig::with_seed(seed),
            ..Self::default()
        }
    }
}

/// The five lines common to all members of the family, with their incidences.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceLSet {
    pub lines: Vec<Line>,
    /// `pattern[a][b]`: reference lines `a` and `b` meet.
    pub pattern: Vec<Vec<bool>>,
    /// Parameters of the two bootstrap members.
    pub members: [[i64; 5]; 2],
    #[serde(skip)]
    planes: Vec<[[Complex64; 4]; 2]>,
}

impl ReferenceLSet {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.lines.len();
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| self.pattern[a][b]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrunduLogarResult {
    /// Rows of `T`; `f(T·X)` lies in the span of the generators.
    pub transform: [[Complex64; 4]; 4],
    pub parameters: [Complex64; 5],
    pub residual: f64,
    /// Source lines mapped to the reference L-set; `None` when `f` is already in the span.
    pub tuple: Option<[usize; 5]>,
    pub candidates: usize,
    pub tested: usize,
    pub reference_edges: Vec<(usize, usize)>,
}

fn member(a: &[i64; 5]) -> CubicForm {
    let g = family_generators();
    let mut c: [Rational; 20] = std::array::from_fn(|_| Rational::zero());
    for (gi, ai) in g.iter().zip(a) {
        let s = Rational::from_integer((*ai).into());
        for (ck, gk) in c.iter_mut().zip(gi.coeffs()) {
            *ck += gk * &s;
        }
    }
    CubicForm::new(c).expect("nonzero member")
}

fn same_line(a: &Line, b: &Line) -> bool {
    1.0 - hdot(&a.pluecker, &b.pluecker).norm() < 1e-10
}

/// Two annihilating linear forms of a line.
fn line_planes(l: &Line) -> [[Complex64; 4]; 2] {
    let rows = vec![l.span[0].to_vec(), l.span[1].to_vec()];
    let (_, v) = right_singular(&rows);
    [std::array::from_fn(|c| v[2][c]), std::array::from_fn(|c| v[3][c])]
}

/// Intersects the line sets of two seeded random members of the family.
pub fn reference_lset(cfg: &BrunduLogarConfig) -> Result<ReferenceLSet, NormalFormError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x424c_5345_5400);
    let mut draw = || -> [i64; 5] {
        std::array::from_fn(|_| loop {
            let v = rng.random_range(-cfg.member_bound..=cfg.member_bound);
            if v != 0 {
                break v;
            }
        })
    };
    // Singular members lose lines; redraw until both are smooth with 27 lines.
    let mut members = Vec::with_capacity(2);
    let mut sets: Vec<LineSet27> = Vec::with_capacity(2);
    for _ in 0..MEMBER_DRAWS {
        let a = draw();
        let f = member(&a);
        if discriminant(&f).is_ok_and(|d| d.zero) {
            continue;
        }
        let set = find_lines(&f, &cfg.lines)?;
        if set.is_complete() {
            members.push(a);
            sets.push(set);
            if sets.len() == 2 {
                break;
            }
        }
    }
    if sets.len() < 2 {
        return Err(NormalFormError::Bootstrap(0));
    }
    let members = [members[0], members[1]];
    let lines: Vec<Line> = sets[0]
        .lines
        .iter()
        .filter(|l| sets[1].lines.iter().any(|m| same_line(l, m)))
        .cloned()
        .collect();
    if lines.len() != 5 {
        return Err(NormalFormError::Bootstrap(lines.len()));
    }
    let pattern = lines
        .iter()
        .map(|a| lines.iter().map(|b| meets(a, b, cfg.lines.incidence_tol) == Incidence::Meet).collect())
        .collect();
    let planes = lines.iter().map(line_planes).collect();
    Ok(ReferenceLSet {
        lines,
        pattern,
        members,
        planes,
    })
}

/// Exact solution of `f = Σ aᵢ Gᵢ` over the rationals, if any.
fn exact_membership(f: &CubicForm) -> Option<[Rational; 5]> {
    let g = family_generators();
    let mut m: Vec<Vec<Rational>> = (0..20)
        .map(|r| g.iter().map(|gi| gi.coeff(r).clone()).chain([f.coeff(r).clone()]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..6 {
        let Some(p) = (row..20).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if col == 5 {
            return None;
        }
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for c in 0..6 {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..20 {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..6 {
                    let d = &factor * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut a: [Rational; 5] = std::array::from_fn(|_| Rational::zero());
    for (r, &c) in pivots.iter().enumerate() {
        a[c] = m[r][5].clone();
    }
    Some(a)
}

fn to_c64(q: &Rational) -> Complex64 {
    use num_traits::ToPrimitive;
    Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
}

/// Ordered 5-tuples of distinct lines with the reference incidence pattern, in lexicographic order.
fn candidates(graph: &IncidenceGraph, pattern: &[Vec<bool>]) -> Vec<[usize; 5]> {
    fn extend(graph: &IncidenceGraph, pattern: &[Vec<bool>], cur: &mut Vec<usize>, out: &mut Vec<[usize; 5]>) {
        let k = cur.len();
        if k == 5 {
            out.push([cur[0], cur[1], cur[2], cur[3], cur[4]]);
            return;
        }
        for i in 0..graph.len() {
            if cur.contains(&i) {
                continue;
            }
            if cur.iter().enumerate().all(|(a, &j)| graph.meets(j, i) == pattern[a][k]) {
                cur.push(i);
                extend(graph, pattern, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(graph, pattern, &mut Vec::with_capacity(5), &mut out);
    out
}

fn inverse4(m: &[[Complex64; 4]; 4]) -> Option<[[Complex64; 4]; 4]> {
    let mat = nalgebra::Matrix4::from_fn(|r, c| m[r][c]);
    let inv = mat.try_inverse()?;
    Some(std::array::from_fn(|r| std::array::from_fn(|c| inv[(r, c)])))
}

/// Projective maps sending each source line into its reference line.
fn solve_transform(
    source: &[&Line; 5],
    reference: &ReferenceLSet,
    kernel_tol: f64,
    rng: &mut ChaCha8Rng,
) -> Option<[[Complex64; 4]; 4]> {
    let mut rows = Vec::with_capacity(20);
    for (l, planes) in source.iter().zip(&reference.planes) {
        for p in &l.span {
            for pi in planes {
                rows.push((0..16).map(|e| pi[e / 4] * p[e % 4]).collect::<Vec<_>>());
            }
        }
    }
    let (s, v) = right_singular(&rows);
    let dim = s.iter().filter(|&&x| x <= kernel_tol * s[0]).count();
    if dim == 0 {
        return None;
    }
    // Any invertible kernel element works; mix a degenerate kernel randomly.
    let mut m = vec![Complex64::zero(); 16];
    for vec in &v[16 - dim..] {
        let c = if dim == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        for (x, y) in m.iter_mut().zip(vec) {
            *x += c * y;
        }
    }
    let m: [[Complex64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| m[4 * r + c]));
    let t = inverse4(&m)?;
    let scale = t.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    Some(t.map(|row| row.map(|z| z / scale)))
}

/// Transform into the normal-form span, found by matching an L-set on `f`.
pub fn brundu_logar(
    f: &CubicForm,
    lines: &LineSet27,
    graph: &IncidenceGraph,
    cfg: &BrunduLogarConfig,
) -> Result<BrunduLogarResult, NormalFormError> {
    let identity = |r: usize| std::array::from_fn(|c| Complex64::new(f64::from(u8::from(r == c)), 0.0));
    if let Some(a) = exact_membership(f) {
        return Ok(BrunduLogarResult {
            transform: std::array::from_fn(identity),
            parameters: std::array::from_fn(|i| to_c64(&a[i])),
            residual: 0.0,
            tuple: None,
            candidates: 0,
            tested: 0,
            reference_edges: Vec::new(),
        });
    }
    let reference = reference_lset(cfg)?;
    brundu_logar_with(f, lines, graph, &reference, cfg)
}

/// As [`brundu_logar`], with a precomputed reference L-set.
pub fn brundu_logar_with(
    f: &CubicForm,
    lines: &LineSet27,
    graph: &IncidenceGraph,
    reference: &ReferenceLSet,
    cfg: &BrunduLogarConfig,
) -> Result<BrunduLogarResult, NormalFormError> {
    lines.require_complete()?;
    let basis = family_generators().map(|g| complex_coeffs(&g));
    let coeffs = complex_coeffs(f);
    let tuples = candidates(graph, &reference.pattern);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4b45_524e_454c);
    for (tested, tuple) in tuples.iter().enumerate() {
        let source = tuple.map(|i| &lines.lines[i]);
        let Some(t) = solve_transform(&source, reference, cfg.kernel_tol, &mut rng) else {
            continue;
        };
        let (a, residual) = fit(&basis, &compose_complex(&coeffs, &t));
        if residual < cfg.tol {
            return Ok(BrunduLogarResult {
                transform: t,
                parameters: [a[0], a[1], a[2], a[3], a[4]],
                residual,
                tuple: Some(*tuple),
                candidates: tuples.len(),
                tested: tested + 1,
                reference_edges: reference.edges(),
            });
        }
    }
    Err(NormalFormError::NoValidTransform {
        tested: tuples.len(),
        candidates: tuples.len(),
    })
}
