use std::time::Instant;

use cubic_core::lines::{
    double_sixes, eckardt_points, find_lines, incidence_graph, meets, real_line_census, restriction_residual,
    tritangent_planes, Incidence, Line, LineConfig, LineSet27,
};
use cubic_core::CubicForm;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Closed-form Fermat lines: `{u + α v = 0, s + β t = 0}` for cube roots of
/// unity `α, β` and the three ways to pair up the coordinates.
fn fermat_oracle() -> Vec<Line> {
    let roots: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0)).collect();
    let mut out = Vec::new();
    for (u, v, s, t) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        for a in &roots {
            for b in &roots {
                let mut p = [c(0.0, 0.0); 4];
                p[u] = -a;
                p[v] = c(1.0, 0.0);
                let mut q = [c(0.0, 0.0); 4];
                q[s] = -b;
                q[t] = c(1.0, 0.0);
                out.push(Line::through(&p, &q, 1e-9));
            }
        }
    }
    out
}

fn pl_dist(a: &Line, b: &Line) -> f64 {
    a.pluecker.iter().zip(&b.pluecker).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn assert_same_lines(a: &[Line], b: &[Line], tol: f64) {
    assert_eq!(a.len(), b.len());
    for l in a {
        let d = b.iter().map(|m| pl_dist(l, m)).fold(f64::INFINITY, f64::min);
        assert!(d < tol, "line {:?} unmatched (closest {d:e})", l.pluecker);
    }
}

fn check_line_invariants(set: &LineSet27) {
    for l in &set.lines {
        assert!(l.restriction_residual < 1e-8, "{}", l.restriction_residual);
        assert!(l.quadric_residual() < 1e-10);
        assert!(l.consistency_residual() < 1e-10);
    }
    // Conjugation closure for rational input.
    for l in &set.lines {
        let conj = l.pluecker.map(|z| z.conj());
        let d = set
            .lines
            .iter()
            .map(|m| m.pluecker.iter().zip(&conj).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        assert!(d < 1e-7);
    }
}

#[test]
fn fermat_oracle_lines_lie_on_the_surface() {
    let f = CubicForm::fermat();
    let oracle = fermat_oracle();
    assert_eq!(oracle.len(), 27);
    for l in &oracle {
        assert!(restriction_residual(&f, &l.span[0], &l.span[1]) < 1e-15);
    }
    assert_eq!(oracle.iter().filter(|l| l.is_real).count(), 3);
}

#[test]
fn fermat_full_combinatorics() {
    let f = CubicForm::fermat();
    let t = Instant::now();
    let set = find_lines(&f, &LineConfig::with_seed(1)).unwrap();
    assert_eq!(set.len(), 27, "{:?}", set.stats);
    check_line_invariants(&set);
    assert_same_lines(&set.lines, &fermat_oracle(), 1e-8);

    let g = incidence_graph(&set).unwrap();
    assert_eq!(g.edges.len(), 135);
    let planes = tritangent_planes(&set, &g).unwrap();
    assert_eq!(planes.len(), 45);
    for i in 0..27 {
        assert_eq!(planes.iter().filter(|p| p.contains(i)).count(), 5);
    }
    // The plane x + y = 0 carries the three lines {x + y = 0, z + β w = 0}.
    let target = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)].map(|z| z / 2f64.sqrt());
    assert!(planes.iter().any(|p| p.plane.iter().zip(&target).all(|(a, b)| (a - b).norm() < 1e-9)));

    let ds = double_sixes(&g).unwrap();
    assert_eq!(ds.len(), 36);
    assert!(ds.iter().all(|d| d.is_valid(&g)));
    assert_eq!(eckardt_points(&set, &planes).unwrap().len(), 18);
    let census = real_line_census(&set).unwrap();
    assert_eq!((census.real, census.conjugate_pairs), (3, 12));
    assert!(t.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn clebsch_lines_are_all_real() {
    let f = CubicForm::clebsch();
    let set = find_lines(&f, &LineConfig::with_seed(5)).unwrap();
    assert_eq!(set.len(), 27);
    check_line_invariants(&set);
    assert!(set.lines.iter().all(|l| l.is_real));
    let g = incidence_graph(&set).unwrap();
    let planes = tritangent_planes(&set, &g).unwrap();
    assert_eq!(eckardt_points(&set, &planes).unwrap().len(), 10);
    let census = real_line_census(&set).unwrap();
    assert_eq!((census.real, census.conjugate_pairs), (27, 0));
}

#[test]
fn random_cubics_have_schlafli_combinatorics() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in 0..3 {
        let f = CubicForm::random(&mut rng);
        let set = find_lines(&f, &LineConfig::with_seed(seed)).unwrap();
        assert_eq!(set.len(), 27, "{:?}", set.stats);
        check_line_invariants(&set);
        let g = incidence_graph(&set).unwrap();
        assert_eq!(g.edges.len(), 135);
        let planes = tritangent_planes(&set, &g).unwrap();
        assert_eq!(double_sixes(&g).unwrap().len(), 36);
        assert!(eckardt_points(&set, &planes).unwrap().is_empty());
        let census = real_line_census(&set).unwrap();
        assert!([27, 15, 7, 3].contains(&census.real), "{census:?}");
        assert_eq!(census.real + 2 * census.conjugate_pairs, 27);
    }
}

#[test]
fn lines_do_not_depend_on_the_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = CubicForm::random(&mut rng);
    let a = find_lines(&f, &LineConfig::with_seed(10)).unwrap();
    let b = find_lines(&f, &LineConfig::with_seed(11)).unwrap();
    assert_same_lines(&a.lines, &b.lines, 1e-7);
    // Same canonical order, hence the same labeled graph.
    assert_eq!(incidence_graph(&a).unwrap().edges, incidence_graph(&b).unwrap().edges);
}

#[test]
fn meets_on_coordinate_lines() {
    let e = |i: usize| -> [Complex64; 4] { std::array::from_fn(|k| c(f64::from(u8::from(k == i)), 0.0)) };
    let zw = Line::through(&e(0), &e(1), 1e-9);
    let xy = Line::through(&e(2), &e(3), 1e-9);
    let yz = Line::through(&e(0), &e(3), 1e-9);
    assert_eq!(meets(&zw, &zw, 1e-7), Incidence::Meet);
    assert_eq!(meets(&zw, &xy, 1e-7), Incidence::Skew);
    assert_eq!(meets(&zw, &yz, 1e-7), Incidence::Meet);
    let near = Line::through(&e(0), &[c(0.0, 0.0), c(3e-7, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-9);
    assert!(matches!(meets(&xy, &near, 1e-7), Incidence::Ambiguous(_)));
}

#[test]
fn singular_surface_is_reported_not_refused() {
    let set = find_lines(&CubicForm::cayley_nodal(), &LineConfig::with_seed(2)).unwrap();
    assert!(set.len() < 27 || set.singular_solutions, "{:?}", set.stats);
    assert!(incidence_graph(&set).is_err() || set.singular_solutions);
}
