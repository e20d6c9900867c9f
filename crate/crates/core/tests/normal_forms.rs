use cubic_core::lines::{find_lines, incidence_graph, meets, tritangent_planes, Incidence, Line, LineConfig};
use cubic_core::normal_forms::{
    brundu_logar, brundu_logar_with, cayley_salmon_all, compose_complex, family_generators, pentahedral,
    product_coefficients, reference_lset, BrunduLogarConfig, NormalFormError, PentaConfig, TRIHEDRAL_PAIRS,
};
use cubic_core::{parse_cubic, CubicForm, Rational};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn max_err(a: &[Complex64; 20], b: &[Complex64; 20]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

#[test]
fn pentahedral_sum_of_cubes() {
    let f = parse_cubic("x^3 + y^3 + z^3 + w^3 + (x + y + z + w)^3").unwrap();
    let p = pentahedral(&f, &PentaConfig::with_seed(3)).unwrap();
    assert_eq!(p.nodes.len(), 10);
    assert!(p.residual < 1e-8);
    // Forms are the coordinates and x + y + z + w, in some order.
    let expected = [[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 1., 0.], [0., 0., 0., 1.], [1., 1., 1., 1.]];
    for e in expected {
        assert!(
            p.forms.iter().any(|l| l.iter().zip(e).all(|(a, b)| (a - c(b)).norm() < 1e-8)),
            "{e:?} missing from {:?}",
            p.forms
        );
    }
    for a in p.coefficients {
        assert!((a - c(1.0)).norm() < 1e-8, "{a}");
    }
    assert!(max_err(&p.reconstruct(), &f.to_complex()) < 1e-8);
}

#[test]
fn pentahedral_random_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for seed in 0..2 {
        let f = CubicForm::random(&mut rng);
        let p = pentahedral(&f, &PentaConfig::with_seed(seed)).unwrap();
        assert_eq!(p.nodes.len(), 10);
        assert!(p.residual < 1e-8, "{}", p.residual);
        assert!(max_err(&p.reconstruct(), &f.to_complex()) < 1e-8);
        // Each plane carries six nodes.
        for l in &p.forms {
            let on = p
                .nodes
                .iter()
                .filter(|n| l.iter().zip(n.iter()).map(|(a, b)| a * b).sum::<Complex64>().norm() < 1e-6 * l.iter().map(|z| z.norm()).sum::<f64>())
                .count();
            assert_eq!(on, 6);
        }
    }
}

#[test]
fn pentahedral_rejects_fermat() {
    let err = pentahedral(&CubicForm::fermat(), &PentaConfig::with_seed(1)).unwrap_err();
    assert!(matches!(err, NormalFormError::HessianNodes { .. } | NormalFormError::Grouping(_)), "{err}");
}

#[test]
fn product_coefficients_of_cube() {
    // (x + y)^3 = x^3 + y^3 + 3x^2y + 3xy^2
    let l = [c(1.0), c(1.0), c(0.0), c(0.0)];
    let p = product_coefficients(&l, &l, &l);
    let f = parse_cubic("(x + y)^3").unwrap().to_complex();
    assert!(max_err(&p, &f) == 0.0);
}

#[test]
fn complex_composition_matches_exact_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = CubicForm::random(&mut rng);
    let t = cubic_core::ProjTransform::random_integer(&mut rng, 5);
    let exact = f.act(&t).to_complex();
    assert!(max_err(&compose_complex(&f.to_complex(), &t.to_complex()), &exact) < 1e-14);
}

#[test]
fn cayley_salmon_random_cubic() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = CubicForm::random(&mut rng);
    let set = find_lines(&f, &LineConfig::with_seed(2)).unwrap();
    let g = incidence_graph(&set).unwrap();
    let planes = tritangent_planes(&set, &g).unwrap();
    let reps = cayley_salmon_all(&f, &planes, 1e-8).unwrap();
    assert_eq!(reps.len(), TRIHEDRAL_PAIRS);
    for r in &reps {
        assert!(r.residual < 1e-8);
        for i in 0..3 {
            for j in 0..3 {
                let l = r.grid[i][j];
                let on: Vec<usize> = (0..45).filter(|&k| planes[k].contains(l) && (r.p.contains(&k) || r.q.contains(&k))).collect();
                assert_eq!(on, {
                    let mut v = vec![r.p[i], r.q[j]];
                    v.sort();
                    v
                });
            }
        }
    }
}

/// Lines on which every generator vanishes, worked out by hand.
fn hand_lset() -> Vec<Line> {
    let pts: [([f64; 4], [f64; 4]); 5] = [
        ([0., 0., 1., 0.], [0., 0., 0., 1.]),  // x = y = 0
        ([0., 1., 0., 0.], [0., 0., 1., 0.]),  // x = w = 0
        ([1., 0., 0., 0.], [0., 0., 0., 1.]),  // y = z = 0
        ([1., 0., 0., 1.], [0., 1., 1., 0.]),  // x = w, y = z
        ([1., 1., 0., 0.], [0., 0., 1., -1.]), // x = y, z = -w
    ];
    pts.iter().map(|(p, q)| Line::through(&p.map(c), &q.map(c), 1e-9)).collect()
}

#[test]
fn reference_lset_matches_hand_computation() {
    let hand = hand_lset();
    for g in family_generators() {
        for l in &hand {
            assert!(cubic_core::lines::restriction_residual(&g, &l.span[0], &l.span[1]) < 1e-15);
        }
    }
    let r = reference_lset(&BrunduLogarConfig::with_seed(0)).unwrap();
    assert_eq!(r.lines.len(), 5);
    for l in &r.lines {
        assert!(hand.iter().any(|h| l.pluecker.iter().zip(&h.pluecker).all(|(a, b)| (a - b).norm() < 1e-8)));
    }
    // Five incidences: a 4-cycle plus one line meeting a single cycle vertex.
    assert_eq!(r.edges().len(), 5);
    let degrees: Vec<usize> = (0..5).map(|a| r.pattern[a].iter().enumerate().filter(|&(b, &m)| m && a != b).count()).collect();
    let mut sorted = degrees.clone();
    sorted.sort();
    assert_eq!(sorted, vec![1, 2, 2, 2, 3]);
    let hand_meets = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).filter(|&(a, b)| meets(&hand[a], &hand[b], 1e-7) == Incidence::Meet).count();
    assert_eq!(hand_meets, 5);
}

#[test]
fn family_member_is_accepted_at_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = family_generators();
    let a: Vec<i64> = (0..5).map(|_| rng.random_range(1..20)).collect();
    let mut coeffs: [Rational; 20] = std::array::from_fn(|_| Rational::from_integer(0.into()));
    for (gi, ai) in g.iter().zip(&a) {
        for (ck, gk) in coeffs.iter_mut().zip(gi.coeffs()) {
            *ck += gk * Rational::from_integer((*ai).into());
        }
    }
    let f = CubicForm::new(coeffs).unwrap();
    let set = find_lines(&f, &LineConfig::with_seed(1)).unwrap();
    let graph = incidence_graph(&set).unwrap();
    let res = brundu_logar(&f, &set, &graph, &BrunduLogarConfig::with_seed(1)).unwrap();
    assert_eq!(res.residual, 0.0);
    assert!(res.tuple.is_none());
    for (r, row) in res.transform.iter().enumerate() {
        for (k, z) in row.iter().enumerate() {
            assert_eq!(*z, c(if r == k { 1.0 } else { 0.0 }));
        }
    }
    for (p, ai) in res.parameters.iter().zip(&a) {
        assert_eq!(*p, c(*ai as f64));
    }
}

#[test]
fn random_cubics_reach_normal_form() {
    let cfg = BrunduLogarConfig::with_seed(2);
    let reference = reference_lset(&cfg).unwrap();
    let basis = family_generators().map(|g| g.to_complex());
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for seed in 0..2 {
        let f = CubicForm::random(&mut rng);
        let set = find_lines(&f, &LineConfig::with_seed(seed)).unwrap();
        let graph = incidence_graph(&set).unwrap();
        let res = brundu_logar_with(&f, &set, &graph, &reference, &cfg).unwrap();
        assert!(res.residual < 1e-6, "{}", res.residual);
        let g = compose_complex(&f.to_complex(), &res.transform);
        let mut combo = [Complex64::new(0.0, 0.0); 20];
        for (b, a) in basis.iter().zip(&res.parameters) {
            for (o, v) in combo.iter_mut().zip(b) {
                *o += a * v;
            }
        }
        assert!(max_err(&combo, &g) < 1e-6);
    }
}
