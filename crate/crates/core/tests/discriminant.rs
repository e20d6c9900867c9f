use cubic_core::algebra::parse_cubic;
use cubic_core::resultant::{discriminant, is_singular};
use cubic_core::{CubicForm, ProjTransform, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn fermat_value_is_pinned() {
    // Res(x², y², z², w²) = 1 and Res is of degree 8 in each quadric, so the
    // partials (3x², 3y², 3z², 3w²) give 3^32.
    let d = discriminant(&CubicForm::fermat()).unwrap();
    assert!(!d.zero);
    assert_eq!(d.value, Rational::from_integer(BigInt::from(3).pow(32)));
    assert_eq!(d.value.to_string(), "1853020188851841");
}

#[test]
fn cayley_nodal_cubic_is_singular() {
    let d = discriminant(&CubicForm::cayley_nodal()).unwrap();
    assert!(d.zero && d.value.is_zero());
    let r = is_singular(&CubicForm::cayley_nodal(), 4).unwrap();
    assert!(r.singular);
    let w = r.witness.unwrap();
    assert!(w.isolated);
    assert_eq!(w.points.len(), 4);
    // The nodes are the coordinate points.
    for p in &w.points {
        let big = p.iter().filter(|z| z.norm() > 1e-8).count();
        assert_eq!(big, 1, "{p:?}");
    }
}

#[test]
fn triple_plane_has_non_isolated_singularities() {
    let f = parse_cubic("x^3").unwrap();
    let r = is_singular(&f, 1).unwrap();
    assert!(r.singular);
    assert!(!r.witness.unwrap().isolated);
    let smooth = is_singular(&CubicForm::fermat(), 1).unwrap();
    assert!(!smooth.singular && smooth.witness.is_none());
}

#[test]
fn degree_thirty_two_homogeneity() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let f = CubicForm::random(&mut rng);
    let d = discriminant(&f).unwrap().value;
    let two = Rational::from_integer(2.into());
    let d2 = discriminant(&f.scale(&two).unwrap()).unwrap().value;
    assert_eq!(d2, d * Rational::from_integer(BigInt::from(2).pow(32)));
}

#[test]
fn relative_invariance_ratio_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = ProjTransform::random_integer(&mut rng, 2);
    let ratios: Vec<Rational> = (0..2)
        .map(|_| {
            let f = CubicForm::random(&mut rng);
            let d = discriminant(&f).unwrap().value;
            assert!(!d.is_zero());
            discriminant(&f.act(&a)).unwrap().value / d
        })
        .collect();
    assert_eq!(ratios[0], ratios[1]);
    // ∇(f∘A) = Aᵀ·(∇f∘A): a factor det(A)^8 from the linear combination and
    // det(A)^16 from the substitution.
    assert_eq!(ratios[0], a.det().pow(24));
    assert!(ratios[0] != Rational::one() || a.det().pow(24) == Rational::one());
}
