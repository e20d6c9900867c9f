use cubic_core::{parse_cubic, CubicForm, MultiPoly, ProjTransform, Rational};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn cubic() -> impl Strategy<Value = CubicForm> {
    prop::array::uniform20((-7i64..=7, 1i64..=4))
        .prop_filter_map("nonzero form", |c| CubicForm::new(c.map(|(n, d)| q(n, d))).ok())
}

fn transform() -> impl Strategy<Value = ProjTransform> {
    prop::array::uniform4(prop::array::uniform4(-3i64..=3)).prop_filter_map("invertible", |m| ProjTransform::from_integers(m).ok())
}

fn point() -> impl Strategy<Value = [Rational; 4]> {
    prop::array::uniform4((-9i64..=9, 1i64..=5)).prop_map(|p| p.map(|(n, d)| q(n, d)))
}

fn linear_image(a: &ProjTransform, p: &[Rational; 4]) -> [Rational; 4] {
    a.apply(p)
}

#[test]
fn printing_known_forms() {
    assert_eq!(parse_cubic(&CubicForm::fermat().to_string()).unwrap(), CubicForm::fermat());
    assert_eq!(parse_cubic("x^3 + y^3 + z^3 + w^3").unwrap(), CubicForm::fermat());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_print_round_trip(f in cubic()) {
        prop_assert_eq!(parse_cubic(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn euler_identity(f in cubic()) {
        let g = f.gradient();
        let mut sum = MultiPoly::zero();
        for (i, gi) in g.iter().enumerate() {
            sum = &sum + &(&MultiPoly::var(i) * gi);
        }
        prop_assert_eq!(sum, f.to_poly().scale(&q(3, 1)));
    }

    #[test]
    fn action_composes(f in cubic(), a in transform(), b in transform()) {
        // f(A(BX)) = f((AB)X)
        prop_assert_eq!(f.act(&a).act(&b), f.act(&a.mul(&b)));
    }

    #[test]
    fn gradient_equivariance(f in cubic(), a in transform(), p in point()) {
        // ∇(f∘A)(p) = Aᵀ ∇f(Ap)
        let lhs: Vec<Rational> = f.act(&a).gradient().iter().map(|g| g.eval_rational(&p)).collect();
        let ap = linear_image(&a, &p);
        let grad: Vec<Rational> = f.gradient().iter().map(|g| g.eval_rational(&ap)).collect();
        let m = a.matrix();
        for j in 0..4 {
            let rhs = (0..4).fold(q(0, 1), |s, i| s + &m[i][j] * &grad[i]);
            prop_assert_eq!(&lhs[j], &rhs);
        }
    }

    #[test]
    fn hessian_chain_rule(f in cubic(), a in transform(), p in point()) {
        // det H(f∘A)(p) = det(A)² · det Hf(Ap)
        let lhs = f.act(&a).hessian_det().eval_rational(&p);
        let d = a.det();
        let rhs = &d * &d * f.hessian_det().eval_rational(&linear_image(&a, &p));
        prop_assert_eq!(lhs, rhs);
    }
}
