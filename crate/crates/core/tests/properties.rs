use akgeo::sym::{differentiate, evaluate, parse_expression, wirtinger, Coordinate, Expr, Point};
use num_complex::Complex64;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (1u8..=4).prop_map(Expr::x),
        (-3i64..=3).prop_map(Expr::int),
        (1i64..=4, 2i64..=5).prop_map(|(n, d)| Expr::ratio(n, d)),
        Just(Expr::imag_unit()),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            (inner.clone(), 0i64..=3).prop_map(|(a, k)| a.powi(k)),
            inner.clone().prop_map(|a| a.conj()),
            inner
                .clone()
                .prop_map(|a| a.scale(&akgeo::sym::CRational::ratio(1, 4)).exp()),
            inner.prop_map(|a| (&Expr::int(2) + &(&a * &a.conj())).sqrt()),
        ]
    })
}

fn point() -> impl Strategy<Value = Point> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(Point::new)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn tame(e: &Expr, p: &Point) -> bool {
    evaluate(e, p).is_ok_and(|z| z.norm() < 1e4)
}

fn fd(e: &Expr, p: &Point, c: usize) -> Complex64 {
    let h = 1e-3;
    let at = |k: f64| {
        let mut q = p.clone();
        q.coords[c] += k * h;
        evaluate(e, &q).unwrap()
    };
    (at(-2.0) - at(-1.0) * 8.0 + at(1.0) * 8.0 - at(2.0)) / (12.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conjugation_is_an_involution(e in expr(), p in point()) {
        prop_assume!(tame(&e, &p));
        let a = evaluate(&e, &p).unwrap();
        prop_assert!(close(evaluate(&e.conj().conj(), &p).unwrap(), a, 1e-12));
        prop_assert!(close(evaluate(&e.conj(), &p).unwrap(), a.conj(), 1e-12));
    }

    #[test]
    fn derivative_matches_finite_differences(e in expr(), p in point(), c in 0usize..4) {
        prop_assume!(tame(&e, &p));
        let exact = evaluate(&differentiate(&e, Coordinate::from_slot(c)), &p).unwrap();
        let approx = fd(&e, &p, c);
        prop_assert!(close(exact, approx, 1e-6), "{exact} vs {approx} for {e}");
    }

    #[test]
    fn wirtinger_derivatives_split_real_ones(e in expr(), p in point(), k in 1u8..=2, barred in any::<bool>()) {
        prop_assume!(tame(&e, &p));
        let (re, im) = (2 * k as usize - 2, 2 * k as usize - 1);
        let dx = evaluate(&differentiate(&e, Coordinate::from_slot(re)), &p).unwrap();
        let dy = evaluate(&differentiate(&e, Coordinate::from_slot(im)), &p).unwrap();
        let i = Complex64::i();
        let expected = if barred { (dx + i * dy) / 2.0 } else { (dx - i * dy) / 2.0 };
        prop_assert!(close(evaluate(&wirtinger(&e, k, barred), &p).unwrap(), expected, 1e-10));
    }

    #[test]
    fn printing_round_trips_through_the_parser(e in expr(), p in point()) {
        prop_assume!(tame(&e, &p));
        let text = e.to_string();
        let back = parse_expression(&text, &[]).unwrap_or_else(|err| panic!("{err} in {text}"));
        prop_assert!(close(evaluate(&back, &p).unwrap(), evaluate(&e, &p).unwrap(), 1e-10), "{text}");
    }

    #[test]
    fn sum_and_product_evaluate_pointwise(a in expr(), b in expr(), p in point()) {
        prop_assume!(tame(&a, &p) && tame(&b, &p));
        let (x, y) = (evaluate(&a, &p).unwrap(), evaluate(&b, &p).unwrap());
        prop_assert!(close(evaluate(&(&a + &b), &p).unwrap(), x + y, 1e-12));
        prop_assert!(close(evaluate(&(&a * &b), &p).unwrap(), x * y, 1e-12));
    }
}
