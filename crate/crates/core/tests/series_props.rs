use gwcore::{Bound, Monomial, QSeries, Rational, Scalar, Series, Window};
use proptest::prelude::*;

const N: usize = 2;
const R: usize = 1;

fn poly() -> impl Strategy<Value = QSeries> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -4i64..5, 1i64..4), 0..6).prop_map(
        |terms| {
            Series::from_terms(
                N,
                R,
                Window::unbounded(R),
                terms.into_iter().map(|((a, b, q), num, den)| {
                    (
                        Monomial::new(&[a, b], &[q]),
                        Rational::from_fraction(num, den),
                    )
                }),
            )
        },
    )
}

fn exp_t2(window: &Window) -> QSeries {
    Series::exp_linear(N, &[0], &[(1, Rational::from_i64(1))], window).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &QSeries::one(N, R), a.clone());
    }

    #[test]
    fn leibniz(a in poly(), b in poly(), t in 1u32..6, alpha in 0usize..N) {
        let w = Window::truncated(t, 2, R);
        let (a, b) = (a.truncate(&w), b.truncate(&w));
        let lhs = (&a * &b).partial_derivative(alpha).unwrap();
        let rhs = &(&a.partial_derivative(alpha).unwrap() * &b) + &(&a * &b.partial_derivative(alpha).unwrap());
        let c = lhs.compare(&rhs).unwrap();
        prop_assert!(c.equal);
        prop_assert_eq!(c.window.t_degree, Bound::Finite(t as i64 - 1));
    }

    #[test]
    fn window_soundness(w1 in 0u32..7, w2 in 0u32..7) {
        // e^{t²} · e^{t²} = e^{2t²} computed from truncated factors
        let (a, b) = (exp_t2(&Window::truncated(w1, 2, R)), exp_t2(&Window::truncated(w2, 2, R)));
        let product = &a * &b;
        let exact = Series::exp_linear(N, &[0], &[(1, Rational::from_i64(2))], &Window::truncated(6, 2, R)).unwrap();
        let c = product.compare(&exact).unwrap();
        prop_assert!(c.equal);
        prop_assert_eq!(c.window.t_degree, Bound::Finite(w1.min(w2) as i64));
    }

    #[test]
    fn text_round_trip(a in poly(), t in 0u32..6) {
        let a = a.truncate(&Window::truncated(t, 1, R));
        let text = a.to_string();
        let back: QSeries = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }
}

#[test]
fn spec_examples() {
    let t1 = QSeries::coordinate(N, R, 0).unwrap();
    assert!((&t1 + &(-&t1)).is_zero());
    let one_plus = &QSeries::one(N, R) + &QSeries::coordinate(N, R, 1).unwrap();
    let w1 = Window::truncated(1, 2, R);
    let sq = &one_plus.truncate(&w1) * &one_plus.truncate(&w1);
    assert_eq!(sq.coeff_of(&[0, 1], &[0]), Rational::from_i64(2));
    assert_eq!(sq.coeff_of(&[0, 2], &[0]), Rational::from_i64(0));
    assert_eq!(sq.window(), &w1);
    let e4 = exp_t2(&Window::truncated(4, 2, R));
    let de = e4.partial_derivative(1).unwrap();
    assert!(
        de.compare(&exp_t2(&Window::truncated(3, 2, R)))
            .unwrap()
            .equal
    );
    let long = &t1
        + &QSeries::from_terms(
            N,
            R,
            Window::truncated(5, 2, R),
            [(Monomial::new(&[5, 0], &[0]), Rational::from_i64(1))],
        );
    let c = t1
        .truncate(&Window::truncated(3, 2, R))
        .compare(&long)
        .unwrap();
    assert!(c.equal);
    assert_eq!(c.window.t_degree, Bound::Finite(3));
    assert!(
        !QSeries::zero(N, R, Window::unbounded(R))
            .compare(&t1)
            .unwrap()
            .equal
    );
    let empty = t1
        .truncate(&Window::truncated(0, 0, R))
        .partial_derivative(0)
        .unwrap();
    assert!(empty.compare(&t1).is_err());
}

#[test]
fn determinism() {
    let w = Window::truncated(6, 3, R);
    let a = exp_t2(&w).to_string();
    let b = exp_t2(&w).to_string();
    assert_eq!(a, b);
}
