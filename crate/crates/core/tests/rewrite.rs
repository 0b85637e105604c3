mod common;

use common::{arb_q, close};
use proptest::prelude::*;
use wickrep::multiindex::{QMatrix, Word};
use wickrep::rewrite::{
    adjoint_word, inversions, normal_order, normal_order_traced, oracle_reduce, parse_generators, Generator, Monomial,
    Strategy as Order,
};

fn arb_generators(d: usize, max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec((1..=d as u8, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(letter, starred)| Generator { letter, starred }).collect())
}

fn same(a: &Monomial<f64>, b: &Monomial<f64>, tol: f64) -> bool {
    close(a.coeff, b.coeff, tol) && (a.is_zero() || (a.creators == b.creators && a.annihilators == b.annihilators))
}

proptest! {
    #[test]
    fn measure_strictly_decreases(w in arb_generators(3, 12), q in arb_q(3, 0.9)) {
        for s in [Order::Leftmost, Order::Rightmost] {
            let t = normal_order_traced(&w, &q, s).unwrap();
            prop_assert_eq!(t.measures[0], inversions(&w));
            prop_assert!(t.measures.windows(2).all(|p| p[1] < p[0]));
            prop_assert_eq!(*t.measures.last().unwrap(), 0);
        }
    }

    #[test]
    fn strategies_agree(w in arb_generators(3, 12), q in arb_q(3, 0.9)) {
        let l = normal_order_traced(&w, &q, Order::Leftmost).unwrap().result;
        let r = normal_order_traced(&w, &q, Order::Rightmost).unwrap().result;
        prop_assert!(same(&l, &r, 1e-12), "{l:?} vs {r:?}");
    }

    #[test]
    fn adjoint_word_gives_adjoint_monomial(w in arb_generators(3, 10), q in arb_q(3, 0.9)) {
        let m = normal_order(&w, &q).unwrap();
        let ma = normal_order(&adjoint_word(&w), &q).unwrap();
        prop_assert!(same(&ma, &m.adjoint(), 1e-12));
    }

    #[test]
    fn normal_form_is_fixed(w in arb_generators(3, 10), q in arb_q(3, 0.9)) {
        let m = normal_order(&w, &q).unwrap();
        prop_assume!(!m.is_zero());
        let body: Vec<Generator> = m.creators.letters().iter().map(|&l| Generator::s(l))
            .chain(m.annihilators.letters().iter().rev().map(|&l| Generator::s_star(l)))
            .collect();
        let again = normal_order(&body, &q).unwrap();
        let unit = Monomial { coeff: nalgebra::Complex::new(1.0, 0.0), ..m };
        prop_assert!(same(&again, &unit, 0.0));
    }
}

#[test]
fn small_reductions() {
    let q = QMatrix::<f64>::from_upper(3, |i, j| nalgebra::Complex::new(0.1 * (i + j) as f64, 0.05 * j as f64)).unwrap();
    let (c, mu, nu) = oracle_reduce(&Word::from([1, 2]), &Word::from([1, 2]), &q).unwrap();
    assert_eq!((c, mu, nu), (nalgebra::Complex::new(1.0, 0.0), Word::empty(), Word::empty()));
    let (c, mu, nu) = oracle_reduce(&Word::from([1]), &Word::from([2, 1]), &q).unwrap();
    assert_eq!(c, q.get(1, 2));
    assert_eq!((mu, nu), (Word::from([2]), Word::empty()));
    let (c, mu, nu) = oracle_reduce(&Word::from([1]), &Word::from([2, 2]), &q).unwrap();
    assert!(close(c, q.get(1, 2) * q.get(1, 2), 1e-15));
    assert_eq!((mu, nu), (Word::from([2, 2]), Word::from([1])));
}

#[test]
fn generator_syntax() {
    let w = parse_generators("1* 2 1 2*", Some(2)).unwrap();
    assert_eq!(w, vec![Generator::s_star(1), Generator::s(2), Generator::s(1), Generator::s_star(2)]);
    assert!(parse_generators("1 3*", Some(2)).is_err());
    assert!(parse_generators("1 **", None).is_err());
    let q = QMatrix::<f64>::real(2, 0.5).unwrap();
    assert_eq!(normal_order(&parse_generators("1* 2", None).unwrap(), &q).unwrap().body(), "s_2 s_1*");
    assert_eq!(normal_order(&parse_generators("2* 1 2", None).unwrap(), &q).unwrap().body(), "s_1");
    assert!(normal_order(&parse_generators("1* 2* 2 1 1*", None).unwrap(), &q).unwrap().body() == "s_1*");
}
