//! Normal ordering of words in `s_j`, `s_j^*`.
//!
//! The two rules `s_i^* s_i -> I` and `s_i^* s_j -> q_ij s_j s_i^*` each have
//! a single-term right-hand side, so every word reduces to one scalar-weighted
//! monomial `c · s_μ s_ν^*`. This engine is deliberately naive; it serves as
//! the independent oracle for the closed-form scalars in [`crate::multiindex`].

use std::fmt;

use crate::error::{Error, Result};
use crate::multiindex::{parse_letter, tokens, Letter, QMatrix, Word};
use crate::scalar::{is_zero, one, Cx, Real};

/// `s_j` or `s_j^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub letter: Letter,
    pub starred: bool,
}

impl Generator {
    pub fn s(letter: Letter) -> Self {
        Generator {
            letter,
            starred: false,
        }
    }

    pub fn s_star(letter: Letter) -> Self {
        Generator {
            letter,
            starred: true,
        }
    }

    pub fn adjoint(self) -> Self {
        Generator {
            letter: self.letter,
            starred: !self.starred,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s_{}{}", self.letter, if self.starred { "*" } else { "" })
    }
}

/// `coeff · s_creators · s_annihilators^*`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<T: Real> {
    pub coeff: Cx<T>,
    pub creators: Word,
    pub annihilators: Word,
}

impl<T: Real> Monomial<T> {
    pub fn identity() -> Self {
        Monomial {
            coeff: one(),
            creators: Word::empty(),
            annihilators: Word::empty(),
        }
    }

    pub fn is_zero(&self) -> bool {
        is_zero(self.coeff)
    }

    pub fn adjoint(&self) -> Self {
        Monomial {
            coeff: self.coeff.conj(),
            creators: self.annihilators.clone(),
            annihilators: self.creators.clone(),
        }
    }

    /// The operator part as a product of generators, e.g. `s_2 s_1*`, or `I`.
    pub fn body(&self) -> String {
        let gens: Vec<String> = self
            .creators
            .letters()
            .iter()
            .map(|&l| Generator::s(l).to_string())
            .chain(
                self.annihilators
                    .letters()
                    .iter()
                    .rev()
                    .map(|&l| Generator::s_star(l).to_string()),
            )
            .collect();
        if gens.is_empty() {
            "I".into()
        } else {
            gens.join(" ")
        }
    }
}

/// Which redex a reduction step fires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// Number of (starred, unstarred) pairs standing in the wrong order.
pub fn inversions(word: &[Generator]) -> usize {
    let mut starred_seen = 0;
    let mut count = 0;
    for g in word {
        if g.starred {
            starred_seen += 1;
        } else {
            count += starred_seen;
        }
    }
    count
}

fn check_word(word: &[Generator], d: usize) -> Result<()> {
    match word.iter().find(|g| g.letter == 0 || g.letter as usize > d) {
        Some(g) => Err(Error::LetterOutOfRange {
            letter: g.letter as usize,
            d,
        }),
        None => Ok(()),
    }
}

/// A reduction together with the inversion count before each step and after
/// the last one.
#[derive(Clone, Debug)]
pub struct Trace<T: Real> {
    pub result: Monomial<T>,
    pub measures: Vec<usize>,
}

/// Reduces a word to normal order, recording the termination measure.
///
/// Panics if a step fails to strictly decrease the inversion count.
pub fn normal_order_traced<T: Real>(
    word: &[Generator],
    q: &QMatrix<T>,
    strategy: Strategy,
) -> Result<Trace<T>> {
    check_word(word, q.d())?;
    let mut w = word.to_vec();
    let mut coeff = one::<T>();
    let mut measures = vec![inversions(&w)];
    loop {
        let mut redexes = (0..w.len().saturating_sub(1)).filter(|&i| w[i].starred && !w[i + 1].starred);
        let pos = match strategy {
            Strategy::Leftmost => redexes.next(),
            Strategy::Rightmost => redexes.next_back(),
        };
        let Some(i) = pos else { break };
        let (a, b) = (w[i], w[i + 1]);
        if a.letter == b.letter {
            w.drain(i..i + 2);
        } else {
            coeff *= q.get(a.letter, b.letter);
            w.swap(i, i + 1);
        }
        let m = inversions(&w);
        let prev = *measures.last().expect("nonempty");
        assert!(m < prev, "rewrite step did not decrease inversions ({prev} -> {m})");
        measures.push(m);
    }
    let split = w.iter().position(|g| g.starred).unwrap_or(w.len());
    let result = if is_zero(coeff) {
        Monomial {
            coeff,
            creators: Word::empty(),
            annihilators: Word::empty(),
        }
    } else {
        Monomial {
            coeff,
            creators: Word::from_letters(w[..split].iter().map(|g| g.letter).collect::<Vec<_>>()),
            annihilators: Word::from_letters(w[split..].iter().rev().map(|g| g.letter).collect::<Vec<_>>()),
        }
    };
    Ok(Trace { result, measures })
}

/// The monomial equal to `word` in the algebra, by leftmost reduction.
pub fn normal_order<T: Real>(word: &[Generator], q: &QMatrix<T>) -> Result<Monomial<T>> {
    Ok(normal_order_traced(word, q, Strategy::Leftmost)?.result)
}

/// The word `s_a^* s_b`, i.e. `s_{a_m}^* ... s_{a_1}^* s_{b_1} ... s_{b_n}`.
pub fn pair_word(a: &Word, b: &Word) -> Vec<Generator> {
    a.letters()
        .iter()
        .rev()
        .map(|&l| Generator::s_star(l))
        .chain(b.letters().iter().map(|&l| Generator::s(l)))
        .collect()
}

/// Normal-orders `s_a^* s_b` and returns `(coeff, creators, annihilators)`.
pub fn oracle_reduce<T: Real>(a: &Word, b: &Word, q: &QMatrix<T>) -> Result<(Cx<T>, Word, Word)> {
    let m = normal_order(&pair_word(a, b), q)?;
    Ok((m.coeff, m.creators, m.annihilators))
}

/// The formal adjoint of a word: reversed, stars toggled.
pub fn adjoint_word(word: &[Generator]) -> Vec<Generator> {
    word.iter().rev().map(|g| g.adjoint()).collect()
}

/// Parses `"1* 2 1 2*"`.
pub fn parse_generators(text: &str, d: Option<usize>) -> Result<Vec<Generator>> {
    tokens(text)
        .into_iter()
        .map(|(col, tok)| match tok.strip_suffix('*') {
            Some(stem) => parse_letter(stem, col, d).map(Generator::s_star),
            None => parse_letter(tok, col, d).map(Generator::s),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn q() -> QMatrix<f64> {
        QMatrix::uniform(2, Complex::new(0.3, 0.4)).unwrap()
    }

    fn nf(text: &str) -> Monomial<f64> {
        normal_order(&parse_generators(text, Some(2)).unwrap(), &q()).unwrap()
    }

    #[test]
    fn rule_examples() {
        assert_eq!(nf("1* 1"), Monomial::identity());
        let m = nf("1* 2");
        assert_eq!(m.coeff, q().get(1, 2));
        assert_eq!(m.body(), "s_2 s_1*");
        let m = nf("2* 1 2");
        assert_eq!(m.coeff, q().get(2, 1));
        assert_eq!(m.body(), "s_1");
        assert_eq!(nf("").body(), "I");
    }

    #[test]
    fn oracle_examples() {
        let q = q();
        let (c, mu, nu) = oracle_reduce(&Word::from([1, 2]), &Word::from([1, 2]), &q).unwrap();
        assert_eq!((c, mu, nu), (Complex::new(1.0, 0.0), Word::empty(), Word::empty()));
        let (c, mu, nu) = oracle_reduce(&Word::from([1]), &Word::from([2, 1]), &q).unwrap();
        assert_eq!((c, mu, nu), (q.get(1, 2), Word::from([2]), Word::empty()));
        let (c, mu, nu) = oracle_reduce(&Word::from([1]), &Word::from([2, 2]), &q).unwrap();
        assert!((c - q.get(1, 2) * q.get(1, 2)).norm() < 1e-15);
        assert_eq!((mu, nu), (Word::from([2, 2]), Word::from([1])));
    }

    #[test]
    fn annihilator_order() {
        // s_1^* s_3^* with nothing to cancel: s_{(3,1)}^* = s_1^* s_3^*
        let q3 = QMatrix::<f64>::real(3, 0.5).unwrap();
        let (_, mu, nu) = oracle_reduce(&Word::from([3, 1]), &Word::from([2]), &q3).unwrap();
        assert_eq!(mu, Word::from([2]));
        assert_eq!(nu, Word::from([3, 1]));
    }

    #[test]
    fn zero_coefficient_is_canonical() {
        let m = normal_order(&parse_generators("1* 2", None).unwrap(), &QMatrix::<f64>::zero(2)).unwrap();
        assert!(m.is_zero());
        assert_eq!(m.body(), "I");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            normal_order(&[Generator::s(3)], &q()),
            Err(Error::LetterOutOfRange { letter: 3, d: 2 })
        ));
        assert!(matches!(parse_generators("1* x", None), Err(Error::Parse { column: 4, .. })));
        assert!(matches!(parse_generators("1 3*", Some(2)), Err(Error::Parse { column: 3, .. })));
    }

    #[test]
    fn measures_decrease() {
        let w = parse_generators("2* 1* 1 2 1 2* 2", None).unwrap();
        let t = normal_order_traced(&w, &q(), Strategy::Rightmost).unwrap();
        assert!(t.measures.windows(2).all(|p| p[1] < p[0]));
        assert_eq!(*t.measures.last().unwrap(), 0);
    }
}
