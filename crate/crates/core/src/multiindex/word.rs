use std::fmt;

use crate::error::{Error, Result};

/// A letter of the alphabet `1..=d`.
pub type Letter = u8;

/// A finite multiindex `(a_1, ..., a_m)` over the alphabet `1..=d`.
///
/// The empty word labels the identity `s_∅ = I`. Words do not carry `d`;
/// range checks against a concrete alphabet go through [`Word::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, panicking on the letter `0`.
    pub fn from_letters(letters: impl Into<Vec<Letter>>) -> Self {
        let letters = letters.into();
        assert!(letters.iter().all(|&l| l >= 1), "letters are 1-based");
        Word(letters)
    }

    /// Builds a word checked against the alphabet `1..=d`.
    pub fn new(letters: impl Into<Vec<Letter>>, d: usize) -> Result<Self> {
        let w = Word(letters.into());
        w.check(d)?;
        Ok(w)
    }

    pub fn check(&self, d: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > d) {
            Some(&l) => Err(Error::LetterOutOfRange {
                letter: l as usize,
                d,
            }),
            None => Ok(()),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn contains(&self, j: Letter) -> bool {
        self.0.contains(&j)
    }

    pub fn position(&self, j: Letter) -> Option<usize> {
        self.0.iter().position(|&l| l == j)
    }

    /// Drops the first letter.
    pub fn sigma(&self) -> Result<Word> {
        if self.is_empty() {
            return Err(Error::Domain("sigma of the empty word".into()));
        }
        Ok(Word(self.0[1..].to_vec()))
    }

    /// `(j, a_1, ..., a_m)`.
    pub fn prepend(&self, j: Letter) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(j);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn push(&mut self, j: Letter) {
        self.0.push(j);
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.0.pop()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn remove_at(&self, p: usize) -> Word {
        let mut v = self.0.clone();
        v.remove(p);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Letter multiset as a sorted word, the block key of a Fock level.
    pub fn sorted(&self) -> Word {
        let mut v = self.0.clone();
        v.sort_unstable();
        Word(v)
    }

    /// Lexicographic rank among all words of the same length over `1..=d`.
    pub fn lex_index(&self, d: usize) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * d + (l as usize - 1))
    }

    /// Inverse of [`Word::lex_index`].
    pub fn from_lex_index(mut idx: usize, len: usize, d: usize) -> Word {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = (idx % d) as Letter + 1;
            idx /= d;
        }
        Word(v)
    }

    /// All words of length `n` in lexicographic order.
    pub fn all_of_length(n: usize, d: usize) -> impl Iterator<Item = Word> {
        let count = d.pow(n as u32);
        (0..count).map(move |i| Word::from_lex_index(i, n, d))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word::from_letters(v)
    }
}

impl<const N: usize> From<[Letter; N]> for Word {
    fn from(v: [Letter; N]) -> Self {
        Word::from_letters(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// True iff `a` and `b` have the same letter multiset.
pub fn is_permutation(a: &Word, b: &Word) -> bool {
    a.len() == b.len() && a.sorted() == b.sorted()
}

/// `a ∖ b`: removes the letters of `b` from `a` one at a time, each time the
/// first occurrence in the current residual; letters of `b` that no longer
/// occur are skipped.
pub fn setminus(a: &Word, b: &Word) -> Word {
    let mut residual = a.clone();
    for &l in b.letters() {
        if let Some(p) = residual.position(l) {
            residual.0.remove(p);
        }
    }
    residual
}
