use std::fmt;

use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// An eventually periodic infinite multiindex `u · v · v · v · ...`.
///
/// Always held in canonical form: `v` is primitive, and `u` is either empty
/// or ends with a letter different from the last letter of `v`. Two canonical
/// specs denote the same sequence iff they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailSpec {
    prefix: Word,
    period: Word,
}

fn primitive_root(v: &[Letter]) -> Vec<Letter> {
    let n = v.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p]) {
            return v[..p].to_vec();
        }
    }
    v.to_vec()
}

impl TailSpec {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Domain("tail period must be nonempty".into()));
        }
        let mut v = primitive_root(period.letters());
        let mut u = prefix.letters().to_vec();
        while let (Some(&a), Some(&b)) = (u.last(), v.last()) {
            if a != b {
                break;
            }
            u.pop();
            v.rotate_right(1);
        }
        Ok(TailSpec {
            prefix: Word::from_letters(u),
            period: Word::from_letters(v),
        })
    }

    /// The constant sequence `j j j ...`.
    pub fn constant(j: Letter) -> Self {
        TailSpec {
            prefix: Word::empty(),
            period: Word::from_letters(vec![j]),
        }
    }

    pub fn periodic(period: impl Into<Word>) -> Result<Self> {
        Self::new(Word::empty(), period.into())
    }

    pub fn check(&self, d: usize) -> Result<()> {
        self.prefix.check(d)?;
        self.period.check(d)
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn preperiod_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Letter at 0-based position `i`.
    pub fn letter_at(&self, i: usize) -> Letter {
        let u = self.prefix.letters();
        if i < u.len() {
            u[i]
        } else {
            let v = self.period.letters();
            v[(i - u.len()) % v.len()]
        }
    }

    /// The first `n` letters.
    pub fn head(&self, n: usize) -> Word {
        Word::from_letters((0..n).map(|i| self.letter_at(i)).collect::<Vec<_>>())
    }

    /// Position of the first occurrence of `j`; scanning the preperiod and
    /// one full period decides absence.
    pub fn first_occurrence(&self, j: Letter) -> Option<usize> {
        (0..self.preperiod_len() + self.period_len()).find(|&i| self.letter_at(i) == j)
    }

    pub fn contains(&self, j: Letter) -> bool {
        self.first_occurrence(j).is_some()
    }

    pub fn sigma(&self) -> TailSpec {
        if self.prefix.is_empty() {
            let mut v = self.period.letters().to_vec();
            v.rotate_left(1);
            TailSpec {
                prefix: Word::empty(),
                period: Word::from_letters(v),
            }
        } else {
            TailSpec {
                prefix: self.prefix.sigma().expect("nonempty prefix"),
                period: self.period.clone(),
            }
        }
    }

    pub fn sigma_n(&self, n: usize) -> TailSpec {
        let p = self.preperiod_len();
        // σ^m is determined by m for m < P and by (m - P) mod period after.
        let n = if n >= p {
            p + (n - p) % self.period_len()
        } else {
            n
        };
        (0..n).fold(self.clone(), |t, _| t.sigma())
    }

    pub fn prepend(&self, j: Letter) -> TailSpec {
        TailSpec::new(self.prefix.prepend(j), self.period.clone()).expect("nonempty period")
    }

    /// `w · self`.
    pub fn prepend_word(&self, w: &Word) -> TailSpec {
        TailSpec::new(w.concat(&self.prefix), self.period.clone()).expect("nonempty period")
    }
}

impl fmt::Display for TailSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{}", self.prefix)?;
        }
        write!(f, ";{}", self.period)
    }
}

/// Anything denoting an eventually periodic infinite multiindex.
pub trait InfiniteWord {
    fn to_tail(&self) -> TailSpec;
}

impl InfiniteWord for TailSpec {
    fn to_tail(&self) -> TailSpec {
        self.clone()
    }
}

/// True iff `σ^m(a) = σ^n(b)` for some `m, n`.
pub fn tails_equivalent(a: &TailSpec, b: &TailSpec) -> bool {
    let (va, vb) = (a.period.letters(), b.period.letters());
    va.len() == vb.len() && (0..va.len()).any(|r| (0..va.len()).all(|i| va[(i + r) % va.len()] == vb[i]))
}

/// Least `m >= 0` with `σ^m(a) = σ^m(b)`, if any.
pub fn align_shift(a: &TailSpec, b: &TailSpec) -> Option<usize> {
    let p = a.period_len();
    if p != b.period_len() {
        return None;
    }
    let start = a.preperiod_len().max(b.preperiod_len());
    // Both are purely periodic from `start`; one period decides equality.
    if (start..start + p).any(|i| a.letter_at(i) != b.letter_at(i)) {
        return None;
    }
    Some(
        (0..start)
            .rev()
            .find(|&i| a.letter_at(i) != b.letter_at(i))
            .map_or(0, |i| i + 1),
    )
}
