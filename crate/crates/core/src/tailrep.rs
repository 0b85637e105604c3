//! The tail representation `π_α` on finite windows of `H_α`.
//!
//! Basis vectors are `e_β` for infinite multiindices `β = h · σ^m(α)` with a
//! finite head `h` and a shift `m` of the reference tail `α`. The scalar
//! product is `<e_β, e_γ> = q(γ, β)`, nonzero only when `β` and `γ` agree
//! after a common shift and their heads up to that shift are permutations.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::metric::GramMatrix;
use crate::multiindex::{
    align_shift, is_permutation, q_finite, q_infinite, q_letter, tails_equivalent, InfiniteWord, Letter, QMatrix,
    TailSpec, Word,
};
use crate::scalar::{max_abs, one, zero, CMatrix, Cx, Real};
use crate::window::{Image, RepWindow};

/// The infinite multiindex `head · σ^offset(reference)`, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedWord {
    head: Word,
    offset: usize,
    reference: TailSpec,
}

/// Reduces `(head, offset)` to the representative with the shortest head and
/// the offset in `[0, P + p)` (`P` preperiod, `p` period of the reference).
///
/// A trailing head letter is absorbed when it equals the letter of the
/// reference just before the current shift; at shift `P` the predecessor may
/// also be the last period letter (shift `P + p - 1`).
pub fn canonicalize(head: &Word, offset: usize, reference: &TailSpec) -> ExtendedWord {
    let pre = reference.preperiod_len();
    let per = reference.period_len();
    let mut m = if offset >= pre + per {
        pre + (offset - pre) % per
    } else {
        offset
    };
    let mut h = head.clone();
    let period_last = reference.period().last().expect("nonempty period");
    while let Some(c) = h.last() {
        if m >= 1 && reference.letter_at(m - 1) == c {
            m -= 1;
        } else if m == pre && period_last == c {
            m = pre + per - 1;
        } else {
            break;
        }
        h.pop();
    }
    ExtendedWord {
        head: h,
        offset: m,
        reference: reference.clone(),
    }
}

impl ExtendedWord {
    /// The pure reference tail `e_α`.
    pub fn pure(reference: &TailSpec) -> Self {
        canonicalize(&Word::empty(), 0, reference)
    }

    pub fn new(head: Word, offset: usize, reference: &TailSpec) -> Self {
        canonicalize(&head, offset, reference)
    }

    pub fn head(&self) -> &Word {
        &self.head
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn reference(&self) -> &TailSpec {
        &self.reference
    }

    pub fn is_canonical_form(head: &Word, offset: usize, reference: &TailSpec) -> bool {
        let c = canonicalize(head, offset, reference);
        c.head == *head && c.offset == offset
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.head.len() {
            self.head.letters()[i]
        } else {
            self.reference.letter_at(self.offset + i - self.head.len())
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word::from_letters((0..n).map(|i| self.letter_at(i)).collect::<Vec<_>>())
    }

    /// Label of `π_α(s_j) e_β`.
    pub fn apply_s(&self, j: Letter) -> ExtendedWord {
        canonicalize(&self.head.prepend(j), self.offset, &self.reference)
    }

    /// `π_α(s_j^*) e_β = q(j, β) e_{β∖j}`, or `None` when `j` never occurs.
    pub fn apply_sstar<T: Real>(&self, j: Letter, q: &QMatrix<T>) -> Option<(Cx<T>, ExtendedWord)> {
        if let Some(p) = self.head.position(j) {
            let factor = q_letter(j, &self.head.letters()[..p], q);
            return Some((factor, canonicalize(&self.head.remove_at(p), self.offset, &self.reference)));
        }
        let rest = self.reference.sigma_n(self.offset);
        let t = rest.first_occurrence(j)?;
        let passed = rest.head(t);
        let factor = q_letter(j, self.head.letters(), q) * q_letter(j, passed.letters(), q);
        let head = self.head.concat(&passed);
        Some((factor, canonicalize(&head, self.offset + t + 1, &self.reference)))
    }
}

impl InfiniteWord for ExtendedWord {
    fn to_tail(&self) -> TailSpec {
        self.reference.sigma_n(self.offset).prepend_word(&self.head)
    }
}

impl fmt::Display for ExtendedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.head, self.offset)
    }
}

/// `<e_β, e_γ>` through an explicit common-shift alignment over the shared
/// reference: the sequences agree from some point on iff
/// `m_β + |h_γ| ≡ m_γ + |h_β|` modulo the period, and then the Fock product
/// of any sufficiently long common-length heads gives the value.
pub fn aligned_inner<T: Real>(beta: &ExtendedWord, gamma: &ExtendedWord, q: &QMatrix<T>) -> Cx<T> {
    debug_assert_eq!(beta.reference, gamma.reference);
    let pre = beta.reference.preperiod_len();
    let per = beta.reference.period_len();
    if (beta.offset + gamma.head.len()) % per != (gamma.offset + beta.head.len()) % per {
        return zero();
    }
    let k = beta.head.len().max(gamma.head.len()) + pre + per;
    let (hb, hg) = (beta.prefix(k), gamma.prefix(k));
    if is_permutation(&hb, &hg) {
        q_finite(&hg, &hb, q)
    } else {
        zero()
    }
}

/// Window of `H_α`: canonical extended words with head length at most
/// `max_head` and offset at most `max_offset`.
#[derive(Clone, Debug)]
pub struct TailWindow<T: Real> {
    pub reference: TailSpec,
    pub max_head: usize,
    pub max_offset: usize,
    pub basis: Vec<ExtendedWord>,
    index: HashMap<ExtendedWord, usize>,
    pub gram: GramMatrix<T>,
    /// Largest difference between the two Gram routes.
    pub route_discrepancy: T,
    /// Pairs with tail-equivalent labels but no equal-shift alignment; their
    /// inner product is zero.
    pub phase_orthogonal_pairs: usize,
}

impl<T: Real> TailWindow<T> {
    pub fn new(reference: &TailSpec, max_head: usize, max_offset: usize, q: &QMatrix<T>) -> Result<Self> {
        reference.check(q.d())?;
        let d = q.d();
        let pre = reference.preperiod_len();
        let per = reference.period_len();
        let mut basis = Vec::new();
        for m in 0..=max_offset.min(pre + per - 1) {
            for len in 0..=max_head {
                for h in Word::all_of_length(len, d) {
                    if ExtendedWord::is_canonical_form(&h, m, reference) {
                        basis.push(ExtendedWord {
                            head: h,
                            offset: m,
                            reference: reference.clone(),
                        });
                    }
                }
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let (gram, route_discrepancy, phase_orthogonal_pairs) = gram_tail(&basis, q);
        Ok(TailWindow {
            reference: reference.clone(),
            max_head,
            max_offset,
            basis,
            index,
            gram,
            route_discrepancy,
            phase_orthogonal_pairs,
        })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, b: &ExtendedWord) -> Option<usize> {
        self.index.get(b).copied()
    }

    pub fn description(&self) -> String {
        format!("tail(ref={}, L={}, M={})", self.reference, self.max_head, self.max_offset)
    }

    /// `π_α(s_j)` from this window into `target`; every column has one 1.
    pub fn op_s(&self, j: Letter, target: &TailWindow<T>) -> Result<CMatrix<T>> {
        let mut m = CMatrix::zeros(target.len(), self.len());
        for (c, b) in self.basis.iter().enumerate() {
            let img = b.apply_s(j);
            let r = target.index_of(&img).ok_or_else(|| {
                Error::WindowTooSmall(format!("s_{j} e_{b} = e_{img} lies outside {}", target.description()))
            })?;
            m[(r, c)] = one();
        }
        Ok(m)
    }

    /// `π_α(s_j^*)` from this window into `target`; columns whose image
    /// leaves `target` are zero and marked non-interior.
    pub fn op_sstar(&self, j: Letter, target: &TailWindow<T>, q: &QMatrix<T>) -> (CMatrix<T>, Vec<bool>) {
        let mut m = CMatrix::zeros(target.len(), self.len());
        let mut interior = vec![true; self.len()];
        for (c, b) in self.basis.iter().enumerate() {
            if let Some((factor, img)) = b.apply_sstar(j, q) {
                match target.index_of(&img) {
                    Some(r) => m[(r, c)] = factor,
                    None => interior[c] = false,
                }
            }
        }
        (m, interior)
    }

    /// The window as a depth-graded representation (depth = head length).
    pub fn rep_window(&self, q: &QMatrix<T>) -> Result<RepWindow<T>> {
        let d = q.d();
        let mut s = Vec::with_capacity(d);
        let mut sstar = Vec::with_capacity(d);
        for j in 1..=d as Letter {
            let mut col = Vec::with_capacity(self.len());
            for b in &self.basis {
                if b.head.len() < self.max_head {
                    let img = b.apply_s(j);
                    let r = self.index_of(&img).ok_or_else(|| {
                        Error::WindowTooSmall(format!("s_{j} e_{b} = e_{img} lies outside {}", self.description()))
                    })?;
                    col.push(Some(r));
                } else {
                    col.push(None);
                }
            }
            s.push(col);
            sstar.push(
                self.basis
                    .iter()
                    .map(|b| match b.apply_sstar(j, q) {
                        None => Image::Zero,
                        Some((factor, img)) => match self.index_of(&img) {
                            Some(index) => Image::Inside { index, factor },
                            None => Image::Outside,
                        },
                    })
                    .collect(),
            );
        }
        Ok(RepWindow {
            description: self.description(),
            d,
            labels: self.basis.iter().map(|b| b.to_string()).collect(),
            depth: self.basis.iter().map(|b| b.head.len()).collect(),
            max_depth: self.max_head,
            gram: self.gram.clone(),
            s,
            sstar,
        })
    }
}

/// Gram matrix over a family of extended words, computed through the
/// alignment of [`aligned_inner`] and through [`q_infinite`] on the denoted
/// sequences. Returns the matrix, the largest discrepancy between the two
/// routes, and the number of phase-orthogonal pairs.
pub fn gram_tail<T: Real>(basis: &[ExtendedWord], q: &QMatrix<T>) -> (GramMatrix<T>, T, usize) {
    let n = basis.len();
    let tails: Vec<TailSpec> = basis.iter().map(|b| b.to_tail()).collect();
    let mut m = CMatrix::zeros(n, n);
    let mut other = CMatrix::zeros(n, n);
    let mut phase = 0;
    for a in 0..n {
        for b in 0..n {
            m[(a, b)] = aligned_inner(&basis[a], &basis[b], q);
            other[(a, b)] = q_infinite(&tails[b], &tails[a], q);
            if a < b && align_shift(&tails[a], &tails[b]).is_none() {
                phase += 1;
            }
        }
    }
    let discrepancy = max_abs(&(&m - &other));
    (GramMatrix::new(m), discrepancy, phase)
}

/// Inner products `<e_β, e_γ>` for `β` in `left`, `γ` in `right`, computed
/// entry by entry from the denoted sequences. Windows over inequivalent
/// references give the zero matrix.
pub fn cross_gram<T: Real>(left: &TailWindow<T>, right: &TailWindow<T>, q: &QMatrix<T>) -> CMatrix<T> {
    let lt: Vec<TailSpec> = left.basis.iter().map(|b| b.to_tail()).collect();
    let rt: Vec<TailSpec> = right.basis.iter().map(|b| b.to_tail()).collect();
    CMatrix::from_fn(lt.len(), rt.len(), |a, b| q_infinite(&rt[b], &lt[a], q))
}

/// True iff the windows' labels can have nonzero inner products at all.
pub fn same_class<T: Real>(left: &TailWindow<T>, right: &TailWindow<T>) -> bool {
    tails_equivalent(&left.reference, &right.reference)
}
