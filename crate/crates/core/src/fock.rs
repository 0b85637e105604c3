//! The truncated Fock space `F = ⊕ F_n`.
//!
//! `F_n` has basis `e_α`, `α ∈ {1..d}^n`, in lexicographic order, with
//! `<e_a, e_b> = q(b, a)` when `b` is a permutation of `a` and `0` otherwise.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metric::GramMatrix;
use crate::multiindex::{q_finite, remove_first, Letter, QMatrix, TailSpec, Word};
use crate::scalar::{one, CMatrix, Real};
use crate::window::{Image, RepWindow};

/// Basis and multiset blocks of `F_n`.
#[derive(Clone, Debug)]
pub struct FockLevel {
    pub n: usize,
    pub d: usize,
    pub basis: Vec<Word>,
    /// Basis indices grouped by letter multiset, keyed by the sorted word.
    pub blocks: Vec<(Word, Vec<usize>)>,
}

impl FockLevel {
    pub fn new(n: usize, d: usize) -> Self {
        let basis: Vec<Word> = Word::all_of_length(n, d).collect();
        let mut groups: BTreeMap<Word, Vec<usize>> = BTreeMap::new();
        for (i, w) in basis.iter().enumerate() {
            groups.entry(w.sorted()).or_default().push(i);
        }
        FockLevel {
            n,
            d,
            basis,
            blocks: groups.into_iter().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Gram matrix of `F_n`, filled block by block; entries between different
/// multiset blocks are never written.
pub fn gram<T: Real>(n: usize, q: &QMatrix<T>) -> GramMatrix<T> {
    gram_of_level(&FockLevel::new(n, q.d()), q)
}

pub fn gram_of_level<T: Real>(level: &FockLevel, q: &QMatrix<T>) -> GramMatrix<T> {
    let mut m = CMatrix::zeros(level.dim(), level.dim());
    for (_, block) in &level.blocks {
        for &a in block {
            for &b in block {
                m[(a, b)] = q_finite(&level.basis[b], &level.basis[a], q);
            }
        }
    }
    GramMatrix::new(m)
}

fn check_letter(j: Letter, d: usize) -> Result<()> {
    if j == 0 || j as usize > d {
        return Err(Error::LetterOutOfRange { letter: j as usize, d });
    }
    Ok(())
}

/// `π_F(s_j): F_n -> F_{n+1}`, `e_α ↦ e_{(j, α)}`.
pub fn matrix_s<T: Real>(j: Letter, n: usize, q: &QMatrix<T>) -> Result<CMatrix<T>> {
    let d = q.d();
    check_letter(j, d)?;
    let dim = d.pow(n as u32);
    let shift = (j as usize - 1) * dim;
    let mut m = CMatrix::zeros(dim * d, dim);
    for c in 0..dim {
        m[(shift + c, c)] = one();
    }
    Ok(m)
}

/// `π_F(s_j^*): F_n -> F_{n-1}`, `e_α ↦ q(j, α) e_{α∖j}` (zero if `j ∉ α`).
pub fn matrix_sstar<T: Real>(j: Letter, n: usize, q: &QMatrix<T>) -> Result<CMatrix<T>> {
    let d = q.d();
    check_letter(j, d)?;
    if n == 0 {
        return Err(Error::Domain("s_j^* is not defined from F_0 to a lower level".into()));
    }
    let mut m = CMatrix::zeros(d.pow(n as u32 - 1), d.pow(n as u32));
    for (c, w) in Word::all_of_length(n, d).enumerate() {
        if let Some((rest, f)) = remove_first(&w, j, q) {
            m[(rest.lex_index(d), c)] = f;
        }
    }
    Ok(m)
}

/// `J_k: F_k -> F_{k+1}`, appending the `(k+1)`-th letter of the tail.
pub fn embed_j<T: Real>(k: usize, tail: &TailSpec, d: usize) -> Result<CMatrix<T>> {
    tail.check(d)?;
    let a = tail.letter_at(k) as usize;
    let dim = d.pow(k as u32);
    let mut m = CMatrix::zeros(dim * d, dim);
    for c in 0..dim {
        m[(c * d + (a - 1), c)] = one();
    }
    Ok(m)
}

/// Fock window `F_0 ⊕ ... ⊕ F_depth`, basis ordered by (length, lex).
pub fn fock_window<T: Real>(depth: usize, q: &QMatrix<T>) -> RepWindow<T> {
    let d = q.d();
    let mut words = Vec::new();
    let mut offsets = Vec::new();
    for n in 0..=depth {
        offsets.push(words.len());
        words.extend(Word::all_of_length(n, d));
    }
    let index = |w: &Word| offsets[w.len()] + w.lex_index(d);
    let total = words.len();
    let mut g = CMatrix::zeros(total, total);
    for (n, &off) in offsets.iter().enumerate() {
        let level = FockLevel::new(n, d);
        let gn = gram_of_level(&level, q);
        g.view_mut((off, off), (level.dim(), level.dim()))
            .copy_from(gn.entries());
    }
    let s = (1..=d as Letter)
        .map(|j| {
            words
                .iter()
                .map(|w| (w.len() < depth).then(|| index(&w.prepend(j))))
                .collect()
        })
        .collect();
    let sstar = (1..=d as Letter)
        .map(|j| {
            words
                .iter()
                .map(|w| match remove_first(w, j, q) {
                    Some((rest, factor)) => Image::Inside {
                        index: index(&rest),
                        factor,
                    },
                    None => Image::Zero,
                })
                .collect()
        })
        .collect();
    RepWindow {
        description: format!("fock(d={d}, N={depth})"),
        d,
        labels: words.iter().map(|w| w.to_string()).collect(),
        depth: words.iter().map(|w| w.len()).collect(),
        max_depth: depth,
        gram: GramMatrix::new(g),
        s,
        sstar,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::positivity_certificate;
    use crate::scalar::max_abs;
    use nalgebra::Complex;

    #[test]
    fn level_structure() {
        let l = FockLevel::new(3, 2);
        assert_eq!(l.dim(), 8);
        let sizes: Vec<usize> = l.blocks.iter().map(|(_, b)| b.len()).collect();
        assert_eq!(sizes, vec![1, 3, 3, 1]);
    }

    #[test]
    fn level_one_is_orthonormal() {
        let q = QMatrix::<f64>::uniform(3, Complex::new(0.3, 0.4)).unwrap();
        assert_eq!(gram(1, &q).entries(), &CMatrix::identity(3, 3));
    }

    #[test]
    fn two_letter_block() {
        let q = QMatrix::<f64>::uniform(2, Complex::new(0.3, 0.4)).unwrap();
        let g = gram(2, &q);
        // basis 11, 12, 21, 22
        assert_eq!(g.inner(1, 2), q.get(2, 1));
        assert_eq!(g.inner(2, 1), q.get(1, 2));
        let p = positivity_certificate(&g, 1e-12).unwrap();
        assert!((p.min_eigenvalue - 0.5).abs() < 1e-14);
    }

    #[test]
    fn three_letter_entry() {
        let q = QMatrix::<f64>::uniform(2, Complex::new(0.3, 0.4)).unwrap();
        let g = gram(3, &q);
        let a = Word::from([1, 1, 2]).lex_index(2);
        let b = Word::from([2, 1, 1]).lex_index(2);
        assert!((g.inner(a, b) - q.get(2, 1) * q.get(2, 1)).norm() < 1e-15);
    }

    #[test]
    fn sstar_examples() {
        let q = QMatrix::<f64>::uniform(2, Complex::new(0.3, 0.4)).unwrap();
        let m = matrix_sstar(1, 2, &q).unwrap();
        let col = |w: [Letter; 2]| m.column(Word::from(w).lex_index(2)).clone_owned();
        assert_eq!(col([1, 2])[1], Complex::new(1.0, 0.0));
        assert_eq!(col([2, 1])[1], q.get(1, 2));
        assert_eq!(col([2, 2]).norm(), 0.0);
        assert!(matrix_sstar(1, 0, &q).is_err());
        assert!(matrix_s(3, 1, &q).is_err());
    }

    #[test]
    fn s_composes_to_word_embedding() {
        let q = QMatrix::<f64>::real(2, 0.5).unwrap();
        let w = Word::from([2, 1, 1]);
        let mut v = CMatrix::identity(1, 1);
        for (n, &l) in w.letters().iter().rev().enumerate() {
            v = matrix_s(l, n, &q).unwrap() * v;
        }
        assert_eq!(v[(w.lex_index(2), 0)], Complex::new(1.0, 0.0));
        assert_eq!(v.iter().filter(|z| z.re != 0.0).count(), 1);
    }

    #[test]
    fn embedding_examples() {
        let q = QMatrix::<f64>::real(2, 0.5).unwrap();
        let tail = TailSpec::constant(2);
        let j0: CMatrix<f64> = embed_j(0, &tail, 2).unwrap();
        assert_eq!(j0[(1, 0)], Complex::new(1.0, 0.0));
        let j1: CMatrix<f64> = embed_j(1, &tail, 2).unwrap();
        // e_1 -> e_12 (index 1), e_2 -> e_22 (index 3)
        assert_eq!(j1[(1, 0)], Complex::new(1.0, 0.0));
        assert_eq!(j1[(3, 1)], Complex::new(1.0, 0.0));
        let g1 = gram(1, &q);
        let g2 = gram(2, &q);
        assert!(max_abs(&(j1.transpose() * g2.entries() * &j1 - g1.entries())) < 1e-15);
    }
}
