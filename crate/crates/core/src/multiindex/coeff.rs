//! q-scalars attached to words: `q(j, a)`, `q(a, b)` and their infinite limits.

use super::qmatrix::QMatrix;
use super::tail::{align_shift, InfiniteWord};
use super::word::{is_permutation, Letter, Word};
use crate::scalar::{one, zero, Cx, Real};

/// `∏ q_{j, w_k}` over all letters of `w`; `w` must not contain `j`.
pub fn q_letter<T: Real>(j: Letter, w: &[Letter], q: &QMatrix<T>) -> Cx<T> {
    w.iter().fold(one(), |acc, &l| acc * q.get(j, l))
}

/// Deletes the first `j` of `w`, returning the residual and the product of
/// `q_{j, w_k}` over the letters before it; `None` when `j` does not occur.
pub fn remove_first<T: Real>(w: &Word, j: Letter, q: &QMatrix<T>) -> Option<(Word, Cx<T>)> {
    let p = w.position(j)?;
    Some((w.remove_at(p), q_letter(j, &w.letters()[..p], q)))
}

/// Moves `s_a^*` through `s_b`:
/// `s_a^* s_b = q(a, b) · s_{b∖a} · s_{a∖b}^*`.
///
/// Returns `(q(a, b), b∖a, a∖b)`.
pub fn wick_pair<T: Real>(a: &Word, b: &Word, q: &QMatrix<T>) -> (Cx<T>, Word, Word) {
    let mut coeff = one::<T>();
    let mut residual = b.clone();
    let mut unmatched = Word::empty();
    // s_a^* = s_{a_m}^* ... s_{a_1}^*, so a_1 meets s_b first.
    for &j in a.letters() {
        match remove_first(&residual, j, q) {
            Some((rest, f)) => {
                coeff *= f;
                residual = rest;
            }
            None => {
                coeff *= q_letter(j, residual.letters(), q);
                unmatched.push(j);
            }
        }
    }
    (coeff, residual, unmatched)
}

/// The scalar `q(a, b)` of `s_a^* s_b = q(a, b) s_{b∖a} s_{a∖b}^*`.
pub fn q_finite<T: Real>(a: &Word, b: &Word, q: &QMatrix<T>) -> Cx<T> {
    wick_pair(a, b, q).0
}

/// `q(a, b) = lim_m q(a_1..a_m, b_1..b_m)`; zero unless the sequences agree
/// after a common shift `m` and their length-`m` heads are permutations.
pub fn q_infinite<T: Real, A: InfiniteWord, B: InfiniteWord>(a: &A, b: &B, q: &QMatrix<T>) -> Cx<T> {
    let (a, b) = (a.to_tail(), b.to_tail());
    let Some(m) = align_shift(&a, &b) else {
        return zero();
    };
    q_infinite_at(&a, &b, m, q)
}

/// The length-`m` approximant of [`q_infinite`]; stable for every `m` at or
/// beyond the alignment shift.
pub fn q_infinite_at<T: Real, A: InfiniteWord, B: InfiniteWord>(
    a: &A,
    b: &B,
    m: usize,
    q: &QMatrix<T>,
) -> Cx<T> {
    let (ha, hb) = (a.to_tail().head(m), b.to_tail().head(m));
    if is_permutation(&ha, &hb) {
        q_finite(&ha, &hb, q)
    } else {
        zero()
    }
}
