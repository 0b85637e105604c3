#![allow(dead_code)]

use nalgebra::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wickrep::multiindex::{QMatrix, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Modulus uniform in `[0, max]`, phase uniform, mirrored below the diagonal.
pub fn random_q(d: usize, max: f64, rng: &mut impl Rng) -> QMatrix<f64> {
    QMatrix::from_upper(d, |_, _| {
        let r = rng.random_range(0.0..=max);
        let t = rng.random_range(0.0..std::f64::consts::TAU);
        Complex::from_polar(r, t)
    })
    .unwrap()
}

pub fn random_word(d: usize, max_len: usize, rng: &mut impl Rng) -> Word {
    let n = rng.random_range(0..=max_len);
    Word::from((0..n).map(|_| rng.random_range(1..=d as u8)).collect::<Vec<_>>())
}

pub fn arb_q(d: usize, max: f64) -> impl Strategy<Value = QMatrix<f64>> {
    prop::collection::vec((0.0..=max, 0.0..std::f64::consts::TAU), d * (d - 1) / 2).prop_map(move |v| {
        let mut it = v.into_iter();
        QMatrix::from_upper(d, |_, _| {
            let (r, t) = it.next().unwrap();
            Complex::from_polar(r, t)
        })
        .unwrap()
    })
}

pub fn arb_word(d: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=d as u8, 0..=max_len).prop_map(Word::from)
}

pub fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol
}
