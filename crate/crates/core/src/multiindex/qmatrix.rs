use nalgebra::Complex;

use super::word::Letter;
use crate::error::{Error, Result};
use crate::scalar::{zero, Cx, Real};

/// Deformation coefficients `q_ij`, `i != j`.
///
/// Invariants: `q_ij = conj(q_ji)` and `|q_ij| < 1`. The diagonal is never
/// defined; reading it through [`QMatrix::get`] panics.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix<T: Real> {
    d: usize,
    entries: Vec<Cx<T>>,
}

impl<T: Real> QMatrix<T> {
    /// Validates a full `d x d` row-major table; diagonal slots are ignored.
    pub fn new(d: usize, entries: Vec<Cx<T>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("need d >= 2, got {d}")));
        }
        if entries.len() != d * d {
            return Err(Error::Domain(format!(
                "expected {} entries for d = {d}, got {}",
                d * d,
                entries.len()
            )));
        }
        let mut entries = entries;
        for i in 0..d {
            entries[i * d + i] = zero();
        }
        let q = QMatrix { d, entries };
        q.validate()?;
        Ok(q)
    }

    /// Builds from the strictly upper triangle; the lower one is mirrored.
    ///
    /// `upper(i, j)` is called for `1 <= i < j <= d`.
    pub fn from_upper(d: usize, mut upper: impl FnMut(usize, usize) -> Cx<T>) -> Result<Self> {
        let mut entries = vec![zero(); d * d];
        for i in 1..=d {
            for j in (i + 1)..=d {
                let q = upper(i, j);
                entries[(i - 1) * d + (j - 1)] = q;
                entries[(j - 1) * d + (i - 1)] = q.conj();
            }
        }
        Self::new(d, entries)
    }

    /// Every `q_ij` with `i < j` equal to `q` (and `q_ji = conj(q)`).
    pub fn uniform(d: usize, q: Cx<T>) -> Result<Self> {
        Self::from_upper(d, |_, _| q)
    }

    pub fn real(d: usize, q: f64) -> Result<Self> {
        Self::uniform(d, Complex::new(T::lit(q), T::zero()))
    }

    /// The Cuntz-Toeplitz case `q = 0`.
    pub fn zero(d: usize) -> Self {
        Self::uniform(d, zero()).expect("zero deformation is valid")
    }

    fn validate(&self) -> Result<()> {
        let d = self.d;
        let tol = T::default_epsilon() * T::lit(16.0);
        for i in 1..=d {
            for j in 1..=d {
                if i == j {
                    continue;
                }
                let a = self.entries[(i - 1) * d + (j - 1)];
                let b = self.entries[(j - 1) * d + (i - 1)];
                let modulus = a.norm_sqr().sqrt();
                if modulus.partial_cmp(&T::one()) != Some(std::cmp::Ordering::Less) {
                    return Err(Error::InvalidQ {
                        i,
                        j,
                        reason: format!("|q_{i}{j}| = {} is not < 1", modulus.as_f64()),
                    });
                }
                if (a - b.conj()).norm_sqr().sqrt() > tol {
                    return Err(Error::InvalidQ {
                        i,
                        j,
                        reason: format!("q_{i}{j} != conj(q_{j}{i})"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `q_ij`. Panics for `i == j` or letters out of range.
    pub fn get(&self, i: Letter, j: Letter) -> Cx<T> {
        match self.try_get(i, j) {
            Ok(q) => q,
            Err(e) => panic!("QMatrix contract violation: {e}"),
        }
    }

    pub fn try_get(&self, i: Letter, j: Letter) -> Result<Cx<T>> {
        let (i, j) = (i as usize, j as usize);
        if i == 0 || j == 0 || i > self.d || j > self.d {
            return Err(Error::LetterOutOfRange {
                letter: i.max(j),
                d: self.d,
            });
        }
        if i == j {
            return Err(Error::Domain(format!("diagonal entry q_{i}{i} is undefined")));
        }
        Ok(self.entries[(i - 1) * self.d + (j - 1)])
    }

    /// Largest off-diagonal modulus.
    pub fn max_modulus(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.d {
            for j in 0..self.d {
                if i != j {
                    let v = self.entries[i * self.d + j].norm_sqr().sqrt();
                    if v > m {
                        m = v;
                    }
                }
            }
        }
        m
    }

    /// Row-major table with zeros on the diagonal.
    pub fn entries(&self) -> &[Cx<T>] {
        &self.entries
    }
}
