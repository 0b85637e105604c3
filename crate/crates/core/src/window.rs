//! Finite truncations of a representation, graded by depth.
//!
//! A window holds basis vectors `e_x` of depth at most `D` (word length for
//! Fock windows, head length for tail windows). `s_j` maps depth `ℓ` into
//! depth at most `ℓ + 1`, so it is represented exactly from level `ℓ` to
//! level `ℓ + 1`. `s_j^*` can leave the window; columns where it does are
//! excluded from every identity check (the interior).

use crate::error::{Error, Result};
use crate::metric::{gram_adjoint, GramMatrix};
use crate::multiindex::QMatrix;
use crate::scalar::{modulus, one, zero, CMatrix, Cx, Real};

/// Where `s_j^*` sends a basis vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Image<T: Real> {
    Zero,
    Inside { index: usize, factor: Cx<T> },
    Outside,
}

/// Worst entry of an operator identity, with its witness: the two letters
/// involved and the (row, column) basis indices of the window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<T: Real> {
    pub value: T,
    pub witness: Option<(usize, usize, usize, usize)>,
}

impl<T: Real> Residual<T> {
    pub fn zero() -> Self {
        Residual {
            value: T::zero(),
            witness: None,
        }
    }

    pub(crate) fn absorb(&mut self, v: T, witness: (usize, usize, usize, usize)) {
        if v > self.value || self.witness.is_none() {
            self.value = self.value.max(v);
            self.witness = Some(witness);
        }
    }
}

/// Residuals of the defining relations on the interior of a window.
#[derive(Clone, Copy, Debug)]
pub struct Relations<T: Real> {
    /// Gram adjoint of `s_j` against the stored `s_j^*`.
    pub adjointness: Residual<T>,
    /// `s_j^* s_j = I`.
    pub isometry: Residual<T>,
    /// `s_i^* s_j = q_ij s_j s_i^*`, `i != j`.
    pub commutation: Residual<T>,
}

#[derive(Clone, Debug)]
pub struct RepWindow<T: Real> {
    pub description: String,
    pub d: usize,
    pub labels: Vec<String>,
    pub depth: Vec<usize>,
    pub max_depth: usize,
    pub gram: GramMatrix<T>,
    /// `s[j-1][x]`: index of `s_j e_x` for `depth[x] < max_depth`.
    pub(crate) s: Vec<Vec<Option<usize>>>,
    pub(crate) sstar: Vec<Vec<Image<T>>>,
}

impl<T: Real> RepWindow<T> {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Indices of depth at most `l`, in basis order.
    pub fn level(&self, l: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.depth[i] <= l).collect()
    }

    pub fn gram_level(&self, l: usize) -> GramMatrix<T> {
        self.gram.restrict(&self.level(l))
    }

    fn check_letter(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.d {
            return Err(Error::LetterOutOfRange { letter: j, d: self.d });
        }
        Ok(())
    }

    pub fn s_image(&self, j: usize, x: usize) -> Option<usize> {
        self.s[j - 1][x]
    }

    pub fn sstar_image(&self, j: usize, x: usize) -> Image<T> {
        self.sstar[j - 1][x]
    }

    /// `s_j` from level `l` to level `l + 1`.
    pub fn s_matrix(&self, j: usize, l: usize) -> Result<CMatrix<T>> {
        self.check_letter(j)?;
        if l >= self.max_depth {
            return Err(Error::WindowTooSmall(format!(
                "s_{j} from level {l} needs depth {} but {} has depth {}",
                l + 1,
                self.description,
                self.max_depth
            )));
        }
        let (src, dst) = (self.level(l), self.level(l + 1));
        let mut m = CMatrix::zeros(dst.len(), src.len());
        for (c, &x) in src.iter().enumerate() {
            let y = self.s[j - 1][x].expect("image of a non-top vector is materialized");
            let r = dst.binary_search(&y).expect("image depth at most l + 1");
            m[(r, c)] = one();
        }
        Ok(m)
    }

    /// `s_j^*` from level `l + 1` to level `l`, with the interior mask: a
    /// column is interior iff its true image lies in level `l`.
    pub fn sstar_matrix(&self, j: usize, l: usize) -> Result<(CMatrix<T>, Vec<bool>)> {
        self.check_letter(j)?;
        if l >= self.max_depth {
            return Err(Error::WindowTooSmall(format!("level {} exceeds {}", l + 1, self.description)));
        }
        let (dst, src) = (self.level(l), self.level(l + 1));
        let mut m = CMatrix::zeros(dst.len(), src.len());
        let mut interior = vec![false; src.len()];
        for (c, &x) in src.iter().enumerate() {
            match self.sstar[j - 1][x] {
                Image::Zero => interior[c] = true,
                Image::Inside { index, factor } => {
                    if let Ok(r) = dst.binary_search(&index) {
                        m[(r, c)] = factor;
                        interior[c] = true;
                    }
                }
                Image::Outside => {}
            }
        }
        Ok((m, interior))
    }

    /// `s_j^*` on the whole window (square), with the interior mask.
    pub fn sstar_full(&self, j: usize) -> Result<(CMatrix<T>, Vec<bool>)> {
        self.check_letter(j)?;
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        let mut interior = vec![false; n];
        for x in 0..n {
            match self.sstar[j - 1][x] {
                Image::Zero => interior[x] = true,
                Image::Inside { index, factor } => {
                    m[(index, x)] = factor;
                    interior[x] = true;
                }
                Image::Outside => {}
            }
        }
        Ok((m, interior))
    }

    /// `s_j` on the whole window (square); top-depth columns are zero.
    pub fn s_full(&self, j: usize) -> Result<CMatrix<T>> {
        self.check_letter(j)?;
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        for x in 0..n {
            if let Some(y) = self.s[j - 1][x] {
                m[(y, x)] = one();
            }
        }
        Ok(m)
    }

    /// Coordinate vector of `e_x` over the given level.
    pub fn basis_vector(&self, x: usize, l: usize) -> Option<crate::scalar::CVector<T>> {
        let lv = self.level(l);
        let r = lv.binary_search(&x).ok()?;
        Some(crate::scalar::CVector::from_fn(lv.len(), |i, _| if i == r { one() } else { zero() }))
    }

    /// Checks the relations label by label (no inversion involved) and the
    /// adjointness level by level (through the Gram inverse).
    pub fn relations(&self, q: &QMatrix<T>) -> Result<Relations<T>> {
        if q.d() != self.d {
            return Err(Error::Domain(format!("q has d = {}, window has d = {}", q.d(), self.d)));
        }
        let mut iso = Residual::zero();
        let mut comm = Residual::zero();
        for x in (0..self.len()).filter(|&x| self.depth[x] < self.max_depth) {
            for j in 1..=self.d {
                let y = self.s[j - 1][x].expect("materialized below the top");
                // s_j^* s_j e_x = e_x
                match self.sstar[j - 1][y] {
                    Image::Inside { index, factor } if index == x => {
                        iso.absorb(modulus(factor - one::<T>()), (j, j, x, x))
                    }
                    Image::Inside { index, factor } => iso.absorb(modulus(factor).max(T::one()), (j, j, index, x)),
                    _ => iso.absorb(T::one(), (j, j, x, x)),
                }
                for i in (1..=self.d).filter(|&i| i != j) {
                    let lhs = match self.sstar[i - 1][y] {
                        Image::Zero => None,
                        Image::Inside { index, factor } => Some((index, factor)),
                        Image::Outside => continue,
                    };
                    let rhs = match self.sstar[i - 1][x] {
                        Image::Zero => None,
                        Image::Inside { index, factor } => match self.s[j - 1][index] {
                            Some(z) => Some((z, factor * q.get(i as u8, j as u8))),
                            None => continue,
                        },
                        Image::Outside => continue,
                    };
                    match (lhs, rhs) {
                        (None, None) => comm.absorb(T::zero(), (i, j, x, x)),
                        (Some((a, f)), Some((b, g))) if a == b => comm.absorb(modulus(f - g), (i, j, a, x)),
                        (Some((a, f)), Some((b, g))) => comm.absorb(modulus(f).max(modulus(g)), (i, j, a.min(b), x)),
                        (Some((a, f)), None) | (None, Some((a, f))) => comm.absorb(modulus(f), (i, j, a, x)),
                    }
                }
            }
        }
        let mut adj = Residual::zero();
        for l in 0..self.max_depth {
            let (src, dst) = (self.level(l), self.level(l + 1));
            let (gx, gy) = (self.gram.restrict(&src), self.gram.restrict(&dst));
            for j in 1..=self.d {
                let a = gram_adjoint(&self.s_matrix(j, l)?, &gx, &gy)?;
                let (b, interior) = self.sstar_matrix(j, l)?;
                for c in (0..dst.len()).filter(|&c| interior[c]) {
                    for r in 0..src.len() {
                        adj.absorb(modulus(a[(r, c)] - b[(r, c)]), (j, j, src[r], dst[c]));
                    }
                }
            }
        }
        Ok(Relations {
            adjointness: adj,
            isometry: iso,
            commutation: comm,
        })
    }
}
