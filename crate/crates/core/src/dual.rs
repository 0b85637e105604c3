//! Range projections, dual isometries `s̃_j` with `s̃_j^* s_k = δ_jk I`, the
//! operators `P_n(μ) = s_μ s̃_μ^*`, and the vacuum test.
//!
//! Everything is computed per level of a [`RepWindow`]: the dual of `s_j`
//! from level `ℓ` uses the projection `p̌_j` onto the span of the ranges of
//! `s_k`, `k != j`, inside level `ℓ + 1`:
//!
//! ```text
//! c_j = (I - p̌_j) s_j,   M_j = s_j^* (I - p̌_j) s_j,   s̃_j = c_j M_j^{-1}
//! ```

use std::cmp::Ordering::{Equal, Less};

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::metric::{
    gram_adjoint, metric_hermitian_spectrum, metric_svd, min_principal_angle, GramMatrix, ProjectionOperator,
    DEFAULT_RANK_TOL,
};
use crate::multiindex::Word;
use crate::scalar::{argmax_abs, max_abs, CMatrix, Real};
pub use crate::window::Residual;
use crate::window::RepWindow;

pub use crate::metric::{range_projection, ProjectionOperator as Projection};

/// Middle factors with condition number above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Singular values below this count toward the vacuum kernel.
pub const KERNEL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DualIsometry<T: Real> {
    pub letter: usize,
    /// Domain level `ℓ`; the codomain is level `ℓ + 1`.
    pub level: usize,
    pub t: CMatrix<T>,
    pub t_adjoint: CMatrix<T>,
    /// `p̌_j` on level `ℓ + 1`.
    pub complement: ProjectionOperator<T>,
    /// Spectrum of `M_j`, ascending.
    pub middle_spectrum: Vec<T>,
    pub condition: T,
}

impl<T: Real> DualIsometry<T> {
    pub fn min_modulus(&self) -> T {
        self.middle_spectrum.iter().fold(T::max_value().expect("bounded"), |a, &b| a.min(b.abs()))
    }
}

/// Builds `s̃_j` from level `level` into level `level + 1`.
pub fn dual_isometry<T: Real>(j: usize, w: &RepWindow<T>, level: usize) -> Result<DualIsometry<T>> {
    let gx = w.gram_level(level);
    let gy = w.gram_level(level + 1);
    let sj = w.s_matrix(j, level)?;
    let others: Vec<CMatrix<T>> = (1..=w.d)
        .filter(|&k| k != j)
        .map(|k| w.s_matrix(k, level))
        .collect::<Result<_>>()?;
    let cols: usize = others.iter().map(|m| m.ncols()).sum();
    let mut stacked = CMatrix::zeros(gy.dim(), cols);
    let mut at = 0;
    for m in &others {
        stacked.view_mut((0, at), (m.nrows(), m.ncols())).copy_from(m);
        at += m.ncols();
    }
    let complement = range_projection(&stacked, &gy, T::lit(DEFAULT_RANK_TOL))?;
    let eye = CMatrix::identity(gy.dim(), gy.dim());
    let c = (eye - &complement.matrix) * &sj;
    // K = M_X M_j is Hermitian
    let k = sj.adjoint() * gy.metric() * &c;
    let k = (&k + k.adjoint()).map(|z| z * nalgebra::Complex::new(T::lit(0.5), T::zero()));
    let middle_spectrum = metric_hermitian_spectrum(&k, &gx)?;
    let (lo, hi) = middle_spectrum
        .iter()
        .fold((T::max_value().expect("bounded"), T::zero()), |(lo, hi), &v| (lo.min(v.abs()), hi.max(v.abs())));
    let condition = if lo > T::zero() { hi / lo } else { T::max_value().expect("bounded") };
    // NaN is rejected too
    if !matches!(condition.partial_cmp(&T::lit(MAX_CONDITION)), Some(Less | Equal)) {
        return Err(Error::IllConditioned {
            letter: j,
            condition: condition.as_f64(),
            window: format!("{} level {level}", w.description),
        });
    }
    let kc = Cholesky::new(k).ok_or_else(|| Error::Singular(format!("middle factor for s_{j} at level {level}")))?;
    // M_j^{-1} = K^{-1} M_X
    let t = c * kc.solve(&gx.metric());
    let t_adjoint = gram_adjoint(&t, &gx, &gy)?;
    Ok(DualIsometry {
        letter: j,
        level,
        t,
        t_adjoint,
        complement,
        middle_spectrum,
        condition,
    })
}

/// Dual isometries for every letter and every level `0..max_depth`.
#[derive(Clone, Debug)]
pub struct DualSystem<T: Real> {
    /// `levels[ℓ][j - 1]`.
    pub levels: Vec<Vec<DualIsometry<T>>>,
}

impl<T: Real> DualSystem<T> {
    pub fn new(w: &RepWindow<T>) -> Result<Self> {
        let levels = (0..w.max_depth)
            .map(|l| (1..=w.d).map(|j| dual_isometry(j, w, l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(DualSystem { levels })
    }

    pub fn get(&self, j: usize, level: usize) -> &DualIsometry<T> {
        &self.levels[level][j - 1]
    }
}

/// Worst entry of `s̃_j^* s_k - δ_jk I` over all `j, k` at `level`; the
/// witness carries the letters and the (row, column) basis indices.
pub fn biorthogonality_residual<T: Real>(w: &RepWindow<T>, ds: &DualSystem<T>, level: usize) -> Result<Residual<T>> {
    let (src, dst) = (w.level(level), w.level(level));
    let mut worst = Residual::zero();
    for j in 1..=w.d {
        for k in 1..=w.d {
            let sk = w.s_matrix(k, level)?;
            let mut prod = &ds.get(j, level).t_adjoint * sk;
            if j == k {
                prod -= CMatrix::identity(prod.nrows(), prod.ncols());
            }
            if let Some((r, c, v)) = argmax_abs(&prod) {
                worst.absorb(v, (j, k, dst[r], src[c]));
            }
        }
    }
    Ok(worst)
}

/// Checks on `p̌_j`: range containment `p̌_j s_k = s_k` (`k != j`) and the
/// smallest principal angle between the ranges of `s_j` and of `p̌_j`.
#[derive(Clone, Copy, Debug)]
pub struct ComplementCheck<T: Real> {
    pub containment: T,
    pub rank: usize,
    pub expected_rank: usize,
    pub idempotence: T,
    pub self_adjointness: T,
    pub min_angle: T,
}

pub fn complement_check<T: Real>(w: &RepWindow<T>, dual: &DualIsometry<T>) -> Result<ComplementCheck<T>> {
    let l = dual.level;
    let gy = w.gram_level(l + 1);
    let mut containment = T::zero();
    let mut expected_rank = 0;
    let mut others = Vec::new();
    for k in (1..=w.d).filter(|&k| k != dual.letter) {
        let sk = w.s_matrix(k, l)?;
        containment = containment.max(max_abs(&(&dual.complement.matrix * &sk - &sk)));
        expected_rank += sk.ncols();
        others.push(sk);
    }
    let stacked = CMatrix::from_columns(&others.iter().flat_map(|m| m.column_iter().map(|c| c.clone_owned())).collect::<Vec<_>>());
    let sj = w.s_matrix(dual.letter, l)?;
    Ok(ComplementCheck {
        containment,
        rank: dual.complement.rank,
        expected_rank,
        idempotence: dual.complement.idempotence_residual(),
        self_adjointness: dual.complement.self_adjoint_residual()?,
        min_angle: min_principal_angle(&sj, &stacked, &gy)?,
    })
}

/// `P_n(μ) = s_{μ_1} ... s_{μ_n} s̃_{μ_n}^* ... s̃_{μ_1}^*` on the top level.
pub fn pn_projection<T: Real>(mu: &Word, w: &RepWindow<T>, ds: &DualSystem<T>) -> Result<ProjectionOperator<T>> {
    let n = mu.len();
    let top = w.max_depth;
    if n > top {
        return Err(Error::WindowTooSmall(format!(
            "P_n with n = {n} needs depth {n}, {} has depth {top}",
            w.description
        )));
    }
    mu.check(w.d)?;
    let dim = w.level(top).len();
    let mut x = CMatrix::identity(dim, dim);
    for (i, &l) in mu.letters().iter().enumerate() {
        x = &ds.get(l as usize, top - 1 - i).t_adjoint * x;
    }
    for (i, &l) in mu.letters().iter().enumerate().rev() {
        x = w.s_matrix(l as usize, top - 1 - i)? * x;
    }
    Ok(ProjectionOperator {
        matrix: x,
        gram: w.gram_level(top),
        rank: n,
    })
}

/// Rows: basis vectors `e_β`; columns: `‖P_n(μ) e_β‖` for `n = 1..=n_max`,
/// with `μ_1..μ_n` read from `mu`.
pub fn decay_table<T: Real>(
    mu: impl Fn(usize) -> u8,
    betas: &[usize],
    n_max: usize,
    w: &RepWindow<T>,
    ds: &DualSystem<T>,
) -> Result<Vec<Vec<T>>> {
    let top = w.max_depth;
    let g = w.gram_level(top);
    let mut rows = vec![Vec::with_capacity(n_max); betas.len()];
    for n in 1..=n_max {
        let prefix = Word::from_letters((0..n).map(&mu).collect::<Vec<_>>());
        let p = pn_projection(&prefix, w, ds)?;
        for (r, &b) in betas.iter().enumerate() {
            let e = w
                .basis_vector(b, top)
                .ok_or_else(|| Error::Domain(format!("basis index {b} outside the window")))?;
            rows[r].push(g.norm(&(&p.matrix * e)));
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct VacuumReport<T: Real> {
    pub kernel_dim: usize,
    pub min_singular: T,
    /// Basis indices on which every `s_j^*` stays inside the window.
    pub interior: Vec<usize>,
    /// Kernel basis in coordinates over `interior`.
    pub kernel: CMatrix<T>,
}

/// Singular values (Gram metric) of `x ↦ (s_1^* x, ..., s_d^* x)` on the
/// interior; the kernel is the space of vacuum vectors.
pub fn vacuum_test<T: Real>(w: &RepWindow<T>) -> Result<VacuumReport<T>> {
    let n = w.len();
    let mut full = Vec::with_capacity(w.d);
    let mut ok = vec![true; n];
    for j in 1..=w.d {
        let (m, interior) = w.sstar_full(j)?;
        for (o, i) in ok.iter_mut().zip(interior) {
            *o &= i;
        }
        full.push(m);
    }
    let interior: Vec<usize> = (0..n).filter(|&i| ok[i]).collect();
    if interior.is_empty() {
        return Err(Error::Domain(format!("empty interior in {}", w.description)));
    }
    let mut stacked = CMatrix::zeros(n * w.d, interior.len());
    let mut out = CMatrix::zeros(n * w.d, n * w.d);
    let metric_entries = w.gram.entries();
    for (b, m) in full.iter().enumerate() {
        stacked
            .view_mut((b * n, 0), (n, interior.len()))
            .copy_from(&m.select_columns(&interior));
        out.view_mut((b * n, b * n), (n, n)).copy_from(metric_entries);
    }
    let gx = w.gram.restrict(&interior);
    let gy = GramMatrix::new(out);
    let (sv, vecs) = metric_svd(&stacked, &gx, &gy)?;
    let kernel_cols: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] < T::lit(KERNEL_TOL)).collect();
    Ok(VacuumReport {
        kernel_dim: kernel_cols.len(),
        min_singular: sv.last().copied().unwrap_or_else(T::zero),
        interior,
        kernel: vecs.select_columns(&kernel_cols),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_window;
    use crate::multiindex::{QMatrix, TailSpec};
    use crate::tailrep::{ExtendedWord, TailWindow};
    use nalgebra::Complex;

    fn tail(r: &TailSpec, l: usize, q: &QMatrix<f64>) -> RepWindow<f64> {
        TailWindow::new(r, l, 4, q).unwrap().rep_window(q).unwrap()
    }

    #[test]
    fn cuntz_toeplitz_duals_are_the_isometries() {
        let q = QMatrix::<f64>::zero(2);
        for w in [fock_window(4, &q), tail(&TailSpec::constant(2), 4, &q)] {
            let ds = DualSystem::new(&w).unwrap();
            for l in 0..w.max_depth {
                for j in 1..=2 {
                    assert_eq!(ds.get(j, l).t, w.s_matrix(j, l).unwrap(), "{} level {l}", w.description);
                }
            }
        }
    }

    #[test]
    fn fock_biorthogonality() {
        let q = QMatrix::<f64>::real(2, 0.5).unwrap();
        let w = fock_window(4, &q);
        let ds = DualSystem::new(&w).unwrap();
        let t1 = &ds.get(1, 3).t_adjoint;
        assert!(max_abs(&(t1 * w.s_matrix(2, 3).unwrap())) < 1e-8);
        let id = t1 * w.s_matrix(1, 3).unwrap();
        assert!(max_abs(&(&id - CMatrix::identity(id.nrows(), id.ncols()))) < 1e-8);
        for l in 0..4 {
            assert!(biorthogonality_residual(&w, &ds, l).unwrap().value < 1e-12);
        }
    }

    #[test]
    fn middle_factor_is_bounded_below() {
        for qv in [0.3, 0.7, 0.9] {
            let q = QMatrix::<f64>::uniform(3, Complex::new(qv * 0.6, qv * 0.8)).unwrap();
            let w = fock_window(3, &q);
            let ds = DualSystem::new(&w).unwrap();
            for l in 0..3 {
                for j in 1..=3 {
                    let m = ds.get(j, l).min_modulus();
                    assert!(m > 1e-3, "q={qv} j={j} level {l}: {m}");
                }
            }
        }
    }

    #[test]
    fn complement_projection_properties() {
        let q = QMatrix::<f64>::uniform(3, Complex::new(0.4, 0.3)).unwrap();
        let w = tail(&TailSpec::constant(2), 3, &q);
        let ds = DualSystem::new(&w).unwrap();
        for j in 1..=3 {
            let c = complement_check(&w, ds.get(j, 2)).unwrap();
            assert!(c.containment < 1e-10);
            assert_eq!(c.rank, c.expected_rank);
            assert!(c.idempotence < 1e-10 && c.self_adjointness < 1e-10);
            assert!(c.min_angle > 1e-3);
        }
    }

    #[test]
    fn pn_fixes_the_reference_vector() {
        let q = QMatrix::<f64>::uniform(2, Complex::new(0.3, 0.4)).unwrap();
        for r in [TailSpec::constant(2), TailSpec::periodic([1, 2]).unwrap()] {
            let w = tail(&r, 4, &q);
            let ds = DualSystem::new(&w).unwrap();
            let top = w.level(4);
            let e = w.basis_vector(0, 4).unwrap();
            assert_eq!(w.labels[top[0]], ExtendedWord::pure(&r).to_string());
            for n in 1..=4 {
                let p = pn_projection(&r.head(n), &w, &ds).unwrap();
                assert!((&p.matrix * &e - &e).norm() < 1e-12);
                assert!(p.idempotence_residual() < 1e-10);
            }
        }
    }

    #[test]
    fn pn_same_class_decay() {
        let q = QMatrix::<f64>::real(2, 0.5).unwrap();
        let r = TailSpec::constant(2);
        let w = tail(&r, 4, &q);
        let ds = DualSystem::new(&w).unwrap();
        let beta = w.position("1@0").unwrap();
        let rows = decay_table(|i| r.letter_at(i), &[beta], 4, &w, &ds).unwrap();
        assert!(rows[0].windows(2).all(|p| p[1] <= p[0] + 1e-12));
        assert!(rows[0].iter().all(|&v| v < 1e-12), "{:?}", rows[0]);
    }

    #[test]
    fn pn_needs_depth() {
        let q = QMatrix::<f64>::real(2, 0.5).unwrap();
        let w = fock_window(2, &q);
        let ds = DualSystem::new(&w).unwrap();
        assert!(matches!(
            pn_projection(&Word::from([1, 1, 1]), &w, &ds),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn fock_vacuum_is_the_empty_word() {
        let q = QMatrix::<f64>::uniform(2, Complex::new(0.3, 0.4)).unwrap();
        let w = fock_window(4, &q);
        let v = vacuum_test(&w).unwrap();
        assert_eq!(v.kernel_dim, 1);
        assert_eq!(v.interior.len(), w.len());
        let k = v.kernel.column(0);
        let vac = w.position("e").unwrap();
        let off: f64 = (0..k.len()).filter(|&i| i != vac).map(|i| k[i].norm()).sum();
        assert!(off < 1e-10 && k[vac].norm() > 0.5);
    }

    #[test]
    fn cuntz_toeplitz_tail_has_no_vacuum() {
        let q = QMatrix::<f64>::zero(2);
        let v = vacuum_test(&tail(&TailSpec::constant(2), 4, &q)).unwrap();
        assert_eq!(v.kernel_dim, 0);
        assert!((v.min_singular - 1.0).abs() < 1e-12);
    }
}
