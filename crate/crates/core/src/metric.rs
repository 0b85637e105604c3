//! Linear algebra in a non-orthonormal basis.
//!
//! A [`GramMatrix`] stores `entries[a][b] = <e_a, e_b>`, linear in the first
//! argument. For coordinate vectors this gives `<x, y> = y^H M x` with the
//! metric `M = entries^T`; every adjoint and norm below is taken in `M`.

use nalgebra::{Cholesky, Dyn, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::scalar::{argmax_abs, max_abs, CMatrix, CVector, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix<T: Real> {
    entries: CMatrix<T>,
}

impl<T: Real> GramMatrix<T> {
    pub fn new(entries: CMatrix<T>) -> Self {
        assert!(entries.is_square(), "Gram matrix must be square");
        GramMatrix { entries }
    }

    pub fn identity(n: usize) -> Self {
        GramMatrix::new(CMatrix::identity(n, n))
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `<e_a, e_b>`.
    pub fn inner(&self, a: usize, b: usize) -> crate::scalar::Cx<T> {
        self.entries[(a, b)]
    }

    /// The matrix `M` with `<x, y> = y^H M x`.
    pub fn metric(&self) -> CMatrix<T> {
        self.entries.transpose()
    }

    /// Principal restriction to the given basis indices.
    pub fn restrict(&self, idx: &[usize]) -> GramMatrix<T> {
        GramMatrix::new(self.entries.select_rows(idx).select_columns(idx))
    }

    pub fn hermitian_deviation(&self) -> Option<(usize, usize, T)> {
        argmax_abs(&(&self.entries - self.entries.adjoint()))
    }

    /// Fails unless `entries == entries^H` to `tol` (relative to the largest entry).
    pub fn check_hermitian(&self, tol: T) -> Result<()> {
        let scale = max_abs(&self.entries).max(T::one());
        if let Some((row, col, dev)) = self.hermitian_deviation() {
            if dev > tol * scale {
                return Err(Error::NonHermitian {
                    row,
                    col,
                    deviation: dev.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Connected components of the exact nonzero pattern, each sorted, ordered
    /// by smallest member.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in 0..n {
            for b in (a + 1)..n {
                let z = self.entries[(a, b)];
                let w = self.entries[(b, a)];
                let nonzero = |z: crate::scalar::Cx<T>| z.re != T::zero() || z.im != T::zero();
                if nonzero(z) || nonzero(w) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for a in 0..n {
            let r = find(&mut parent, a);
            comps.entry(r).or_default().push(a);
        }
        comps.into_values().collect()
    }

    pub fn cholesky(&self) -> Result<Cholesky<crate::scalar::Cx<T>, Dyn>> {
        Cholesky::new(self.metric()).ok_or_else(|| Error::Singular(format!("Gram matrix of dimension {} is not positive definite", self.dim())))
    }

    /// `sqrt(x^H M x)`.
    pub fn norm(&self, x: &CVector<T>) -> T {
        let m = self.metric();
        (x.adjoint() * m * x)[(0, 0)].re.max(T::zero()).sqrt()
    }
}

/// Smallest eigenvalue over the Gram blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct Positivity<T: Real> {
    pub min_eigenvalue: T,
    pub ok: bool,
    pub blocks: usize,
    /// Indices of the block attaining the minimum.
    pub worst_block: Vec<usize>,
}

pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-12;

/// Per-block Hermitian eigensolve; `ok` iff the minimum exceeds `tol`.
pub fn positivity_certificate<T: Real>(g: &GramMatrix<T>, tol: T) -> Result<Positivity<T>> {
    g.check_hermitian(T::lit(1e-12))?;
    let blocks = g.blocks();
    let mut min = T::max_value().expect("bounded real type");
    let mut worst_block = Vec::new();
    for b in &blocks {
        let sub = g.entries.select_rows(b).select_columns(b);
        let eig = SymmetricEigen::new(sub);
        let m = eig.eigenvalues.min();
        if m < min {
            min = m;
            worst_block = b.clone();
        }
    }
    if blocks.is_empty() {
        min = T::zero();
    }
    Ok(Positivity {
        min_eigenvalue: min,
        ok: min > tol,
        blocks: blocks.len(),
        worst_block,
    })
}

/// The adjoint of `a: X -> Y` in the Gram metrics: `M_X^{-1} a^H M_Y`.
pub fn gram_adjoint<T: Real>(a: &CMatrix<T>, gx: &GramMatrix<T>, gy: &GramMatrix<T>) -> Result<CMatrix<T>> {
    if a.ncols() != gx.dim() || a.nrows() != gy.dim() {
        return Err(Error::Domain(format!(
            "operator is {}x{}, Grams are {} and {}",
            a.nrows(),
            a.ncols(),
            gx.dim(),
            gy.dim()
        )));
    }
    let chol = gx.cholesky()?;
    Ok(chol.solve(&(a.adjoint() * gy.metric())))
}

/// Singular values of `a: X -> Y` measured in the Gram metrics, descending,
/// together with the right singular vectors mapped back to `X` coordinates.
pub fn metric_svd<T: Real>(a: &CMatrix<T>, gx: &GramMatrix<T>, gy: &GramMatrix<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    let lx = gx.cholesky()?.l();
    let ly = gy.cholesky()?.l();
    // whitened operator L_Y^H a L_X^{-H}
    let lx_inv_h = lx
        .adjoint()
        .solve_upper_triangular(&CMatrix::identity(gx.dim(), gx.dim()))
        .ok_or_else(|| Error::Singular("triangular factor".into()))?;
    let w = ly.adjoint() * a * &lx_inv_h;
    let n = gx.dim();
    // pad rows so the SVD returns a full set of right singular vectors
    let rows = w.nrows().max(n);
    let mut padded = CMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (w.nrows(), n)).copy_from(&w);
    let svd = SVD::new(padded, false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).expect("finite"));
    let sv: Vec<T> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut vecs = CMatrix::zeros(n, order.len());
    for (c, &i) in order.iter().enumerate() {
        let z = vt.row(i).adjoint();
        vecs.set_column(c, &(&lx_inv_h * z));
    }
    Ok((sv, vecs))
}

/// A projection over a Gram-metric space.
#[derive(Clone, Debug)]
pub struct ProjectionOperator<T: Real> {
    pub matrix: CMatrix<T>,
    pub gram: GramMatrix<T>,
    pub rank: usize,
}

impl<T: Real> ProjectionOperator<T> {
    pub fn idempotence_residual(&self) -> T {
        max_abs(&(&self.matrix * &self.matrix - &self.matrix))
    }

    pub fn self_adjoint_residual(&self) -> Result<T> {
        let adj = gram_adjoint(&self.matrix, &self.gram, &self.gram)?;
        Ok(max_abs(&(adj - &self.matrix)))
    }
}

pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Gram-orthogonal projection onto the span of the columns of `vectors`.
///
/// The rank is decided on the whitened columns with relative threshold
/// `rank_tol`. Full-rank spans use `V (V^H M V)^{-1} V^H M` directly, which
/// is exact when the columns are already orthonormal.
pub fn range_projection<T: Real>(vectors: &CMatrix<T>, g: &GramMatrix<T>, rank_tol: T) -> Result<ProjectionOperator<T>> {
    let n = g.dim();
    if vectors.nrows() != n {
        return Err(Error::Domain(format!("vectors have {} rows, Gram has dimension {n}", vectors.nrows())));
    }
    let chol = g.cholesky()?;
    let zero_op = || ProjectionOperator {
        matrix: CMatrix::zeros(n, n),
        gram: g.clone(),
        rank: 0,
    };
    if vectors.ncols() == 0 {
        return Ok(zero_op());
    }
    let l = chol.l();
    let w = l.adjoint() * vectors;
    let svd = SVD::new(w.clone(), true, false);
    let smax = svd.singular_values.max();
    if smax == T::zero() {
        return Ok(zero_op());
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rank_tol * smax)
        .collect();
    let rank = keep.len();
    let m = g.metric();
    if rank == vectors.ncols() {
        let vhm = vectors.adjoint() * &m;
        let k = &vhm * vectors;
        let kc = Cholesky::new(k).ok_or_else(|| Error::Singular("span Gram".into()))?;
        let matrix = vectors * kc.solve(&vhm);
        return Ok(ProjectionOperator {
            matrix,
            gram: g.clone(),
            rank,
        });
    }
    let u = svd.u.expect("requested");
    let ur = u.select_columns(&keep);
    let pw = &ur * ur.adjoint();
    // back from whitened coordinates: L^{-H} P_w L^H
    let lh = l.adjoint();
    let matrix = lh
        .solve_upper_triangular(&(pw * &lh))
        .ok_or_else(|| Error::Singular("triangular factor".into()))?;
    Ok(ProjectionOperator {
        matrix,
        gram: g.clone(),
        rank,
    })
}

/// Orthonormal basis (whitened coordinates) of the span of `vectors`.
pub(crate) fn whitened_basis<T: Real>(vectors: &CMatrix<T>, g: &GramMatrix<T>, rank_tol: T) -> Result<CMatrix<T>> {
    let l = g.cholesky()?.l();
    let w = l.adjoint() * vectors;
    if w.ncols() == 0 {
        return Ok(CMatrix::zeros(w.nrows(), 0));
    }
    let svd = SVD::new(w, true, false);
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| smax > T::zero() && svd.singular_values[i] > rank_tol * smax)
        .collect();
    Ok(svd.u.expect("requested").select_columns(&keep))
}

/// Smallest principal angle (radians) between two spans.
pub fn min_principal_angle<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, g: &GramMatrix<T>) -> Result<T> {
    let ua = whitened_basis(a, g, T::lit(DEFAULT_RANK_TOL))?;
    let ub = whitened_basis(b, g, T::lit(DEFAULT_RANK_TOL))?;
    if ua.ncols() == 0 || ub.ncols() == 0 {
        return Ok(T::frac_pi_2());
    }
    let c = ua.adjoint() * ub;
    let cos = SVD::new(c, false, false).singular_values.max().min(T::one());
    Ok(cos.acos())
}

/// Eigenvalues of an operator that is self-adjoint in the metric `g`,
/// given as `k = M · op` (Hermitian).
pub(crate) fn metric_hermitian_spectrum<T: Real>(k: &CMatrix<T>, g: &GramMatrix<T>) -> Result<Vec<T>> {
    let l = g.cholesky()?.l();
    let linv = l
        .solve_lower_triangular(&CMatrix::identity(g.dim(), g.dim()))
        .ok_or_else(|| Error::Singular("triangular factor".into()))?;
    let mut w = &linv * k * linv.adjoint();
    // symmetrize away rounding before the Hermitian eigensolve
    w = (&w + w.adjoint()).map(|z| z * nalgebra::Complex::new(T::lit(0.5), T::zero()));
    let mut ev: Vec<T> = SymmetricEigen::new(w).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Complex;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn two_by_two(q: Complex<f64>) -> GramMatrix<f64> {
        GramMatrix::new(CMatrix::from_row_slice(2, 2, &[c(1., 0.), q, q.conj(), c(1., 0.)]))
    }

    #[test]
    fn positivity_of_two_by_two() {
        let p = positivity_certificate(&two_by_two(c(0.3, 0.4)), 1e-12).unwrap();
        assert!((p.min_eigenvalue - 0.5).abs() < 1e-14);
        assert!(p.ok);
        let bad = GramMatrix::new(CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0.5, 0.), c(0.2, 0.), c(1., 0.)]));
        assert!(matches!(positivity_certificate(&bad, 1e-12), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn blocks_follow_structural_zeros() {
        let mut m = CMatrix::<f64>::identity(4, 4);
        m[(0, 2)] = c(0.1, 0.0);
        m[(2, 0)] = c(0.1, 0.0);
        assert_eq!(GramMatrix::new(m).blocks(), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn adjoint_identity_grams_is_conjugate_transpose() {
        let a = CMatrix::from_row_slice(3, 2, &[c(1., 2.), c(0., 1.), c(3., 0.), c(0., 0.), c(1., -1.), c(2., 2.)]);
        let adj = gram_adjoint(&a, &GramMatrix::identity(2), &GramMatrix::identity(3)).unwrap();
        assert_eq!(adj, a.adjoint());
    }

    #[test]
    fn adjoint_is_involutive_and_adjoint() {
        let gx = two_by_two(c(0.3, 0.4));
        let gy = GramMatrix::new(CMatrix::from_row_slice(
            3,
            3,
            &[c(1., 0.), c(0.2, 0.1), c(0., 0.), c(0.2, -0.1), c(1., 0.), c(0.1, 0.3), c(0., 0.), c(0.1, -0.3), c(1., 0.)],
        ));
        let a = CMatrix::from_row_slice(3, 2, &[c(1., 2.), c(0., 1.), c(3., 0.), c(0., 0.), c(1., -1.), c(2., 2.)]);
        let adj = gram_adjoint(&a, &gx, &gy).unwrap();
        let back = gram_adjoint(&adj, &gy, &gx).unwrap();
        assert!(max_abs(&(back - &a)) < 1e-12);
        // <a x, y>_Y = <x, a* y>_X for basis vectors
        for i in 0..2 {
            for k in 0..3 {
                let x = CVector::from_fn(2, |r, _| if r == i { c(1., 0.) } else { c(0., 0.) });
                let y = CVector::from_fn(3, |r, _| if r == k { c(1., 0.) } else { c(0., 0.) });
                let lhs = (y.adjoint() * gy.metric() * (&a * &x))[(0, 0)];
                let rhs = ((&adj * &y).adjoint() * gx.metric() * &x)[(0, 0)];
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_cases() {
        let g = two_by_two(c(0.3, 0.4));
        let p = range_projection(&CMatrix::zeros(2, 0), &g, 1e-10).unwrap();
        assert_eq!(p.rank, 0);
        assert_eq!(p.matrix, CMatrix::zeros(2, 2));
        let full = range_projection(&CMatrix::identity(2, 2), &g, 1e-10).unwrap();
        assert!(max_abs(&(full.matrix - CMatrix::identity(2, 2))) < 1e-14);

        let v = CMatrix::from_column_slice(2, 1, &[c(1., 0.), c(0., 0.)]);
        let p = range_projection(&v, &g, 1e-10).unwrap();
        assert!(max_abs(&(&p.matrix * &v - &v)) < 1e-14);
        assert!(p.idempotence_residual() < 1e-14);
        assert!(p.self_adjoint_residual().unwrap() < 1e-14);
        // w Gram-orthogonal to e_0: <w, e_0> = w_0 + w_1 <e_1, e_0> = 0
        let w = CVector::from_column_slice(&[-g.inner(1, 0), c(1., 0.)]);
        assert!((&p.matrix * w).norm() < 1e-14);

        // rank-deficient input takes the SVD route
        let dup = CMatrix::from_column_slice(2, 2, &[c(1., 0.), c(0., 0.), c(2., 0.), c(0., 0.)]);
        let pd = range_projection(&dup, &g, 1e-10).unwrap();
        assert_eq!(pd.rank, 1);
        assert!(max_abs(&(pd.matrix - p.matrix)) < 1e-13);
    }

    #[test]
    fn metric_svd_of_identity_map() {
        let g = two_by_two(c(0.0, 0.6));
        let (sv, _) = metric_svd(&CMatrix::identity(2, 2), &g, &g).unwrap();
        assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-12));
    }
}
