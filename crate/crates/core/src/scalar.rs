//! Scalar abstraction.
//!
//! All numerics are generic over a real field `T` (in practice `f32` or `f64`);
//! coefficients, Gram entries and operator matrices live in `Complex<T>`.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// A real floating point type usable as the base field of the complex scalars.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Lossy conversion from an `f64` literal or tolerance.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cx<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

pub(crate) fn zero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn one<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}

pub(crate) fn is_zero<T: Real>(z: Cx<T>) -> bool {
    z.re == T::zero() && z.im == T::zero()
}

pub(crate) fn modulus<T: Real>(z: Cx<T>) -> T {
    z.norm_sqr().sqrt()
}

/// Largest entry modulus of a complex matrix (0 for an empty matrix).
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter()
        .map(|z| z.norm_sqr().sqrt())
        .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
}

/// Position and modulus of the largest entry, used as a failure witness.
pub fn argmax_abs<T: Real>(m: &CMatrix<T>) -> Option<(usize, usize, T)> {
    let mut best: Option<(usize, usize, T)> = None;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)].norm_sqr().sqrt();
            if best.is_none_or(|(_, _, b)| v > b) {
                best = Some((i, j, v));
            }
        }
    }
    best
}
