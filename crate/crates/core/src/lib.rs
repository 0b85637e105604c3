//! Fock and tail representations of q_ij-commuting isometries, computed on
//! finite truncation windows.
//!
//! Everything numeric is generic over a real scalar `T: Real` (f32 or f64);
//! the aliases below fix `T = f64`, which is what the checks are tuned for.

pub mod dual;
pub mod error;
pub mod fock;
pub mod metric;
pub mod multiindex;
pub mod rewrite;
pub mod scalar;
pub mod tailrep;
pub mod window;

pub use error::{Error, Result};
pub use multiindex::{Letter, TailSpec, Word};
pub use scalar::Real;

pub type C64 = scalar::Cx<f64>;
pub type CMatrix64 = scalar::CMatrix<f64>;
pub type QMatrix64 = multiindex::QMatrix<f64>;
pub type GramMatrix64 = metric::GramMatrix<f64>;
pub type RepWindow64 = window::RepWindow<f64>;
pub type TailWindow64 = tailrep::TailWindow<f64>;
pub type DualSystem64 = dual::DualSystem<f64>;
pub type Monomial64 = rewrite::Monomial<f64>;

pub type QMatrix32 = multiindex::QMatrix<f32>;
pub type RepWindow32 = window::RepWindow<f32>;
