//! Finite and eventually periodic multiindices and their q-scalars.

mod coeff;
mod qmatrix;
mod syntax;
mod tail;
mod word;

pub use coeff::{q_finite, q_infinite, q_infinite_at, q_letter, remove_first, wick_pair};
pub use qmatrix::QMatrix;
pub use syntax::{parse_tail, parse_word};
pub(crate) use syntax::{parse_letter, tokens};
pub use tail::{align_shift, tails_equivalent, InfiniteWord, TailSpec};
pub use word::{is_permutation, setminus, Letter, Word};
