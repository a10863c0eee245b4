//! Bit-packed linear algebra over F2, exact dyadic rationals, and small
//! binary extension fields GF(2^m).

mod bits;
mod dyadic;
mod gf;
mod matrix;

pub use bits::{BitVector, MAX_BITS};
pub use dyadic::DyadicRational;
pub use gf::GfField;
pub use matrix::BitMatrix;

/// Errors from the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("rank deficient: row {row} is a combination of earlier rows")]
    RankDeficient { row: usize },
    #[error("index {index} out of range ({len} entries)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("division by zero in GF(2^{m})")]
    DivisionByZero { m: u32 },
    #[error("unsupported field degree m = {0} (need 2 ..= 16)")]
    UnsupportedFieldDegree(u32),
    #[error("0x{poly:x} is not a primitive polynomial of degree {m}")]
    NotPrimitive { poly: u32, m: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
