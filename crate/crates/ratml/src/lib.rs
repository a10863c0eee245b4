//! Rational-map decoding of binary linear codes.
//!
//! A binary linear code turns the bitwise maximum-likelihood decision on a
//! memoryless binary symmetric channel into the evaluation of a rational map
//! on the likelihood cube `[0,1]^n`. This crate implements that map, its
//! truncated Taylor approximations around the cube center (driven entirely by
//! generator-matrix column combinatorics), the resulting decoders, and a
//! seeded Monte Carlo harness for bit-error-rate comparisons.

pub mod algebra;
pub mod channel_sim;
pub mod code;
pub mod decode;
pub mod rational_map;
pub mod rng;
pub mod taylor;

pub use algebra::{AlgebraError, BitMatrix, BitVector, DyadicRational, GfField};
pub use channel_sim::{
    BerResult, ChannelConfig, CodeInstance, CodeSource, DecoderSpec, PreparedDecoder, SimError,
    SweepRow, SweepSpec,
};
pub use code::{BchCode, CodeError, LinearCode};
pub use decode::{DecodeError, DecodeMethod, DecodeOutcome};
pub use rational_map::{LikelihoodPoint, MapError, PointClass};
pub use taylor::{TaylorError, ThetaSet, TruncatedMap};
