//! The three decoders under comparison: exact bitwise ML through the
//! rational map, approximate ML through a truncated map, and a
//! Berlekamp-Massey bounded-distance baseline for the BCH code.

use crate::algebra::BitVector;
use crate::code::{BchCode, CodeError, LinearCode};
use crate::rational_map::{map_eval_soft, LikelihoodPoint, MapError};
use crate::taylor::{TaylorError, TruncatedMap};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecodeError {
    #[error("received word has {got} bits, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Taylor(#[from] TaylorError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMethod {
    Ml,
    ApproxMl,
    Bm,
    /// Hard decision on the channel output, the no-coding baseline.
    Identity,
}

impl DecodeMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecodeMethod::Ml => "ml",
            DecodeMethod::ApproxMl => "approx",
            DecodeMethod::Bm => "bm",
            DecodeMethod::Identity => "identity",
        }
    }
}

/// A decoding result: the hard decision, the per-bit soft values it was
/// thresholded from, and a failure flag (only the bounded-distance decoder
/// can fail; it then passes the received word through).
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub decoded: BitVector,
    pub soft: Vec<f64>,
    pub failure: bool,
    pub method: DecodeMethod,
}

/// Hard decision: bit `i` is 1 iff `soft_i >= 1/2`. Ties go to 1.
pub fn threshold(soft: &[f64]) -> BitVector {
    let mut word = BitVector::zeros(soft.len());
    for (i, &value) in soft.iter().enumerate() {
        if value >= 0.5 {
            word.set(i, true);
        }
    }
    word
}

/// Exact bitwise ML: evaluate the rational map at the start point of `y`
/// and threshold. One codeword sweep.
pub fn ml_decode(
    code: &LinearCode,
    y: &BitVector,
    epsilon: f64,
) -> Result<DecodeOutcome, DecodeError> {
    check_len(y, code.n())?;
    let u0 = LikelihoodPoint::init_point(y, epsilon)?;
    // Start points are strictly interior, so the map cannot hit a pole.
    let soft = map_eval_soft(code, &u0)?;
    Ok(DecodeOutcome {
        decoded: threshold(&soft),
        soft,
        failure: false,
        method: DecodeMethod::Ml,
    })
}

/// Approximate ML: evaluate the truncated map at the start point and
/// threshold the raw values (no clamping; the decision is unaffected).
/// Cost is linear in the term count, independent of the codeword count.
pub fn approx_ml_decode(
    tm: &TruncatedMap,
    y: &BitVector,
    epsilon: f64,
) -> Result<DecodeOutcome, DecodeError> {
    check_len(y, tm.n())?;
    let u0 = LikelihoodPoint::init_point(y, epsilon)?;
    let soft = tm.eval(u0.u())?;
    Ok(DecodeOutcome {
        decoded: threshold(&soft),
        soft,
        failure: false,
        method: DecodeMethod::ApproxMl,
    })
}

/// Bounded-distance decoding: syndromes over the BCH field, Berlekamp-Massey
/// error locator, Chien root search, flip the located bits. When the locator
/// degree exceeds `t` or does not split into distinct roots, the received
/// word passes through with `failure` set.
pub fn bm_decode(bch: &BchCode, y: &BitVector) -> Result<DecodeOutcome, DecodeError> {
    let code = bch.linear();
    let n = code.n();
    check_len(y, n)?;
    let field = bch.field();
    let two_t = 2 * bch.t();

    // S_j = y(alpha^j), j = 1..2t; bit i is the coefficient of x^i.
    let mut syndromes = vec![0u16; two_t];
    for (j, s) in syndromes.iter_mut().enumerate() {
        let mut acc = 0u16;
        for i in y.ones() {
            acc ^= field.alpha_pow((i as u64) * (j as u64 + 1));
        }
        *s = acc;
    }

    let outcome = |decoded: BitVector, failure: bool| {
        let soft = (0..n)
            .map(|i| if decoded.get(i) { 1.0 } else { 0.0 })
            .collect();
        Ok(DecodeOutcome {
            decoded,
            soft,
            failure,
            method: DecodeMethod::Bm,
        })
    };

    if syndromes.iter().all(|&s| s == 0) {
        return outcome(y.clone(), false);
    }

    let sigma = berlekamp_massey(bch, &syndromes)?;
    let degree = sigma.len() - 1;
    if degree > bch.t() {
        return outcome(y.clone(), true);
    }

    // Chien search: an error at position i makes alpha^(-i) a root.
    let group_order = field.order() as u64 - 1;
    let mut positions = Vec::with_capacity(degree);
    for i in 0..n as u64 {
        let x = field.alpha_pow(group_order - i);
        let mut value = 0u16;
        for &coeff in sigma.iter().rev() {
            value = field.mul(value, x) ^ coeff;
        }
        if value == 0 {
            positions.push(i as usize);
        }
    }
    if positions.len() != degree {
        return outcome(y.clone(), true);
    }
    let mut decoded = y.clone();
    for &i in &positions {
        decoded.flip(i);
    }
    outcome(decoded, false)
}

/// Massey's LFSR synthesis over the BCH field. Returns the error locator
/// sigma as coefficients in ascending degree, trimmed, sigma[0] = 1.
fn berlekamp_massey(bch: &BchCode, syndromes: &[u16]) -> Result<Vec<u16>, DecodeError> {
    let field = bch.field();
    let mut sigma = vec![1u16];
    let mut prev = vec![1u16];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut prev_discrepancy = 1u16;

    for step in 0..syndromes.len() {
        let mut d = syndromes[step];
        for i in 1..=l.min(sigma.len() - 1) {
            d ^= field.mul(sigma[i], syndromes[step - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coeff = field
            .mul(d, field.inv(prev_discrepancy).map_err(CodeError::from)?);
        if 2 * l <= step {
            let snapshot = sigma.clone();
            apply_correction(&mut sigma, &prev, coeff, shift, field);
            l = step + 1 - l;
            prev = snapshot;
            prev_discrepancy = d;
            shift = 1;
        } else {
            apply_correction(&mut sigma, &prev, coeff, shift, field);
            shift += 1;
        }
    }
    while sigma.len() > 1 && *sigma.last().unwrap() == 0 {
        sigma.pop();
    }
    Ok(sigma)
}

/// sigma -= coeff * x^shift * prev (subtraction is xor).
fn apply_correction(
    sigma: &mut Vec<u16>,
    prev: &[u16],
    coeff: u16,
    shift: usize,
    field: &crate::algebra::GfField,
) {
    if sigma.len() < prev.len() + shift {
        sigma.resize(prev.len() + shift, 0);
    }
    for (j, &p) in prev.iter().enumerate() {
        sigma[j + shift] ^= field.mul(coeff, p);
    }
}

/// Hamming distance between two equal-length words.
pub fn bit_errors(a: &BitVector, b: &BitVector) -> usize {
    assert_eq!(a.len(), b.len(), "length mismatch");
    let mut diff = a.clone();
    diff.xor_assign(b);
    diff.weight()
}

fn check_len(y: &BitVector, expected: usize) -> Result<(), DecodeError> {
    if y.len() != expected {
        return Err(DecodeError::LengthMismatch {
            got: y.len(),
            expected,
        });
    }
    Ok(())
}
