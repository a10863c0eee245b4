//! Binary linear codes: construction and validation, Gray-order codeword
//! enumeration, distance and duality, column independence analysis, seeded
//! random circulant codes, and the BCH(63,7) reference code.

use std::collections::HashMap;

use crate::algebra::{AlgebraError, BitMatrix, BitVector, GfField};
use crate::rng;

/// Exhaustive codeword enumeration is limited to `2^28` words.
pub const MAX_ENUM_K: usize = 28;

/// Column independence checks are capped at subsets of this size.
pub const MAX_CLEAN_ORDER_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("k = {0} too large for exhaustive enumeration (max {MAX_ENUM_K})")]
    TooLarge(usize),
    #[error("generator column {0} is zero (1-based)")]
    ZeroColumn(usize),
    #[error("generator rows are linearly dependent")]
    RankDeficient,
    #[error("input has {got} bits, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An `[n, k]` binary linear code, held as a validated generator matrix plus
/// a parity check matrix whose rows span the dual code.
#[derive(Clone)]
pub struct LinearCode {
    name: String,
    n: usize,
    k: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
    /// Columns of the generator, cached: the Taylor machinery reads them hard.
    columns: Vec<BitVector>,
}

impl LinearCode {
    /// Validates `g` (full row rank, no zero column) and derives the parity
    /// check matrix from its nullspace. `k == n` is allowed; the parity check
    /// matrix then has zero rows.
    pub fn from_generator(name: impl Into<String>, g: BitMatrix) -> Result<Self, CodeError> {
        let (k, n) = (g.rows(), g.cols());
        if k == 0 || n < k {
            return Err(CodeError::InvalidSpec(format!(
                "generator must have 1 <= k <= n, got {k} x {n}"
            )));
        }
        let columns: Vec<BitVector> = (0..n).map(|c| g.column(c)).collect();
        if let Some(c) = columns.iter().position(|col| col.is_zero()) {
            return Err(CodeError::ZeroColumn(c + 1));
        }
        let parity_check = g.nullspace_basis().map_err(|_| CodeError::RankDeficient)?;
        if parity_check.rows() > 0 {
            debug_assert!(g.mul_transpose(&parity_check).is_zero());
        }
        Ok(LinearCode {
            name: name.into(),
            n,
            k,
            generator: g,
            parity_check,
            columns,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Rows span the dual code; empty (zero rows) when `k == n`.
    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Column `c` of the generator (0-based).
    pub fn column(&self, c: usize) -> &BitVector {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[BitVector] {
        &self.columns
    }

    /// `message * G`.
    pub fn encode(&self, message: &BitVector) -> Result<BitVector, CodeError> {
        if message.len() != self.k {
            return Err(CodeError::LengthMismatch {
                got: message.len(),
                expected: self.k,
            });
        }
        Ok(self.generator.xor_selected_rows(message))
    }

    /// Membership test through the parity check matrix.
    pub fn contains(&self, word: &BitVector) -> Result<bool, CodeError> {
        if word.len() != self.n {
            return Err(CodeError::LengthMismatch {
                got: word.len(),
                expected: self.n,
            });
        }
        Ok(self.parity_check.row_iter().all(|row| !row.dot(word)))
    }

    /// Visits all `2^k` codewords exactly once, in Gray-code message order:
    /// each step xors a single generator row into a reused buffer.
    pub fn for_each_codeword<F: FnMut(&BitVector)>(&self, mut f: F) -> Result<(), CodeError> {
        if self.k > MAX_ENUM_K {
            return Err(CodeError::TooLarge(self.k));
        }
        let mut word = BitVector::zeros(self.n);
        f(&word);
        for t in 1u64..1 << self.k {
            word.xor_assign(self.generator.row(t.trailing_zeros() as usize));
            f(&word);
        }
        Ok(())
    }

    /// All codewords collected in Gray-code message order. Prefer
    /// [`Self::for_each_codeword`] when `2^k` clones would hurt.
    pub fn codewords(&self) -> Result<Vec<BitVector>, CodeError> {
        let mut out = Vec::with_capacity(1 << self.k.min(16));
        self.for_each_codeword(|w| out.push(w.clone()))?;
        Ok(out)
    }

    /// Minimum Hamming weight over nonzero codewords, by full enumeration.
    pub fn min_distance(&self) -> Result<usize, CodeError> {
        let mut min = usize::MAX;
        self.for_each_codeword(|w| {
            let weight = w.weight();
            if weight > 0 && weight < min {
                min = weight;
            }
        })?;
        Ok(min)
    }

    /// The dual code, generated by the parity check matrix.
    pub fn dual(&self) -> Result<LinearCode, CodeError> {
        LinearCode::from_generator(format!("{}_dual", self.name), self.parity_check.clone())
    }

    /// Number of codewords satisfying every constraint, by full enumeration.
    pub fn subcode_count(&self, constraints: &[Constraint]) -> Result<u64, CodeError> {
        let mut masks = Vec::with_capacity(constraints.len());
        for c in constraints {
            let mut mask = BitVector::zeros(self.n);
            for &i in &c.indices {
                if i >= self.n {
                    return Err(AlgebraError::IndexOutOfRange {
                        index: i,
                        len: self.n,
                    }
                    .into());
                }
                mask.flip(i); // repeated indices cancel, as xor does
            }
            masks.push((mask, c.parity));
        }
        let mut count = 0u64;
        self.for_each_codeword(|w| {
            if masks.iter().all(|(mask, parity)| w.dot(mask) == *parity) {
                count += 1;
            }
        })?;
        Ok(count)
    }

    /// Largest `l <= 4` such that every `l` distinct generator columns are
    /// linearly independent. `capped` reports that the cap was reached, not
    /// that independence stops at 4.
    pub fn max_clean_order(&self) -> CleanOrder {
        for l in 2..=MAX_CLEAN_ORDER_CAP {
            if self.dependent_column_set(l).is_some() {
                return CleanOrder {
                    order: l - 1,
                    capped: false,
                };
            }
        }
        CleanOrder {
            order: MAX_CLEAN_ORDER_CAP,
            capped: true,
        }
    }

    /// A set of exactly `l` distinct columns (0-based, ascending) that is
    /// linearly dependent, if one exists. Assumes every smaller set is
    /// independent, which holds along the `max_clean_order` scan.
    pub(crate) fn dependent_column_set(&self, l: usize) -> Option<Vec<usize>> {
        match l {
            // Zero columns are rejected at construction.
            1 => None,
            2 => {
                let mut seen: HashMap<&BitVector, usize> = HashMap::new();
                for (j, col) in self.columns.iter().enumerate() {
                    if let Some(&i) = seen.get(col) {
                        return Some(vec![i, j]);
                    }
                    seen.insert(col, j);
                }
                None
            }
            3 => {
                // A dependent triple {a < b < c} has col_c = col_a + col_b;
                // scanning c against all earlier pairs finds the first one.
                let mut pair_sums: HashMap<BitVector, (usize, usize)> = HashMap::new();
                for (c, col) in self.columns.iter().enumerate() {
                    if let Some(&(a, b)) = pair_sums.get(col) {
                        return Some(vec![a, b, c]);
                    }
                    for a in 0..c {
                        let mut sum = self.columns[a].clone();
                        sum.xor_assign(col);
                        pair_sums.entry(sum).or_insert((a, c));
                    }
                }
                None
            }
            4 => {
                // With all triples independent, a dependent quadruple is two
                // pairs with equal sums, necessarily disjoint.
                let mut pair_sums: HashMap<BitVector, (usize, usize)> = HashMap::new();
                for b in 0..self.n {
                    for a in 0..b {
                        let mut sum = self.columns[a].clone();
                        sum.xor_assign(&self.columns[b]);
                        if let Some(&(x, y)) = pair_sums.get(&sum) {
                            let mut set = vec![x, y, a, b];
                            set.sort_unstable();
                            return Some(set);
                        }
                        pair_sums.insert(sum, (a, b));
                    }
                }
                None
            }
            _ => panic!("dependent_column_set supports l in 1..=4, got {l}"),
        }
    }
}

/// A parity constraint on codeword bits: xor of `indices` must equal
/// `parity`. Indices are 0-based.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub indices: Vec<usize>,
    pub parity: bool,
}

/// Result of [`LinearCode::max_clean_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CleanOrder {
    pub order: usize,
    pub capped: bool,
}

/// Parameters for a seeded random systematic code `[I_k | A_1 ... A_b]`
/// where each `A_j` is a column-permuted circulant of column weight `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomCodeSpec {
    pub k: usize,
    pub blocks: usize,
    pub weight: usize,
    pub seed: u64,
}

impl RandomCodeSpec {
    pub fn n(&self) -> usize {
        self.k * (self.blocks + 1)
    }
}

/// Builds the seeded random systematic circulant code for `spec`. The
/// identity block keeps the generator full rank; a fresh block draw guards
/// the remaining invariants anyway.
pub fn random_systematic_circulant(spec: &RandomCodeSpec) -> Result<LinearCode, CodeError> {
    let RandomCodeSpec {
        k,
        blocks,
        weight,
        seed,
    } = *spec;
    if k == 0 || blocks == 0 || weight == 0 || weight > k {
        return Err(CodeError::InvalidSpec(format!(
            "need k >= 1, blocks >= 1, 1 <= w <= k; got k={k}, blocks={blocks}, w={weight}"
        )));
    }
    if spec.n() > crate::algebra::MAX_BITS {
        return Err(CodeError::InvalidSpec(format!(
            "n = {} exceeds the {} bit limit",
            spec.n(),
            crate::algebra::MAX_BITS
        )));
    }

    let name = format!("rand_k{k}_b{blocks}_w{weight}_s{seed}");
    for attempt in 0..64u64 {
        let mut rows = vec![BitVector::zeros(spec.n()); k];
        for (r, row) in rows.iter_mut().enumerate() {
            row.set(r, true);
        }
        for block in 0..blocks {
            let mut rng = rng::stream(seed, "permutation", &[block as u64, attempt]);
            let perm = fisher_yates(k, &mut rng);
            // Circulant column j holds ones at rows (j .. j + w - 1) mod k,
            // then the block's columns are permuted.
            for (j, &src) in perm.iter().enumerate() {
                let col = (block + 1) * k + j;
                for d in 0..weight {
                    rows[(src + d) % k].set(col, true);
                }
            }
        }
        let g = BitMatrix::from_rows(rows)?;
        match LinearCode::from_generator(&name, g) {
            Ok(code) => return Ok(code),
            Err(_) => continue,
        }
    }
    Err(CodeError::InvalidSpec(format!(
        "could not draw a valid code for {spec:?} in 64 attempts"
    )))
}

fn fisher_yates(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<usize> {
    use rand::Rng;
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    perm
}

/// The `[n, 1, n]` repetition code.
pub fn repetition(n: usize) -> LinearCode {
    let mut row = BitVector::zeros(n);
    for i in 0..n {
        row.set(i, true);
    }
    LinearCode::from_generator(
        format!("rep{n}"),
        BitMatrix::from_rows(vec![row]).expect("one row"),
    )
    .expect("repetition generator is valid")
}

/// The [7, 4, 3] Hamming code in systematic form.
pub fn hamming_7_4() -> LinearCode {
    let g = BitMatrix::from_strings(&["1000110", "0100101", "0010011", "0001111"])
        .expect("well-formed rows");
    LinearCode::from_generator("hamming7_4", g).expect("hamming generator is valid")
}

/// The self-dual [16, 8, 4] binary expansion of a Hermitian-curve
/// Reed-Solomon code over F4. Its dual distance 4 makes every pair and
/// triple of generator columns independent, so order-3 truncation is exact
/// up to the quartic error term.
pub fn hermitian_16() -> LinearCode {
    let g = BitMatrix::from_strings(&[
        "1000000010100111",
        "0100000001011110",
        "0010000010001010",
        "0001000001000101",
        "0000100000101010",
        "0000010000010101",
        "0000001010101101",
        "0000000101011011",
    ])
    .expect("well-formed rows");
    LinearCode::from_generator("hermitian16", g).expect("hermitian generator is valid")
}

/// The narrow-sense binary BCH code of length 63 and dimension 7, with its
/// field and generator polynomial kept for algebraic decoding.
pub struct BchCode {
    linear: LinearCode,
    field: GfField,
    /// Generator polynomial bits, degree `n - k = 56`.
    generator_poly: u64,
    designed_distance: usize,
    t: usize,
}

impl BchCode {
    pub fn linear(&self) -> &LinearCode {
        &self.linear
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    pub fn generator_poly(&self) -> u64 {
        self.generator_poly
    }

    /// Largest `delta` with `alpha^1 .. alpha^(delta-1)` all roots of the
    /// generator polynomial.
    pub fn designed_distance(&self) -> usize {
        self.designed_distance
    }

    /// Guaranteed correction radius `(designed_distance - 1) / 2`.
    pub fn t(&self) -> usize {
        self.t
    }
}

/// Builds BCH(63,7): GF(64) over `x^6 + x + 1`, generator polynomial the
/// product of minimal polynomials of consecutive powers of `alpha` until the
/// degree reaches `n - k = 56`, generator matrix systematic in the last 7
/// positions.
pub fn bch_63_7() -> BchCode {
    let n = 63usize;
    let k = 7usize;
    let field = GfField::new(6).expect("GF(64)");

    // Multiply in minimal polynomials of alpha^1, alpha^2, ... skipping
    // exponents already covered by an earlier conjugacy class.
    let mut g: u64 = 1;
    let mut covered = [false; 63];
    let mut next_root = 1usize;
    while poly_degree(g) < n - k {
        if !covered[next_root] {
            let mp = field.minimal_polynomial(field.alpha_pow(next_root as u64));
            let mp_bits: u64 = mp.ones().map(|i| 1u64 << i).sum();
            g = poly_mul(g, mp_bits);
            let mut e = next_root;
            loop {
                covered[e] = true;
                e = e * 2 % 63;
                if e == next_root {
                    break;
                }
            }
        }
        next_root += 1;
    }
    assert_eq!(poly_degree(g), n - k, "generator degree must be n - k");
    debug_assert_eq!(poly_rem((1u128 << 63) | 1, g), 0, "g must divide x^63 + 1");

    // Designed distance: length of the consecutive root run alpha^1, alpha^2, ...
    let mut designed = 1usize;
    while poly_eval_gf(&field, g, field.alpha_pow(designed as u64)) == 0 {
        designed += 1;
    }

    // Row i encodes x^(56+i) mod g in the first 56 columns plus the identity
    // bit, so codewords are exactly the multiples of g.
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let rem = poly_rem(1u128 << (n - k + i), g);
        let mut row = BitVector::zeros(n);
        for b in 0..(n - k) {
            if rem >> b & 1 == 1 {
                row.set(b, true);
            }
        }
        row.set(n - k + i, true);
        rows.push(row);
    }
    let linear = LinearCode::from_generator(
        "bch63_7",
        BitMatrix::from_rows(rows).expect("equal-length rows"),
    )
    .expect("BCH generator is valid");

    BchCode {
        linear,
        field,
        generator_poly: g,
        designed_distance: designed,
        t: (designed - 1) / 2,
    }
}

fn poly_degree(p: u64) -> usize {
    assert!(p != 0, "degree of zero polynomial");
    63 - p.leading_zeros() as usize
}

/// Carry-less product over F2.
fn poly_mul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut a = a;
    let mut shift = 0;
    while a != 0 {
        let tz = a.trailing_zeros();
        shift += tz;
        acc ^= b << shift;
        a >>= tz + 1;
        shift += 1;
    }
    acc
}

/// Remainder of `a` modulo `m` over F2.
fn poly_rem(mut a: u128, m: u64) -> u64 {
    let md = poly_degree(m) as u32;
    while a >> md != 0 {
        let d = 127 - a.leading_zeros();
        a ^= (m as u128) << (d - md);
    }
    a as u64
}

/// Evaluates the F2 polynomial `p` at a field element.
fn poly_eval_gf(field: &GfField, p: u64, x: u16) -> u16 {
    let mut acc = 0u16;
    for i in 0..=poly_degree(p) {
        if p >> i & 1 == 1 {
            acc = field.add(acc, field.pow(x, i as u64));
        }
    }
    acc
}
