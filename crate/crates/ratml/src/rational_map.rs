//! The likelihood rational map of a code.
//!
//! For an `[n, k]` code `C` and a point `u` in the cube `[0,1]^n`, each
//! codeword `x` carries the monomial `F_x(u) = prod_i (x_i ? u_i : 1 - u_i)`.
//! With `H(u) = sum_x F_x(u)` and `I_i(u)` the sum restricted to `x_i = 1`,
//! the map is `f_i(u) = I_i(u) / H(u)`: exactly the bitwise posterior of a
//! binary symmetric channel when `u` encodes the per-bit likelihoods.
//! Everything here evaluates `f`, classifies its fixed points and poles, and
//! differentiates `H` and `I_i` exactly at the cube center.

use crate::algebra::{BitMatrix, BitVector, DyadicRational};
use crate::code::{CodeError, LinearCode};

/// Denominators at or below this threshold are reported as poles.
pub const POLE_EPS: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("denominator H(u) vanishes: u is on the pole set")]
    Pole,
    #[error("epsilon = {0} outside the open interval (0, 1/2)")]
    InvalidEpsilon(f64),
    #[error("word is not a codeword")]
    NotACodeword,
    #[error("point must be strictly interior to the cube")]
    NotInterior,
    #[error("coordinate {value} outside [0, 1]")]
    OutOfRange { value: f64 },
    #[error("input has {got} coordinates, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// A point of the closed likelihood cube `[0,1]^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodPoint {
    u: Vec<f64>,
}

impl LikelihoodPoint {
    pub fn new(u: Vec<f64>) -> Result<Self, MapError> {
        if u.is_empty() {
            return Err(MapError::LengthMismatch {
                got: 0,
                expected: 1,
            });
        }
        for &value in &u {
            if !(0.0..=1.0).contains(&value) {
                return Err(MapError::OutOfRange { value });
            }
        }
        Ok(LikelihoodPoint { u })
    }

    /// The cube center `p = (1/2, ..., 1/2)`.
    pub fn center(n: usize) -> Self {
        LikelihoodPoint { u: vec![0.5; n] }
    }

    /// The cube vertex matching a binary word.
    pub fn vertex(word: &BitVector) -> Self {
        LikelihoodPoint {
            u: (0..word.len())
                .map(|i| if word.get(i) { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    /// The decoder start point for received word `y`: coordinate `i` is
    /// `1 - eps` when `y_i = 1` and `eps` otherwise. Requires `0 < eps < 1/2`.
    pub fn init_point(y: &BitVector, eps: f64) -> Result<Self, MapError> {
        if !(eps > 0.0 && eps < 0.5) {
            return Err(MapError::InvalidEpsilon(eps));
        }
        Ok(LikelihoodPoint {
            u: (0..y.len())
                .map(|i| if y.get(i) { 1.0 - eps } else { eps })
                .collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Offset from the center, `v_i = u_i - 1/2`.
    pub fn v(&self) -> Vec<f64> {
        self.u.iter().map(|x| x - 0.5).collect()
    }

    pub fn is_interior(&self) -> bool {
        self.u.iter().all(|&x| x > 0.0 && x < 1.0)
    }

    /// True when every coordinate is exactly 0 or 1.
    pub fn is_vertex(&self) -> bool {
        self.u.iter().all(|&x| x == 0.0 || x == 1.0)
    }

    /// The binary word of a vertex point.
    pub fn to_word(&self) -> Option<BitVector> {
        if !self.is_vertex() {
            return None;
        }
        let mut w = BitVector::zeros(self.u.len());
        for (i, &x) in self.u.iter().enumerate() {
            if x == 1.0 {
                w.set(i, true);
            }
        }
        Some(w)
    }
}

/// Where a point sits relative to the map's structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    /// Strictly inside the cube; `H > 0` and the map is defined.
    Interior,
    /// A vertex that is a codeword: a fixed point of the map.
    CodewordFixed,
    /// `H(u) = 0`: the map is undefined here.
    Pole,
    /// On the boundary but not a vertex, with `H > 0`.
    BoundaryRegular,
}

/// `F_x(u)` for a codeword `x`.
pub fn codeword_poly(
    code: &LinearCode,
    x: &BitVector,
    u: &LikelihoodPoint,
) -> Result<f64, MapError> {
    check_len(code, u)?;
    if !code.contains(x)? {
        return Err(MapError::NotACodeword);
    }
    let mut prod = 1.0;
    for i in 0..code.n() {
        prod *= if x.get(i) { u.u[i] } else { 1.0 - u.u[i] };
    }
    Ok(prod)
}

/// `H(u)`, the sum of `F_x(u)` over all codewords. May underflow to zero in
/// the log-domain regime (`n > 64`); use [`classify_point`] for pole tests.
pub fn h_eval(code: &LinearCode, u: &LikelihoodPoint) -> Result<f64, MapError> {
    check_len(code, u)?;
    let sweep = sweep(code, u)?;
    Ok(sweep.h * sweep.scale.exp())
}

/// Evaluates the map, `f_i(u) = I_i(u) / H(u)`. Stays inside the closed cube;
/// errors with [`MapError::Pole`] where `H` vanishes.
pub fn map_eval(code: &LinearCode, u: &LikelihoodPoint) -> Result<LikelihoodPoint, MapError> {
    let soft = map_eval_soft(code, u)?;
    Ok(LikelihoodPoint {
        u: soft.into_iter().map(|x| x.clamp(0.0, 1.0)).collect(),
    })
}

/// Map values before clamping, for callers that threshold them.
pub(crate) fn map_eval_soft(code: &LinearCode, u: &LikelihoodPoint) -> Result<Vec<f64>, MapError> {
    check_len(code, u)?;
    let s = sweep(code, u)?;
    if s.h <= POLE_EPS {
        return Err(MapError::Pole);
    }
    Ok(s.nums.iter().map(|num| num / s.h).collect())
}

/// Classifies a cube vertex: codeword fixed point or pole. Uses the parity
/// check matrix, so it needs no enumeration.
pub fn classify_vertex(code: &LinearCode, word: &BitVector) -> Result<PointClass, MapError> {
    if code.contains(word)? {
        Ok(PointClass::CodewordFixed)
    } else {
        Ok(PointClass::Pole)
    }
}

/// Classifies any cube point. Interior points are never poles; boundary
/// points are poles exactly when every codeword monomial vanishes.
pub fn classify_point(code: &LinearCode, u: &LikelihoodPoint) -> Result<PointClass, MapError> {
    check_len(code, u)?;
    if u.is_interior() {
        return Ok(PointClass::Interior);
    }
    if let Some(word) = u.to_word() {
        return classify_vertex(code, &word);
    }
    // Boundary terms are exact products with zero factors, so the sweep's
    // scaled denominator is exactly zero on the pole set.
    let s = sweep(code, u)?;
    if s.h <= POLE_EPS {
        Ok(PointClass::Pole)
    } else {
        Ok(PointClass::BoundaryRegular)
    }
}

/// Jacobian of the map at the center: `J_ij = 1` iff generator columns `i`
/// and `j` are equal. The identity matrix exactly when all columns differ.
pub fn jacobian_at_p(code: &LinearCode) -> BitMatrix {
    let n = code.n();
    let mut j = BitMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if code.column(a) == code.column(b) {
                j.set(a, b, true);
            }
        }
    }
    j
}

/// Numeric Jacobian by central differences with step `h`, clamped to the
/// cube at the boundary (one-sided there).
#[allow(clippy::needless_range_loop)]
pub fn jacobian_numeric(
    code: &LinearCode,
    u: &LikelihoodPoint,
    h: f64,
) -> Result<Vec<Vec<f64>>, MapError> {
    check_len(code, u)?;
    let n = code.n();
    let mut jac = vec![vec![0.0; n]; n];
    for j in 0..n {
        let up = (u.u[j] + h).min(1.0);
        let down = (u.u[j] - h).max(0.0);
        let mut plus = u.clone();
        plus.u[j] = up;
        let mut minus = u.clone();
        minus.u[j] = down;
        let f_plus = map_eval_soft(code, &plus)?;
        let f_minus = map_eval_soft(code, &minus)?;
        for i in 0..n {
            jac[i][j] = (f_plus[i] - f_minus[i]) / (up - down);
        }
    }
    Ok(jac)
}

/// Spectral structure of the Jacobian at the center, read off the partition
/// of generator columns into equality classes.
pub struct EigenStructure {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl EigenStructure {
    /// Classes of equal generator columns, ordered by first occurrence,
    /// members ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// All `n` eigenvalues: each class of size `m` contributes `m` once and
    /// `0` with multiplicity `m - 1`.
    pub fn spectrum(&self) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.n);
        for class in &self.classes {
            s.push(class.len());
            s.extend(std::iter::repeat_n(0, class.len() - 1));
        }
        s
    }

    /// A full eigenbasis as integer vectors: per class the all-ones
    /// indicator (eigenvalue = class size) and difference vectors
    /// (eigenvalue 0).
    pub fn eigenpairs(&self) -> Vec<(i64, Vec<i64>)> {
        let mut pairs = Vec::with_capacity(self.n);
        for class in &self.classes {
            let mut indicator = vec![0i64; self.n];
            for &i in class {
                indicator[i] = 1;
            }
            pairs.push((class.len() as i64, indicator));
            for &other in &class[1..] {
                let mut diff = vec![0i64; self.n];
                diff[class[0]] = 1;
                diff[other] = -1;
                pairs.push((0, diff));
            }
        }
        pairs
    }
}

pub fn eigen_structure(code: &LinearCode) -> EigenStructure {
    EigenStructure {
        n: code.n(),
        classes: column_classes(code),
    }
}

/// Partition of `0..n` into classes of equal generator columns, ordered by
/// first occurrence.
pub fn column_classes(code: &LinearCode) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index: std::collections::HashMap<&BitVector, usize> = std::collections::HashMap::new();
    for (i, col) in code.columns().iter().enumerate() {
        match index.get(col) {
            Some(&c) => classes[c].push(i),
            None => {
                index.insert(col, classes.len());
                classes.push(vec![i]);
            }
        }
    }
    classes
}

/// Largest violation of the gradient identity
/// `f_i(u) - u_i = u_i (1 - u_i) d_i log H(u)` over coordinates, at a
/// strictly interior point.
///
/// The left side comes from the map sweep; the right side differentiates `H`
/// through independent skip products, so the two routes cross-check each
/// other and the returned residual is a genuine numerical error bound.
#[allow(clippy::needless_range_loop)]
pub fn gradient_residual(code: &LinearCode, u: &LikelihoodPoint) -> Result<f64, MapError> {
    check_len(code, u)?;
    if !u.is_interior() {
        return Err(MapError::NotInterior);
    }
    let f = map_eval_soft(code, u)?;
    let h = h_eval(code, u)?;

    let n = code.n();
    // dH[i] = sum_x sigma_i(x) * prod_{j != i} rho_j(u_j), no divisions.
    let mut dh = vec![0.0; n];
    code.for_each_codeword(|x| {
        for i in 0..n {
            let mut prod = 1.0;
            for j in 0..n {
                if j != i {
                    prod *= if x.get(j) { u.u[j] } else { 1.0 - u.u[j] };
                }
            }
            dh[i] += if x.get(i) { prod } else { -prod };
        }
    })?;

    let mut worst = 0.0f64;
    for i in 0..n {
        let residual = f[i] - u.u[i] - u.u[i] * (1.0 - u.u[i]) * dh[i] / h;
        worst = worst.max(residual.abs());
    }
    Ok(worst)
}

/// Which codeword sum a derivative applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    /// The full denominator `H`.
    Full,
    /// The numerator `I_i` restricted to `x_i = 1` (0-based coordinate).
    Restricted(usize),
}

/// Exact mixed partial derivative of `H` or `I_i` at the cube center, by
/// direct enumeration in dyadic arithmetic.
///
/// `s` lists differentiation coordinates (0-based, order irrelevant). Any
/// repeated coordinate gives zero since the sums are multilinear. For
/// distinct coordinates the derivative is
/// `2^-(n-|s|) * sum_x prod_{j in s} sigma_j(x)` with `sigma_j(x) = +-1` as
/// `x_j` is 1 or 0, the sum over the (restricted) codewords.
pub fn derivative_oracle(
    code: &LinearCode,
    kind: SumKind,
    s: &[usize],
) -> Result<DyadicRational, MapError> {
    validate_indices(code, kind, s)?;
    if has_duplicates(s) {
        return Ok(DyadicRational::zero());
    }
    let restriction = match kind {
        SumKind::Full => None,
        SumKind::Restricted(i) => Some(i),
    };
    let mut acc: i64 = 0;
    code.for_each_codeword(|x| {
        if let Some(i) = restriction {
            if !x.get(i) {
                return;
            }
        }
        let negatives = s.iter().filter(|&&j| !x.get(j)).count();
        acc += if negatives % 2 == 0 { 1 } else { -1 };
    })?;
    Ok(DyadicRational::new(acc, -((code.n() - s.len()) as i64)))
}

/// The same central derivatives as [`derivative_oracle`], from the
/// column-combinatorics classification instead of enumeration:
///
/// * repeated coordinates: 0;
/// * `H`: `(-1)^l 2^(-n+k+l)` when the selected columns xor to zero, else 0;
/// * `I_i`: with column xor `t`, the value is `(-1)^(l+1) 2^(-n+k+l-1)` when
///   `t = g_i`, `(-1)^l 2^(-n+k+l-1)` when `t = 0`, and 0 otherwise.
pub fn derivative_closed_form(
    code: &LinearCode,
    kind: SumKind,
    s: &[usize],
) -> Result<DyadicRational, MapError> {
    validate_indices(code, kind, s)?;
    if has_duplicates(s) {
        return Ok(DyadicRational::zero());
    }
    let (n, k, l) = (code.n() as i64, code.k() as i64, s.len() as i64);
    let column_xor = code.generator().column_sum(s).map_err(CodeError::from)?;
    let sign = |exp: i64, negative: bool| {
        let p = DyadicRational::pow2(exp);
        if negative {
            -p
        } else {
            p
        }
    };
    match kind {
        SumKind::Full => {
            if column_xor.is_zero() {
                Ok(sign(-n + k + l, l % 2 == 1))
            } else {
                Ok(DyadicRational::zero())
            }
        }
        SumKind::Restricted(i) => {
            if &column_xor == code.column(i) {
                Ok(sign(-n + k + l - 1, l % 2 == 0))
            } else if column_xor.is_zero() {
                Ok(sign(-n + k + l - 1, l % 2 == 1))
            } else {
                Ok(DyadicRational::zero())
            }
        }
    }
}

fn validate_indices(code: &LinearCode, kind: SumKind, s: &[usize]) -> Result<(), MapError> {
    let check = |i: usize| {
        if i >= code.n() {
            Err(MapError::LengthMismatch {
                got: i,
                expected: code.n(),
            })
        } else {
            Ok(())
        }
    };
    if let SumKind::Restricted(i) = kind {
        check(i)?;
    }
    for &i in s {
        check(i)?;
    }
    Ok(())
}

fn has_duplicates(s: &[usize]) -> bool {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}

fn check_len(code: &LinearCode, u: &LikelihoodPoint) -> Result<(), MapError> {
    if u.n() != code.n() {
        return Err(MapError::LengthMismatch {
            got: u.n(),
            expected: code.n(),
        });
    }
    Ok(())
}

/// Codeword sweep result: `H = h * exp(scale)` and `I_i = nums[i] * exp(scale)`.
struct Sweep {
    h: f64,
    nums: Vec<f64>,
    scale: f64,
}

/// Accumulates `H` and all numerators in one Gray-order pass. Linear domain
/// for `n <= 64` (falling back when the base product underflows), log domain
/// with compensated summation above.
fn sweep(code: &LinearCode, u: &LikelihoodPoint) -> Result<Sweep, MapError> {
    let n = code.n();
    if n <= 64 {
        if u.is_interior() {
            let base: f64 = u.u.iter().map(|x| 1.0 - x).product();
            if base > 1e-280 {
                return sweep_linear_incremental(code, u, base);
            }
        } else {
            return sweep_linear_fresh(code, u);
        }
    }
    if u.is_interior() {
        sweep_log_incremental(code, u)
    } else {
        sweep_log_fresh(code, u)
    }
}

/// Interior fast path: maintain `F_x` multiplicatively along the Gray walk.
/// Allocation-free per codeword; this is the decoder's hot loop.
fn sweep_linear_incremental(
    code: &LinearCode,
    u: &LikelihoodPoint,
    base: f64,
) -> Result<Sweep, MapError> {
    let n = code.n();
    let ratio: Vec<f64> = u.u.iter().map(|x| x / (1.0 - x)).collect();
    let mut h = 0.0;
    let mut nums = vec![0.0; n];
    let mut f = base;
    let mut current = vec![0u64; n.div_ceil(64)];
    let mut first = true;
    code.for_each_codeword(|x| {
        if first {
            first = false;
        } else {
            // One generator row toggles per Gray step; adjust F per changed
            // factor, reading the diff word by word.
            for (wi, (&new_word, cur)) in x.as_words().iter().zip(current.iter_mut()).enumerate() {
                let mut diff = new_word ^ *cur;
                while diff != 0 {
                    let bit = diff.trailing_zeros();
                    let j = wi * 64 + bit as usize;
                    if new_word >> bit & 1 == 1 {
                        f *= ratio[j];
                    } else {
                        f /= ratio[j];
                    }
                    diff &= diff - 1;
                }
                *cur = new_word;
            }
        }
        h += f;
        for i in x.ones() {
            nums[i] += f;
        }
    })?;
    Ok(Sweep {
        h,
        nums,
        scale: 0.0,
    })
}

/// Boundary-tolerant path: fresh product per codeword, exact zeros preserved.
fn sweep_linear_fresh(code: &LinearCode, u: &LikelihoodPoint) -> Result<Sweep, MapError> {
    let n = code.n();
    let mut h = 0.0;
    let mut nums = vec![0.0; n];
    code.for_each_codeword(|x| {
        let mut f = 1.0;
        for j in 0..n {
            f *= if x.get(j) { u.u[j] } else { 1.0 - u.u[j] };
        }
        h += f;
        for i in x.ones() {
            nums[i] += f;
        }
    })?;
    Ok(Sweep {
        h,
        nums,
        scale: 0.0,
    })
}

/// Large-`n` interior path: Gray-incremental log weights, two passes (max,
/// then compensated accumulation of `exp(l - lmax)`).
fn sweep_log_incremental(code: &LinearCode, u: &LikelihoodPoint) -> Result<Sweep, MapError> {
    let n = code.n();
    let delta: Vec<f64> = u.u.iter().map(|x| x.ln() - (1.0 - x).ln()).collect();
    let base: f64 = u.u.iter().map(|x| (1.0 - x).ln()).sum();

    let mut lmax = f64::NEG_INFINITY;
    walk_log(code, base, &delta, |l, _| lmax = lmax.max(l))?;

    let mut h = Neumaier::default();
    let mut nums = vec![Neumaier::default(); n];
    walk_log(code, base, &delta, |l, x| {
        let w = (l - lmax).exp();
        h.add(w);
        for i in x.ones() {
            nums[i].add(w);
        }
    })?;
    Ok(Sweep {
        h: h.sum(),
        nums: nums.iter().map(Neumaier::sum).collect(),
        scale: lmax,
    })
}

/// Large-`n` boundary path: fresh log weights; codewords hitting a zero
/// factor are skipped (their monomial is exactly zero).
fn sweep_log_fresh(code: &LinearCode, u: &LikelihoodPoint) -> Result<Sweep, MapError> {
    let n = code.n();
    let mut terms: Vec<(f64, BitVector)> = Vec::new();
    let mut lmax = f64::NEG_INFINITY;
    code.for_each_codeword(|x| {
        let mut l = 0.0;
        for j in 0..n {
            let factor = if x.get(j) { u.u[j] } else { 1.0 - u.u[j] };
            if factor == 0.0 {
                return;
            }
            l += factor.ln();
        }
        lmax = lmax.max(l);
        terms.push((l, x.clone()));
    })?;
    if terms.is_empty() {
        // Every monomial vanished: exact pole.
        return Ok(Sweep {
            h: 0.0,
            nums: vec![0.0; n],
            scale: 0.0,
        });
    }
    let mut h = Neumaier::default();
    let mut nums = vec![Neumaier::default(); n];
    for (l, x) in &terms {
        let w = (l - lmax).exp();
        h.add(w);
        for i in x.ones() {
            nums[i].add(w);
        }
    }
    Ok(Sweep {
        h: h.sum(),
        nums: nums.iter().map(Neumaier::sum).collect(),
        scale: lmax,
    })
}

/// Gray walk sharing the incremental log-weight bookkeeping between passes.
fn walk_log<F: FnMut(f64, &BitVector)>(
    code: &LinearCode,
    base: f64,
    delta: &[f64],
    mut visit: F,
) -> Result<(), MapError> {
    let mut l = base;
    let mut word = BitVector::zeros(code.n());
    let mut first = true;
    code.for_each_codeword(|x| {
        if first {
            first = false;
        } else {
            let mut diff = word.clone();
            diff.xor_assign(x);
            for j in diff.ones() {
                if x.get(j) {
                    l += delta[j];
                } else {
                    l -= delta[j];
                }
            }
            word = x.clone();
        }
        visit(l, x);
    })?;
    Ok(())
}

/// Neumaier-compensated accumulator.
#[derive(Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}
