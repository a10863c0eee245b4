//! Taylor truncations of the likelihood map at the cube center.
//!
//! The degree-`l` part of `f_i` at `p = (1/2, ..., 1/2)` is driven by which
//! selections of generator columns xor to column `i`. When every choice of
//! `l` distinct columns is linearly independent, all parts between the
//! linear one and degree `l` vanish and the degree-`l` coefficients are the
//! constant `(-2)^(l-1)` over the tuple family `Theta`. Without that
//! hypothesis the square-free coefficients up to degree 3 still have closed
//! forms in terms of column equality classes; both constructions live here.

use std::collections::HashMap;

use crate::algebra::BitVector;
use crate::code::{CodeError, LinearCode, MAX_CLEAN_ORDER_CAP};
use crate::rational_map::column_classes;

/// Largest order for which general (hypothesis-free) coefficients are built.
pub const MAX_GENERAL_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TaylorError {
    #[error("order {order} outside supported range 2..={max}")]
    OrderOutOfRange { order: usize, max: usize },
    #[error("columns {columns:?} are linearly dependent, so no clean order-{order} truncation exists")]
    HypothesisViolated { order: usize, columns: Vec<usize> },
    #[error("input has {got} coordinates, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// The sorted tuples `(i1 < ... < il)`, all different from `i`, whose
/// generator columns xor with column `i` to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSet {
    coordinate: usize,
    order: usize,
    tuples: Vec<Vec<usize>>,
}

impl ThetaSet {
    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Tuples in lexicographic order, 0-based.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Computes `Theta^(l)_i` for `2 <= l <= 4` by associative lookup: a map
/// from column value to positions answers order 2, and a shared pair-sum
/// table answers orders 3 and 4 without scanning all tuples.
pub fn theta(code: &LinearCode, i: usize, l: usize) -> Result<ThetaSet, TaylorError> {
    if !(2..=MAX_CLEAN_ORDER_CAP).contains(&l) {
        return Err(TaylorError::OrderOutOfRange {
            order: l,
            max: MAX_CLEAN_ORDER_CAP,
        });
    }
    assert!(i < code.n(), "coordinate {i} out of range");
    let tables = LookupTables::build(code, l >= 3);
    Ok(ThetaSet {
        coordinate: i,
        order: l,
        tuples: theta_tuples(code, &tables, i, l),
    })
}

/// Column-value and pair-sum lookup tables, built once per code and shared
/// across coordinates.
struct LookupTables {
    positions: HashMap<BitVector, Vec<usize>>,
    pair_sums: HashMap<BitVector, Vec<(usize, usize)>>,
}

impl LookupTables {
    fn build(code: &LinearCode, with_pairs: bool) -> LookupTables {
        let n = code.n();
        let mut positions: HashMap<BitVector, Vec<usize>> = HashMap::new();
        for (j, col) in code.columns().iter().enumerate() {
            positions.entry(col.clone()).or_default().push(j);
        }
        let mut pair_sums: HashMap<BitVector, Vec<(usize, usize)>> = HashMap::new();
        if with_pairs {
            for a in 0..n {
                for b in (a + 1)..n {
                    let mut sum = code.column(a).clone();
                    sum.xor_assign(code.column(b));
                    pair_sums.entry(sum).or_default().push((a, b));
                }
            }
        }
        LookupTables {
            positions,
            pair_sums,
        }
    }
}

fn theta_tuples(code: &LinearCode, tables: &LookupTables, i: usize, l: usize) -> Vec<Vec<usize>> {
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let target_of = |j: usize| {
        let mut t = code.column(i).clone();
        t.xor_assign(code.column(j));
        t
    };
    match l {
        2 => {
            // (a, b): consume b from the lookup for g_i + g_a, once via b > a.
            for a in 0..code.n() {
                if a == i {
                    continue;
                }
                if let Some(bs) = tables.positions.get(&target_of(a)) {
                    for &b in bs {
                        if b > a && b != i {
                            tuples.push(vec![a, b]);
                        }
                    }
                }
            }
        }
        3 => {
            // (a, b, c): pairs summing to g_i + g_c, once via b < c.
            for c in 0..code.n() {
                if c == i {
                    continue;
                }
                if let Some(pairs) = tables.pair_sums.get(&target_of(c)) {
                    for &(a, b) in pairs {
                        if b < c && a != i && b != i {
                            tuples.push(vec![a, b, c]);
                        }
                    }
                }
            }
        }
        4 => {
            // (a, b, c, d): join the pair table with itself, once via b < c.
            for (sum, left) in &tables.pair_sums {
                let mut target = code.column(i).clone();
                target.xor_assign(sum);
                if let Some(right) = tables.pair_sums.get(&target) {
                    for &(a, b) in left {
                        if a == i || b == i {
                            continue;
                        }
                        for &(c, d) in right {
                            if c > b && c != i && d != i {
                                tuples.push(vec![a, b, c, d]);
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!("order checked by caller"),
    }
    // Hash iteration above is unordered; canonicalize.
    tuples.sort_unstable();
    debug_assert!(tuples.windows(2).all(|w| w[0] < w[1]));
    tuples
}

/// One monomial `coeff * v_{vars[0]} * ... * v_{vars[len-1]}` of a truncated
/// map, variables 0-based, strictly increasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    coeff: f64,
    vars: [u32; 4],
    len: u8,
}

impl Term {
    fn new(coeff: f64, vars: &[usize]) -> Term {
        assert!((1..=4).contains(&vars.len()));
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        let mut packed = [0u32; 4];
        for (slot, &v) in packed.iter_mut().zip(vars) {
            *slot = v as u32;
        }
        Term {
            coeff,
            vars: packed,
            len: vars.len() as u8,
        }
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Variable indices, 0-based.
    pub fn vars(&self) -> &[u32] {
        &self.vars[..self.len as usize]
    }
}

/// A map of the form `f~_i(u) = 1/2 + sum of terms in v`, `v = u - 1/2`,
/// with square-free terms of degree up to `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMap {
    n: usize,
    order: usize,
    terms: Vec<Vec<Term>>,
}

impl TruncatedMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Terms of coordinate `i`, sorted by degree then variables.
    pub fn terms(&self, i: usize) -> &[Term] {
        &self.terms[i]
    }

    pub fn term_count(&self) -> usize {
        self.terms.iter().map(Vec::len).sum()
    }

    /// Evaluates every coordinate at `u`. Values are not clamped: a
    /// truncation may leave `[0,1]`, and thresholding does not care.
    pub fn eval(&self, u: &[f64]) -> Result<Vec<f64>, TaylorError> {
        if u.len() != self.n {
            return Err(TaylorError::LengthMismatch {
                got: u.len(),
                expected: self.n,
            });
        }
        let v: Vec<f64> = u.iter().map(|x| x - 0.5).collect();
        Ok(self
            .terms
            .iter()
            .map(|terms| {
                let mut acc = 0.5;
                for term in terms {
                    let mut prod = term.coeff;
                    for &j in term.vars() {
                        prod *= v[j as usize];
                    }
                    acc += prod;
                }
                acc
            })
            .collect())
    }

    /// Text form: header `n <n> order <l>`, then one term per line as
    /// `i <tab> coeff <tab> i1,i2,...` with 1-based indices.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {} order {}\n", self.n, self.order);
        for (i, terms) in self.terms.iter().enumerate() {
            for term in terms {
                let vars: Vec<String> = term.vars().iter().map(|v| (v + 1).to_string()).collect();
                out.push_str(&format!("{}\t{}\t{}\n", i + 1, term.coeff, vars.join(",")));
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<TruncatedMap, TaylorError> {
        let parse_err = |line: usize, msg: &str| TaylorError::Parse {
            line,
            msg: msg.to_string(),
        };
        if !text.ends_with('\n') {
            return Err(parse_err(text.lines().count(), "missing trailing newline"));
        }
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, line)| (idx + 1, line))
            .filter(|(_, line)| !line.starts_with('#'));
        let (header_no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, order) = match fields.as_slice() {
            ["n", n, "order", l] => (
                n.parse::<usize>()
                    .map_err(|_| parse_err(header_no, "bad length"))?,
                l.parse::<usize>()
                    .map_err(|_| parse_err(header_no, "bad order"))?,
            ),
            _ => return Err(parse_err(header_no, "expected header: n <n> order <l>")),
        };
        if n == 0 || !(1..=MAX_CLEAN_ORDER_CAP).contains(&order) {
            return Err(parse_err(header_no, "length or order out of range"));
        }
        let mut terms: Vec<Vec<Term>> = vec![Vec::new(); n];
        for (no, line) in lines {
            let fields: Vec<&str> = line.split('\t').collect();
            let [i, coeff, vars] = fields.as_slice() else {
                return Err(parse_err(no, "expected: i <tab> coeff <tab> vars"));
            };
            let i: usize = i
                .parse()
                .ok()
                .filter(|i| (1..=n).contains(i))
                .ok_or_else(|| parse_err(no, "coordinate out of range"))?;
            let coeff: f64 = coeff
                .parse()
                .map_err(|_| parse_err(no, "bad coefficient"))?;
            let mut parsed: Vec<usize> = Vec::new();
            for v in vars.split(',') {
                let v: usize = v
                    .parse()
                    .ok()
                    .filter(|v| (1..=n).contains(v))
                    .ok_or_else(|| parse_err(no, "variable out of range"))?;
                parsed.push(v - 1);
            }
            if parsed.len() > order {
                return Err(parse_err(no, "term degree exceeds declared order"));
            }
            if !parsed.windows(2).all(|w| w[0] < w[1]) {
                return Err(parse_err(no, "variables must strictly increase"));
            }
            terms[i - 1].push(Term::new(coeff, &parsed));
        }
        for list in &mut terms {
            sort_terms(list);
        }
        Ok(TruncatedMap { n, order, terms })
    }
}

fn sort_terms(terms: &mut [Term]) {
    terms.sort_by_key(|t| (t.len, t.vars));
}

/// The truncation `f~_i(u) = u_i + (-2)^(l-1) sum over Theta^(l)_i of
/// v_{i1} ... v_{il}`, valid when every `l` distinct generator columns are
/// independent. Fails with a dependent column witness otherwise.
pub fn clean_truncated_map(code: &LinearCode, l: usize) -> Result<TruncatedMap, TaylorError> {
    if !(2..=MAX_CLEAN_ORDER_CAP).contains(&l) {
        return Err(TaylorError::OrderOutOfRange {
            order: l,
            max: MAX_CLEAN_ORDER_CAP,
        });
    }
    let clean = code.max_clean_order();
    if clean.order < l {
        let witness = code
            .dependent_column_set(clean.order + 1)
            .expect("a dependent set of size order+1 exists by maximality");
        return Err(TaylorError::HypothesisViolated {
            order: l,
            columns: witness.iter().map(|&c| c + 1).collect(),
        });
    }
    let tables = LookupTables::build(code, l >= 3);
    let coeff = (-2f64).powi(l as i32 - 1);
    let terms = (0..code.n())
        .map(|i| {
            let mut list = vec![Term::new(1.0, &[i])];
            for tuple in theta_tuples(code, &tables, i, l) {
                list.push(Term::new(coeff, &tuple));
            }
            sort_terms(&mut list);
            list
        })
        .collect();
    Ok(TruncatedMap {
        n: code.n(),
        order: l,
        terms,
    })
}

/// Exact square-free Taylor coefficients of the map at the center up to
/// `max_order <= 3`, with no independence hypothesis. The coefficients
/// depend only on column combinatorics:
///
/// * degree 1: `v_j` with coefficient 1 for every `j` with `g_j = g_i`;
/// * degree 2, `a < b`: coefficient -2 when `g_a + g_b = g_i`, else 0;
/// * degree 3, `a < b < c` with `g_a + g_b + g_c = g_i`: coefficient
///   `4 (1 - sigma)` where `sigma` counts the pairings
///   `{g_a = g_i, g_b = g_c}`, `{g_b = g_i, g_a = g_c}`,
///   `{g_c = g_i, g_a = g_b}` (so 4, 0 or -8); all other triples are 0.
///
/// Zero coefficients are not stored. Degree-2 and -3 tuples never need to
/// avoid `i`: a tuple containing `i` survives only through duplicate
/// columns, which the rules above handle.
pub fn general_taylor(code: &LinearCode, max_order: usize) -> Result<TruncatedMap, TaylorError> {
    if !(1..=MAX_GENERAL_ORDER).contains(&max_order) {
        return Err(TaylorError::OrderOutOfRange {
            order: max_order,
            max: MAX_GENERAL_ORDER,
        });
    }
    let n = code.n();
    let classes = column_classes(code);
    let mut class_of = vec![0usize; n];
    for (id, class) in classes.iter().enumerate() {
        for &j in class {
            class_of[j] = id;
        }
    }
    let tables = LookupTables::build(code, max_order >= 3);

    let terms = (0..n)
        .map(|i| {
            let mut list: Vec<Term> = classes[class_of[i]]
                .iter()
                .map(|&j| Term::new(1.0, &[j]))
                .collect();
            let target_of = |j: usize| {
                let mut t = code.column(i).clone();
                t.xor_assign(code.column(j));
                t
            };
            if max_order >= 2 {
                // g_a + g_b = g_i excludes a = i and b = i on its own
                // (that would need a zero column).
                for a in 0..n {
                    if let Some(bs) = tables.positions.get(&target_of(a)) {
                        for &b in bs {
                            if b > a {
                                list.push(Term::new(-2.0, &[a, b]));
                            }
                        }
                    }
                }
            }
            if max_order >= 3 {
                for c in 0..n {
                    if let Some(pairs) = tables.pair_sums.get(&target_of(c)) {
                        for &(a, b) in pairs {
                            if b >= c {
                                continue;
                            }
                            let eq = |x: usize, y: usize| class_of[x] == class_of[y];
                            let sigma = (eq(a, i) && eq(b, c)) as i32
                                + (eq(b, i) && eq(a, c)) as i32
                                + (eq(c, i) && eq(a, b)) as i32;
                            if sigma != 1 {
                                list.push(Term::new(4.0 * (1 - sigma) as f64, &[a, b, c]));
                            }
                        }
                    }
                }
            }
            sort_terms(&mut list);
            list
        })
        .collect();
    Ok(TruncatedMap {
        n,
        order: max_order,
        terms,
    })
}
