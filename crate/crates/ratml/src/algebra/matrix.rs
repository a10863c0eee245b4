//! Row-major matrices over F2 with elimination, nullspace, and a plain
//! text interchange format.

use std::fmt;

use super::bits::BitVector;
use super::AlgebraError;

/// A matrix over F2 stored as one `BitVector` per row. `rows == 0` is legal
/// (the nullspace of a full-rank square matrix); `cols >= 1` always.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: (0..rows).map(|_| BitVector::zeros(cols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self, AlgebraError> {
        let cols = match rows.first() {
            Some(r) => r.len(),
            None => {
                return Err(AlgebraError::DimensionMismatch(
                    "cannot infer column count from zero rows".into(),
                ))
            }
        };
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(AlgebraError::DimensionMismatch(format!(
                "row {bad} has {} columns, expected {cols}",
                rows[bad].len()
            )));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix from compact `0`/`1` row strings, e.g. `["110", "011"]`.
    pub fn from_strings(rows: &[&str]) -> Result<Self, AlgebraError> {
        let parsed = rows
            .iter()
            .map(|s| BitVector::parse_compact(s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.data.iter()
    }

    /// Column `c` as a vector of length `rows`. Panics when `rows == 0`.
    pub fn column(&self, c: usize) -> BitVector {
        assert!(self.rows > 0, "column of an empty matrix");
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Xor of the rows selected by the set bits of `selector`
    /// (`selector.len() == rows`), i.e. the product `selector * M`.
    pub fn xor_selected_rows(&self, selector: &BitVector) -> BitVector {
        assert_eq!(selector.len(), self.rows, "selector length != row count");
        let mut acc = BitVector::zeros(self.cols);
        for r in selector.ones() {
            acc.xor_assign(&self.data[r]);
        }
        acc
    }

    /// Xor of the columns listed in `indices` (0-based, repeats allowed).
    pub fn column_sum(&self, indices: &[usize]) -> Result<BitVector, AlgebraError> {
        assert!(self.rows > 0, "column_sum of an empty matrix");
        let mut acc = BitVector::zeros(self.rows);
        for &c in indices {
            if c >= self.cols {
                return Err(AlgebraError::IndexOutOfRange {
                    index: c,
                    len: self.cols,
                });
            }
            for r in 0..self.rows {
                if self.get(r, c) {
                    acc.flip(r);
                }
            }
        }
        Ok(acc)
    }

    /// `self * other^T`: entry `(i, j)` is the inner product of row `i` of
    /// `self` with row `j` of `other`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "inner dimensions differ");
        assert!(other.rows > 0, "mul_transpose by an empty matrix");
        let mut out = BitMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                if self.data[i].dot(&other.data[j]) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    /// Reduced row echelon form together with the pivot column of each
    /// surviving nonzero row, pivots strictly increasing.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            let Some(pivot) = (next_row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.data.swap(next_row, pivot);
            let pivot_row = m.data[next_row].clone();
            for r in 0..m.rows {
                if r != next_row && m.get(r, col) {
                    m.data[r].xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows of `self` and `other` span the same subspace.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let (a, pa) = self.rref();
        let (b, pb) = other.rref();
        pa == pb && a.data[..pa.len()] == b.data[..pb.len()]
    }

    /// Basis of `{ x : M x^T = 0 }`, one row per free column of the reduced
    /// echelon form, free columns taken in ascending order. Requires the rows
    /// of `M` to be linearly independent.
    pub fn nullspace_basis(&self) -> Result<BitMatrix, AlgebraError> {
        let (rref, pivots) = self.rref();
        if pivots.len() < self.rows {
            // The first all-zero row of the RREF witnesses the dependency.
            return Err(AlgebraError::RankDeficient { row: pivots.len() });
        }
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (row, &p) in pivots.iter().enumerate() {
                if rref.get(row, free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        Ok(BitMatrix {
            rows: basis.len(),
            cols: self.cols,
            data: basis,
        })
    }

    /// Renders the interchange format: a `<rows> <cols>` header line, then one
    /// line of space-separated bits per row. Ends with a newline.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for row in &self.data {
            let mut line = String::with_capacity(2 * self.cols);
            for c in 0..self.cols {
                if c > 0 {
                    line.push(' ');
                }
                line.push(if row.get(c) { '1' } else { '0' });
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses the interchange format. Lines whose first non-blank character
    /// is `#` are comments; the final line must end with a newline.
    pub fn parse_text(text: &str) -> Result<Self, AlgebraError> {
        if !text.ends_with('\n') {
            return Err(AlgebraError::Parse {
                line: text.lines().count(),
                msg: "missing trailing newline".into(),
            });
        }
        let mut content = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = content.next().ok_or(AlgebraError::Parse {
            line: 1,
            msg: "empty matrix file".into(),
        })?;
        let mut dims = header.split_whitespace().map(|t| {
            t.parse::<usize>().map_err(|_| AlgebraError::Parse {
                line: header_line,
                msg: format!("bad dimension {t:?}"),
            })
        });
        let rows = dims.next().transpose()?.ok_or(AlgebraError::Parse {
            line: header_line,
            msg: "header needs `<rows> <cols>`".into(),
        })?;
        let cols = dims.next().transpose()?.ok_or(AlgebraError::Parse {
            line: header_line,
            msg: "header needs `<rows> <cols>`".into(),
        })?;
        if dims.next().is_some() {
            return Err(AlgebraError::Parse {
                line: header_line,
                msg: "header has trailing tokens".into(),
            });
        }
        if rows == 0 || cols == 0 || cols > super::bits::MAX_BITS {
            return Err(AlgebraError::Parse {
                line: header_line,
                msg: format!("unsupported dimensions {rows} x {cols}"),
            });
        }

        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            let (line_no, line) = content.next().ok_or(AlgebraError::Parse {
                line: text.lines().count(),
                msg: format!("expected {rows} rows, found {}", data.len()),
            })?;
            let mut row = BitVector::zeros(cols);
            let mut count = 0;
            for tok in line.split_whitespace() {
                match tok {
                    "0" | "1" => {
                        if count == cols {
                            return Err(AlgebraError::Parse {
                                line: line_no,
                                msg: format!("row has more than {cols} entries"),
                            });
                        }
                        if tok == "1" {
                            row.set(count, true);
                        }
                        count += 1;
                    }
                    other => {
                        return Err(AlgebraError::Parse {
                            line: line_no,
                            msg: format!("unexpected token {other:?}"),
                        })
                    }
                }
            }
            if count != cols {
                return Err(AlgebraError::Parse {
                    line: line_no,
                    msg: format!("row has {count} entries, expected {cols}"),
                });
            }
            data.push(row);
        }
        if let Some((line_no, _)) = content.next() {
            return Err(AlgebraError::Parse {
                line: line_no,
                msg: "trailing content after last row".into(),
            });
        }
        Ok(BitMatrix { rows, cols, data })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}
