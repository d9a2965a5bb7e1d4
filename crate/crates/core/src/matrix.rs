//! Exact integer matrices: compressed sparse columns and a small dense type.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::int::Int;

/// Sparse integer matrix in compressed-column form. Within a column the row
/// indices are strictly increasing and no stored value is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<Int>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(n, (0..n).map(|i| vec![(i as u32, Int::ONE)]).collect())
    }

    /// Build from per-column entry lists; duplicates are summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, Int)>>) -> Self {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for mut col in columns {
            col.sort_by_key(|e| e.0);
            let mut iter = col.into_iter().peekable();
            while let Some((r, mut v)) = iter.next() {
                assert!((r as usize) < rows, "row index {r} out of bounds");
                while let Some((r2, _)) = iter.peek() {
                    if *r2 != r {
                        break;
                    }
                    v += &iter.next().unwrap().1;
                }
                if !v.is_zero() {
                    row_idx.push(r);
                    vals.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        SparseIntMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            vals,
        }
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Int)>) -> Self {
        let mut columns: Vec<Vec<(u32, Int)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(c < cols, "column index {c} out of bounds");
            columns[c].push((r as u32, v));
        }
        Self::from_columns(rows, columns)
    }

    pub fn from_dense(d: &DenseMatrix) -> Self {
        Self::from_triplets(
            d.rows(),
            d.cols(),
            (0..d.rows()).flat_map(|r| (0..d.cols()).map(move |c| (r, c))).filter_map(|(r, c)| {
                let v = d.get(r, c);
                (!v.is_zero()).then(|| (r, c, v.clone()))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, &Int)> + '_ {
        let span = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[span.clone()]
            .iter()
            .zip(&self.vals[span])
            .map(|(&r, v)| (r as usize, v))
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        let span = self.col_ptr[c]..self.col_ptr[c + 1];
        match self.row_idx[span.clone()].binary_search(&(r as u32)) {
            Ok(i) => self.vals[span.start + i].clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// Entries `(row, col, value)` sorted by `(col, row)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        (0..self.cols).flat_map(move |c| self.column(c).map(move |(r, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(u32, Int)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.iter() {
            columns[r].push((c as u32, v.clone()));
        }
        Self::from_columns(self.cols, columns)
    }

    /// Row-major view: for each row, the `(col, value)` pairs in column order.
    pub fn row_lists(&self) -> Vec<Vec<(u32, Int)>> {
        let mut rows: Vec<Vec<(u32, Int)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.iter() {
            rows[r].push((c as u32, v.clone()));
        }
        rows
    }

    pub fn mul(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut acc: Vec<Int> = vec![Int::ZERO; self.rows];
        let mut touched: Vec<u32> = Vec::new();
        let mut columns = Vec::with_capacity(rhs.cols);
        for j in 0..rhs.cols {
            for (k, b) in rhs.column(j) {
                for (i, a) in self.column(k) {
                    if acc[i].is_zero() {
                        touched.push(i as u32);
                    }
                    acc[i] += &(a * b);
                }
            }
            let mut col = Vec::with_capacity(touched.len());
            for &i in &touched {
                let v = std::mem::take(&mut acc[i as usize]);
                if !v.is_zero() {
                    col.push((i, v));
                }
            }
            touched.clear();
            columns.push(col);
        }
        Self::from_columns(self.rows, columns)
    }

    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Int::ZERO; self.rows];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (i, a) in self.column(j) {
                out[i] += &(a * xj);
            }
        }
        out
    }

    /// Entries replaced by their residues in `[0, m)`.
    pub fn reduce_mod(&self, m: u64) -> SparseIntMatrix {
        assert!(m > 0);
        let columns = (0..self.cols)
            .map(|c| {
                self.column(c)
                    .map(|(r, v)| (r as u32, Int::from(v.rem_u64(m))))
                    .collect()
            })
            .collect();
        Self::from_columns(self.rows, columns)
    }

    pub fn scale(&self, k: &Int) -> SparseIntMatrix {
        let columns = (0..self.cols)
            .map(|c| self.column(c).map(|(r, v)| (r as u32, v * k)).collect())
            .collect();
        Self::from_columns(self.rows, columns)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            d.set(r, c, v.clone());
        }
        d
    }

    pub fn max_abs_entry(&self) -> Int {
        self.vals.iter().map(Int::abs).max().unwrap_or(Int::ZERO)
    }
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseIntMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())
    }
}

/// The dump format: `rows cols nnz`, then one `r c v` line per entry.
impl fmt::Display for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.iter() {
            writeln!(f, "{r} {c} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for SparseIntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix dump".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("header `{header}`: {e}"))))
            .collect::<Result<_>>()?;
        let [rows, cols, nnz] = dims[..] else {
            return Err(Error::Parse(format!("header `{header}` needs three fields")));
        };
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = fields[..] else {
                return Err(Error::Parse(format!("entry line `{line}`")));
            };
            let r: usize = r.parse().map_err(|e| Error::Parse(format!("row `{r}`: {e}")))?;
            let c: usize = c.parse().map_err(|e| Error::Parse(format!("col `{c}`: {e}")))?;
            let v: Int = v.parse().map_err(|e| Error::Parse(format!("value `{v}`: {e}")))?;
            if r >= rows || c >= cols {
                return Err(Error::Parse(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            triplets.push((r, c, v));
        }
        if triplets.len() != nnz {
            return Err(Error::Parse(format!("header promises {nnz} entries, found {}", triplets.len())));
        }
        Ok(Self::from_triplets(rows, cols, triplets))
    }
}

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![Int::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::ONE);
        }
        m
    }

    pub fn from_rows<T: Into<Int> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] -= q * row[src]`
    pub fn row_sub_mul(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if !s.is_zero() {
                let v = self.data[dst * self.cols + c].sub_mul(q, s);
                self.data[dst * self.cols + c] = v;
            }
        }
    }

    /// `col[dst] -= q * col[src]`
    pub fn col_sub_mul(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let v = self.data[r * self.cols + dst].sub_mul(q, s);
                self.data[r * self.cols + dst] = v;
            }
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = Int::ONE;
        let mut prev = Int::ONE;
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::ZERO,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    a.set(i, j, v.div_exact(&prev));
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
