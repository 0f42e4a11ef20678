use std::collections::BTreeMap;
use std::fmt;

use super::{ExactError, Scalar};

/// Sparse exact matrix, stored column by column with zero entries elided.
///
/// Column storage makes `A * B` and kernel extraction cheap for the very
/// sparse structure maps this crate deals with.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    columns: Vec<BTreeMap<usize, Scalar>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            columns: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Build from dense rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Build from `(row, col, value)` triples; later triples overwrite earlier ones.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, ExactError> {
        let mut m = Matrix::zeros(rows, cols);
        for (i, j, x) in entries {
            if i >= rows || j >= cols {
                return Err(ExactError::IndexOutOfRange {
                    index: vec![i, j],
                    dims: vec![rows, cols],
                });
            }
            m.set(i, j, x);
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Column vector.
    pub fn column_vector(v: &[Scalar]) -> Self {
        Matrix::from_columns(v.len(), &[v.to_vec()])
    }

    /// Row vector.
    pub fn row_vector(v: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(1, v.len());
        for (j, x) in v.iter().enumerate() {
            m.set(0, j, x.clone());
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to basis vector `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Matrix::zeros(perm.len(), perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, Scalar::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        if x.is_zero() {
            self.columns[j].remove(&i);
        } else {
            self.columns[j].insert(i, x);
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: &Scalar) {
        if x.is_zero() {
            return;
        }
        let col = &mut self.columns[j];
        let entry = col.entry(i).or_default();
        *entry += x;
        if entry.is_zero() {
            col.remove(&i);
        }
    }

    /// Nonzero entries of column `j`, ordered by row.
    pub fn column_entries(&self, j: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.columns[j].iter().map(|(&i, x)| (i, x))
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.rows];
        for (i, x) in self.column_entries(j) {
            v[i] = x.clone();
        }
        v
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// All nonzero entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out: Vec<_> = (0..self.cols)
            .flat_map(|j| self.column_entries(j).map(move |(i, x)| (i, j, x.clone())))
            .collect();
        out.sort_by_key(|&(i, j, _)| (i, j));
        out
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for (i, x) in self.column_entries(j) {
                t.set(j, i, x.clone());
            }
        }
        t
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Matrix {
        let mut m = self.clone();
        for col in &mut m.columns {
            for x in col.values_mut() {
                *x = x.conj();
            }
        }
        m
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        if s.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let mut m = self.clone();
        for col in &mut m.columns {
            for x in col.values_mut() {
                *x = &*x * s;
            }
        }
        m
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        self.check_same_shape(other)?;
        let mut m = self.clone();
        for j in 0..other.cols {
            for (i, x) in other.column_entries(j) {
                m.add_at(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        self.try_add(&other.scale(&-Scalar::one()))
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, b) in other.column_entries(j) {
                for (i, a) in self.column_entries(k) {
                    *acc.entry(i).or_default() += &(a * b);
                }
            }
            acc.retain(|_, x| !x.is_zero());
            out.columns[j] = acc;
        }
        Ok(out)
    }

    /// `self * other`; panics on shape mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).expect("matrix shapes must agree")
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.try_add(other).expect("matrix shapes must agree")
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.try_sub(other).expect("matrix shapes must agree")
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![Scalar::zero(); self.rows];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, a) in self.column_entries(j) {
                out[i] += &(a * vj);
            }
        }
        out
    }

    /// Kronecker product; index `(i1, i2)` of the result is `i1 * other.rows + i2`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for j1 in 0..self.cols {
            for (i1, a) in self.column_entries(j1) {
                for j2 in 0..other.cols {
                    for (i2, b) in other.column_entries(j2) {
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, a * b);
                    }
                }
            }
        }
        out
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        if self.rows != other.rows {
            return Err(ExactError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut m = self.clone();
        m.cols += other.cols;
        m.columns.extend(other.columns.iter().cloned());
        Ok(m)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, ExactError> {
        if self.cols != other.cols {
            return Err(ExactError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols);
        for j in 0..self.cols {
            m.columns[j] = self.columns[j].clone();
            for (i, x) in other.column_entries(j) {
                m.columns[j].insert(self.rows + i, x.clone());
            }
        }
        Ok(m)
    }

    /// Sub-block `rows r0..r0+nr`, `cols c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Matrix {
        let mut m = Matrix::zeros(nr, nc);
        for j in 0..nc {
            for (i, x) in self.columns[c0 + j].range(r0..r0 + nr) {
                m.set(i - r0, j, x.clone());
            }
        }
        m
    }

    /// Write `b` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for j in 0..b.cols {
            for (i, x) in b.column_entries(j) {
                self.set(r0 + i, c0 + j, x.clone());
            }
        }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<(), ExactError> {
        if self.shape() != other.shape() {
            return Err(ExactError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    /// Reduced row echelon form with pivot columns.
    ///
    /// Pivot rule: columns are scanned left to right and the first remaining
    /// row with a nonzero entry in that column is taken, so results are
    /// reproducible run to run.
    pub fn rref(&self) -> (Vec<BTreeMap<usize, Scalar>>, Vec<usize>) {
        let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); self.rows];
        for j in 0..self.cols {
            for (i, x) in self.column_entries(j) {
                rows[i].insert(j, x.clone());
            }
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].contains_key(&c)) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][&c].inv().expect("pivot is nonzero");
            for x in rows[r].values_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                let Some(factor) = row.get(&c).cloned() else {
                    continue;
                };
                for (k, x) in &pivot_row {
                    let e = row.entry(*k).or_default();
                    *e -= &(&factor * x);
                    if e.is_zero() {
                        row.remove(k);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(pivots.len());
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, returned as the columns of a `cols x nullity` matrix.
    ///
    /// One basis vector per free column `f`, with a `1` in position `f`.
    pub fn kernel(&self) -> Matrix {
        let (rows, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, Scalar::one());
            for (r, &p) in pivots.iter().enumerate() {
                if let Some(x) = rows[r].get(&f) {
                    basis.set(p, k, -x);
                }
            }
        }
        basis
    }

    /// One solution of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, ExactError> {
        if b.len() != self.rows {
            return Err(ExactError::LengthMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let aug = self.hstack(&Matrix::column_vector(b))?;
        let (rows, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r].get(&self.cols).cloned().unwrap_or_default();
        }
        Ok(Some(x))
    }

    /// Solve `self * X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>, ExactError> {
        let mut cols = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            match self.solve(&b.column(j))? {
                Some(x) => cols.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_columns(self.cols, &cols)))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let aug = self.hstack(&Matrix::identity(self.rows)).ok()?;
        let (rows, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots[self.rows - 1] >= self.cols {
            return None;
        }
        let mut inv = Matrix::zeros(self.rows, self.rows);
        for (r, row) in rows.iter().enumerate() {
            for (&c, x) in row.range(self.cols..) {
                inv.set(r, c - self.cols, x.clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
