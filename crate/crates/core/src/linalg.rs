//! Dense linear algebra over a [`FieldSpec`].
//!
//! Entries are raw field indices; every matrix and vector carries its field so
//! mixed-field operations are rejected instead of silently miscomputed.

use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFq {
    field: FieldSpec,
    data: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFq {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    /// row-major
    data: Vec<u32>,
}

fn same_field(a: &FieldSpec, b: &FieldSpec) -> Result<()> {
    if a != b {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

impl VectorFq {
    pub fn new(field: &FieldSpec, data: Vec<u32>) -> Result<Self> {
        for &x in &data {
            field.check(x)?;
        }
        Ok(Self {
            field: field.clone(),
            data,
        })
    }

    pub(crate) fn from_raw(field: &FieldSpec, data: Vec<u32>) -> Self {
        debug_assert!(data.iter().all(|&x| field.contains(x)));
        Self {
            field: field.clone(),
            data,
        }
    }

    pub fn zeros(field: &FieldSpec, len: usize) -> Self {
        Self::from_raw(field, vec![0; len])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(field: &FieldSpec, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, len);
        v.data[i] = 1;
        v
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.data
    }

    pub fn get(&self, i: usize) -> u32 {
        self.data[i]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        weight(&self.data)
    }

    pub fn support(&self) -> Vec<usize> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&self, other: &VectorFq) -> Result<VectorFq> {
        same_field(&self.field, &other.field)?;
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                op: "vector add",
                detail: format!("{} vs {}", self.len(), other.len()),
            });
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Self::from_raw(f, data))
    }

    pub fn scale(&self, c: u32) -> VectorFq {
        let f = &self.field;
        Self::from_raw(f, self.data.iter().map(|&a| f.mul(c, a)).collect())
    }

    /// `self += c * other` in place; lengths and fields must agree.
    pub(crate) fn axpy(&mut self, c: u32, other: &[u32]) {
        let f = &self.field;
        for (a, &b) in self.data.iter_mut().zip(other) {
            *a = f.add(*a, f.mul(c, b));
        }
    }

    /// Row-major Kronecker product: `out[i * other.len() + j] = self[i] * other[j]`.
    pub fn kron(&self, other: &VectorFq) -> Result<VectorFq> {
        same_field(&self.field, &other.field)?;
        let f = &self.field;
        let mut data = Vec::with_capacity(self.len() * other.len());
        for &a in &self.data {
            for &b in &other.data {
                data.push(f.mul(a, b));
            }
        }
        Ok(Self::from_raw(f, data))
    }

    /// Outer product `self * other^T`.
    pub fn outer(&self, other: &VectorFq) -> Result<MatrixFq> {
        let v = self.kron(other)?;
        Ok(MatrixFq::from_raw(
            &self.field,
            self.len(),
            other.len(),
            v.data,
        ))
    }
}

pub fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

impl MatrixFq {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "matrix construction",
                detail: format!("{} entries for a {rows}x{cols} matrix", data.len()),
            });
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Self::from_raw(field, rows, cols, data))
    }

    pub(crate) fn from_raw(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                op: "matrix from rows",
                detail: "ragged rows".into(),
            });
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_row_vectors(field: &FieldSpec, cols: usize, rows: &[VectorFq]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            same_field(field, &r.field)?;
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "matrix from vectors",
                    detail: format!("row of length {} in a {cols}-column matrix", r.len()),
                });
            }
            data.extend_from_slice(&r.data);
        }
        Ok(Self::from_raw(field, rows.len(), cols, data))
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Self::from_raw(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) -> Result<()> {
        self.field.check(v)?;
        self.data[i * self.cols + j] = v;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> VectorFq {
        VectorFq::from_raw(&self.field, self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> VectorFq {
        VectorFq::from_raw(
            &self.field,
            (0..self.rows).map(|i| self.get(i, j)).collect(),
        )
    }

    /// Row-major flattening.
    pub fn flatten(&self) -> VectorFq {
        VectorFq::from_raw(&self.field, self.data.clone())
    }

    pub fn weight(&self) -> usize {
        weight(&self.data)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> MatrixFq {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self::from_raw(&self.field, self.cols, self.rows, data)
    }

    pub fn matmul(&self, other: &MatrixFq) -> Result<MatrixFq> {
        same_field(&self.field, &other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                detail: format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        let f = &self.field;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for (o, &b) in acc.iter_mut().zip(other.row(k)) {
                    *o = f.add(*o, f.mul(a, b));
                }
            }
        }
        Ok(Self::from_raw(f, self.rows, other.cols, out))
    }

    pub fn mul_vec(&self, v: &VectorFq) -> Result<VectorFq> {
        same_field(&self.field, &v.field)?;
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                op: "matrix-vector product",
                detail: format!("{}x{} times length {}", self.rows, self.cols, v.len()),
            });
        }
        let f = &self.field;
        let data = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(&v.data)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect();
        Ok(VectorFq::from_raw(f, data))
    }

    /// Standard Kronecker product.
    pub fn kron(&self, other: &MatrixFq) -> Result<MatrixFq> {
        same_field(&self.field, &other.field)?;
        let f = &self.field;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![0u32; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    let base = (i * other.rows + k) * cols + j * other.cols;
                    for (l, &b) in other.row(k).iter().enumerate() {
                        data[base + l] = f.mul(a, b);
                    }
                }
            }
        }
        Ok(Self::from_raw(f, rows, cols, data))
    }

    /// Reduced row echelon form and pivot columns. Pivots are chosen
    /// leftmost column first, topmost available row first.
    pub fn rref(&self) -> (MatrixFq, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            let cols = m.cols;
            for x in &mut m.data[r * cols..(r + 1) * cols] {
                *x = f.mul(*x, inv);
            }
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for (x, &p) in m.data[i * cols..(i + 1) * cols].iter_mut().zip(&pivot_row) {
                    *x = f.add(*x, f.mul(neg, p));
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column in increasing
    /// order, each with a 1 at its free column and 0 at the other free columns.
    pub fn nullspace_basis(&self) -> Vec<VectorFq> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(r.get(row, free));
                }
                VectorFq::from_raw(f, v)
            })
            .collect()
    }
}

/// Rank of the matrix whose rows are `vectors` (all of length `len`).
pub fn rank_of(field: &FieldSpec, len: usize, vectors: &[VectorFq]) -> Result<usize> {
    Ok(MatrixFq::from_row_vectors(field, len, vectors)?.rank())
}

pub fn matmul(a: &MatrixFq, b: &MatrixFq) -> Result<MatrixFq> {
    a.matmul(b)
}

pub fn rank(m: &MatrixFq) -> usize {
    m.rank()
}

pub fn nullspace_basis(a: &MatrixFq) -> Vec<VectorFq> {
    a.nullspace_basis()
}

pub fn kron(a: &MatrixFq, b: &MatrixFq) -> Result<MatrixFq> {
    a.kron(b)
}

/// Position of `X[i][j]` (`i <= j`) among the upper-triangle unknowns, scanned
/// row-major.
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

/// Evaluates `Q(X) = sum_{i,j} Q[i,j] X[i,j]`.
pub fn quad_form(q: &MatrixFq, x: &MatrixFq) -> Result<u32> {
    same_field(&q.field, &x.field)?;
    if q.rows != x.rows || q.cols != x.cols {
        return Err(Error::DimensionMismatch {
            op: "quadratic form",
            detail: format!("{}x{} vs {}x{}", q.rows, q.cols, x.rows, x.cols),
        });
    }
    let f = &q.field;
    Ok(q.data
        .iter()
        .zip(&x.data)
        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
}

/// Basis of the space of symmetric `n x n` matrices `X` with `Q(X) = 0` for
/// every `Q` in `qs`.
///
/// The unknowns are the upper-triangle entries `X[i][j]`, `i <= j`, in
/// row-major order; an off-diagonal unknown picks up `Q[i,j] + Q[j,i]`.
pub fn symmetric_solution_basis(
    field: &FieldSpec,
    qs: &[MatrixFq],
    n: usize,
) -> Result<Vec<MatrixFq>> {
    let unknowns = n * (n + 1) / 2;
    let f = field;
    let mut constraints = Vec::with_capacity(qs.len() * unknowns);
    for q in qs {
        same_field(field, &q.field)?;
        if q.rows != n || q.cols != n {
            return Err(Error::DimensionMismatch {
                op: "symmetric_solution_basis",
                detail: format!("{}x{} coefficient matrix for {n} variables", q.rows, q.cols),
            });
        }
        for i in 0..n {
            for j in i..n {
                let c = if i == j {
                    q.get(i, i)
                } else {
                    f.add(q.get(i, j), q.get(j, i))
                };
                constraints.push(c);
            }
        }
    }
    let basis = if qs.is_empty() {
        (0..unknowns)
            .map(|k| VectorFq::unit(field, unknowns, k))
            .collect()
    } else {
        MatrixFq::from_raw(field, qs.len(), unknowns, constraints).nullspace_basis()
    };
    Ok(basis
        .iter()
        .map(|v| symmetric_from_upper(field, n, v.as_slice()))
        .collect())
}

pub(crate) fn symmetric_from_upper(field: &FieldSpec, n: usize, upper: &[u32]) -> MatrixFq {
    let mut m = MatrixFq::zeros(field, n, n);
    for i in 0..n {
        for j in i..n {
            let v = upper[upper_index(n, i, j)];
            m.data[i * n + j] = v;
            m.data[j * n + i] = v;
        }
    }
    m
}
