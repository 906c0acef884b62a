use std::fmt;

use serde::{Deserialize, Serialize};

use super::{dim_err, LinalgError, Subspace};
use crate::field::{Field, FieldError, Scalar};

/// Dense row-major matrix over a field. Zero-row and zero-column matrices
/// are allowed so that spanning sets of the zero subspace need no special
/// casing.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]", self.field)?;
        f.debug_list().entries(self.row_strings()).finish()
    }
}

/// JSON shape `{"field": <descriptor>, "rows": [[scalar, ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixJson {
    pub field: String,
    pub rows: Vec<Vec<String>>,
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return dim_err(format!("{} entries for a {rows}x{cols} matrix", data.len()));
        }
        if data.iter().any(|x| !field.contains(x)) {
            return Err(LinalgError::MixedContext);
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub(crate) fn from_parts(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return dim_err("ragged rows");
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| field.from_i64(x))).collect();
        Matrix { field: field.clone(), rows: r, cols: c, data }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn diagonal(field: &Field, diag: &[Scalar]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    /// `n x 1` column matrix.
    pub fn column(field: &Field, v: &[Scalar]) -> Self {
        Matrix { field: field.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    fn same_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            Err(LinalgError::MixedContext)
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return dim_err(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let f = &self.field;
        let mut data = vec![f.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        let slot = &mut data[i * other.cols + j];
                        *slot = f.add(slot, &f.mul(a, b));
                    }
                }
            }
        }
        Ok(Matrix::from_parts(f, self.rows, other.cols, data))
    }

    fn zip(&self, other: &Matrix, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return dim_err("shapes differ");
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Ok(Matrix::from_parts(&self.field, self.rows, self.cols, data))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|x| self.field.mul(x, c))
    }

    /// Applies `f` to every entry, keeping the field.
    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix::from_parts(&self.field, self.rows, self.cols, self.data.iter().map(f).collect())
    }

    /// Applies `f` to every entry, landing in `target`.
    pub fn map_into(
        &self,
        target: &Field,
        f: impl Fn(&Scalar) -> Result<Scalar, FieldError>,
    ) -> Result<Matrix, LinalgError> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Matrix::new(target, self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::from_parts(&self.field, self.cols, self.rows, data)
    }

    pub fn mat_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return dim_err(format!("vector of length {} for {} columns", v.len(), self.cols));
        }
        if v.iter().any(|x| !self.field.contains(x)) {
            return Err(LinalgError::MixedContext);
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.field.is_zero(self.get(i, j))))
    }

    /// Reduced row echelon form and pivot columns (first-nonzero pivoting).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i * cols + c])) else { continue };
            if p != r {
                for j in 0..cols {
                    m.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&m[r * cols + c]).unwrap();
            for j in c..cols {
                m[r * cols + j] = f.mul(&m[r * cols + j], &inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = m[i * cols + c].clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..cols {
                    let t = f.mul(&factor, &m[r * cols + j]);
                    m[i * cols + j] = f.sub(&m[i * cols + j], &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Matrix::from_parts(f, rows, cols, m), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right null space `{v : self · v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, fc));
            }
            basis.push(v);
        }
        Subspace::from_vectors(f, self.cols, &basis).expect("kernel vectors have matching length")
    }

    /// Determinant by elimination.
    pub fn det(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(&m[i * n + c])) else { return Ok(f.zero()) };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let pivot = m[c * n + c].clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).unwrap();
            for i in (c + 1)..n {
                let factor = f.mul(&m[i * n + c], &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let t = f.mul(&factor, &m[c * n + j]);
                    m[i * n + j] = f.sub(&m[i * n + j], &t);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend_from_slice(&r.row(i)[n..]);
        }
        Ok(Matrix::from_parts(&self.field, n, n, data))
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Matrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::from_parts(&self.field, self.rows - 1, self.cols - 1, data)
    }

    /// Determinant and classical adjugate, `a · adj = det · I`.
    pub fn det_adj(&self) -> Result<(Scalar, Matrix), LinalgError> {
        let det = self.det()?;
        let f = &self.field;
        let n = self.rows;
        if n == 0 {
            return Ok((f.one(), Matrix::zeros(f, 0, 0)));
        }
        if n == 1 {
            return Ok((det, Matrix::identity(f, 1)));
        }
        if !f.is_zero(&det) {
            return Ok((det.clone(), self.inverse()?.scale(&det)));
        }
        let mut adj = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(j, i).det()?;
                adj.set(i, j, if (i + j) % 2 == 0 { m } else { f.neg(&m) });
            }
        }
        Ok((det, adj))
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return dim_err("hstack with different row counts");
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Matrix::from_parts(&self.field, self.rows, self.cols + other.cols, data))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return dim_err("vstack with different column counts");
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix::from_parts(&self.field, self.rows + other.rows, self.cols, data))
    }

    /// `M[n]`: block `(i, j)` is `M_ij · I_n`.
    pub fn blowup(&self, n: usize) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let d = self.rows;
        let mut out = Matrix::zeros(&self.field, d * n, d * n);
        for i in 0..d {
            for j in 0..d {
                for k in 0..n {
                    out.set(i * n + k, j * n + k, self.get(i, j).clone());
                }
            }
        }
        Ok(out)
    }

    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Result<Matrix, LinalgError> {
        if blocks.iter().any(|b| b.field() != field) {
            return Err(LinalgError::MixedContext);
        }
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// Square block `(bi, bj)` of size `size`.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> Matrix {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(self.get(bi * size + i, bj * size + j).clone());
            }
        }
        Matrix::from_parts(&self.field, size, size, data)
    }

    fn row_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| self.field.format(x)).collect()).collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { field: self.field.to_string(), rows: self.row_strings() }
    }

    /// Parses a matrix; `cols` is needed only for matrices with zero rows.
    pub fn from_json(json: &MatrixJson, cols: Option<usize>) -> Result<Matrix, LinalgError> {
        let field = Field::parse(&json.field)?;
        Self::from_json_in(&field, &json.rows, cols)
    }

    pub fn from_json_in(field: &Field, rows: &[Vec<String>], cols: Option<usize>) -> Result<Matrix, LinalgError> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if parsed.is_empty() {
            return Ok(Matrix::zeros(field, 0, cols.unwrap_or(0)));
        }
        Self::from_rows(field, parsed)
    }
}

/// `J` with `J e_i = e_{perm[i]}` (columns index the source, rows the
/// target), so `perm_matrix(π∘τ) = perm_matrix(π) · perm_matrix(τ)`.
pub fn perm_matrix(field: &Field, perm: &[usize]) -> Result<Matrix, LinalgError> {
    let d = perm.len();
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || seen[p] {
            return Err(LinalgError::NotBijection(d));
        }
        seen[p] = true;
    }
    let mut m = Matrix::zeros(field, d, d);
    for (i, &p) in perm.iter().enumerate() {
        m.set(p, i, field.one());
    }
    Ok(m)
}
