use serde::{Deserialize, Serialize};

use super::{dim_err, LinalgError, Matrix, MatrixJson};
use crate::field::{Field, Scalar};

/// Subspace of `field^ambient`, stored as the row span of its reduced row
/// echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

/// JSON shape `{"ambient": n, "basis": <matrix>}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SubspaceJson {
    pub ambient: usize,
    pub basis: MatrixJson,
}

impl Subspace {
    /// Row span of `m`.
    pub fn row_span(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let k = pivots.len();
        let data: Vec<Scalar> = r.entries()[..k * m.cols()].to_vec();
        Subspace { ambient: m.cols(), basis: Matrix::from_parts(m.field(), k, m.cols(), data), pivots }
    }

    pub fn from_vectors(field: &Field, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Subspace, LinalgError> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return dim_err(format!("vector length differs from ambient dimension {ambient}"));
        }
        let data: Vec<Scalar> = vectors.iter().flatten().cloned().collect();
        Ok(Self::row_span(&Matrix::new(field, vectors.len(), ambient, data)?))
    }

    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Self::row_span(&Matrix::zeros(field, 0, ambient))
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        Self::row_span(&Matrix::identity(field, ambient))
    }

    /// Span of the listed standard basis vectors.
    pub fn coordinate(field: &Field, ambient: usize, coords: &[usize]) -> Subspace {
        let vs: Vec<Vec<Scalar>> = coords
            .iter()
            .map(|&c| (0..ambient).map(|i| if i == c { field.one() } else { field.zero() }).collect())
            .collect();
        Self::from_vectors(field, ambient, &vs).expect("coordinates in range")
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::MixedContext);
        }
        if self.ambient != other.ambient {
            return dim_err(format!("ambient {} vs {}", self.ambient, other.ambient));
        }
        Ok(())
    }

    /// `v` minus its reduction against the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.ambient {
            return dim_err(format!("vector of length {} in ambient {}", v.len(), self.ambient));
        }
        let f = self.field();
        if v.iter().any(|x| !f.contains(x)) {
            return Err(LinalgError::MixedContext);
        }
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            let c = r[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in self.basis.row(row).iter().enumerate().skip(p) {
                if !f.is_zero(b) {
                    r[j] = f.sub(&r[j], &f.mul(&c, b));
                }
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        let f = self.field().clone();
        Ok(self.reduce(v)?.iter().all(|x| f.is_zero(x)))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check(other)?;
        for v in self.basis_vectors() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        Ok(Self::row_span(&self.basis.vstack(&other.basis)?))
    }

    /// Rows span the orthogonal complement: `v ∈ self` iff `annihilator · v = 0`.
    pub fn annihilator(&self) -> Matrix {
        let k = self.basis.kernel();
        k.basis.clone()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        let constraints = self.annihilator().vstack(&other.annihilator())?;
        Ok(constraints.kernel())
    }

    /// `{M v : v ∈ self}`.
    pub fn image(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.field() != self.field() {
            return Err(LinalgError::MixedContext);
        }
        if m.cols() != self.ambient {
            return dim_err("matrix columns differ from ambient dimension");
        }
        if self.dim() == 0 {
            return Ok(Subspace::zero(self.field(), m.rows()));
        }
        Ok(Self::row_span(&self.basis.mul(&m.transpose())?))
    }

    /// True when `M · self ⊆ self`.
    pub fn is_stable_under(&self, m: &Matrix) -> Result<bool, LinalgError> {
        if m.rows() != self.ambient || m.cols() != self.ambient {
            return dim_err("matrix size differs from ambient dimension");
        }
        for v in self.basis_vectors() {
            if !self.contains(&m.mat_vec(&v)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self ⊕ other` inside `field^(a+b)`.
    pub fn direct_sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::MixedContext);
        }
        let f = self.field();
        let n = self.ambient + other.ambient;
        let mut vs = Vec::new();
        for v in self.basis_vectors() {
            let mut w = v;
            w.resize(n, f.zero());
            vs.push(w);
        }
        for v in other.basis_vectors() {
            let mut w = vec![f.zero(); self.ambient];
            w.extend(v);
            vs.push(w);
        }
        Self::from_vectors(f, n, &vs)
    }

    pub fn to_json(&self) -> SubspaceJson {
        SubspaceJson { ambient: self.ambient, basis: self.basis.to_json() }
    }

    pub fn from_json(json: &SubspaceJson) -> Result<Subspace, LinalgError> {
        let m = Matrix::from_json(&json.basis, Some(json.ambient))?;
        if m.cols() != json.ambient {
            return dim_err("basis width differs from ambient");
        }
        Ok(Self::row_span(&m))
    }

    pub fn from_json_in(field: &Field, json: &SubspaceJson) -> Result<Subspace, LinalgError> {
        let s = Self::from_json(json)?;
        if s.field() != field {
            return Err(LinalgError::MixedContext);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_identities() {
        let f = Field::prime(5).unwrap();
        let s = Subspace::coordinate(&f, 2, &[0]);
        let t = Subspace::coordinate(&f, 2, &[1]);
        assert_eq!(s.sum(&Subspace::zero(&f, 2)).unwrap(), s);
        assert_eq!(s.intersect(&t).unwrap(), Subspace::zero(&f, 2));
        assert_eq!(s.sum(&t).unwrap(), Subspace::full(&f, 2));
        assert!(matches!(s.sum(&Subspace::zero(&f, 3)), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let f = Field::rationals();
        let m = Matrix::from_i64(&f, &[&[2, 4, 6], &[1, 1, 1], &[3, 5, 7]]);
        let s = Subspace::row_span(&m);
        assert_eq!(Subspace::row_span(s.basis()), s);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn image_and_direct_sum() {
        let f = Field::prime(3).unwrap();
        let swap = Matrix::from_i64(&f, &[&[0, 1], &[1, 0]]);
        let s = Subspace::coordinate(&f, 2, &[0]);
        assert_eq!(s.image(&swap).unwrap(), Subspace::coordinate(&f, 2, &[1]));
        assert!(!s.is_stable_under(&swap).unwrap());
        let d = s.direct_sum(&Subspace::full(&f, 1)).unwrap();
        assert_eq!(d, Subspace::coordinate(&f, 3, &[0, 2]));
    }
}
