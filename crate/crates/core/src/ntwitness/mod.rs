//! Non-properness witnesses for modules over the normalizer `N(T)` of the
//! diagonal torus in SL₂.
//!
//! An [`NtModule`] is a weight-graded space (basis vectors carry integer
//! weights, `H(t)` scales weight `w` by `t^w`) together with the matrix of
//! `J = [[0,-1],[1,0]]`. Given a family of invariant subspaces, the
//! pipeline finds a point `u` off their union, symmetrizes it so that
//! `J u_i = u_{-i}`, and certifies that the curve `λ ↦ (v_λ, v′_λ)` in the
//! image of the action map has a limit outside the image.

mod search;
mod transporter;
mod witness;

pub use search::{adjust_j_symmetric, find_u, AdjustStep, SearchPath, Searched};
pub use transporter::{nt_transporter, rescale_closure, CosetSolution, SpanReport, TransporterReport};
pub use witness::{
    build_family, certify, verify_witness, Checks, DegenerateReport, Family, Outcome, WitnessCertificate,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::grouprep::{GroupError, MatrixGroup, Representation};
use crate::linalg::{LinalgError, Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NtError {
    #[error("invalid N(T)-module: {0}")]
    InvalidModule(String),
    #[error("family member {0} is not N(T)-invariant")]
    NotInvariant(usize),
    #[error("no rational point of {0} avoids the family")]
    FieldTooSmall(String),
    #[error("u is not J-symmetric at weight {0}")]
    AsymmetricInput(i64),
    #[error("u has no positive-weight support")]
    NoPositiveWeightSupport,
    #[error("generalized Vandermonde matrix is singular for the chosen scalars")]
    SingularChoice,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Weight-graded module with a `J`-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtModule {
    field: Field,
    weights: Vec<i64>,
    jmat: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NtModuleJson {
    pub field: String,
    pub weights: Vec<i64>,
    pub j: Vec<Vec<String>>,
}

impl NtModule {
    /// Checks that `J` maps weight `w` to weight `−w` and that `J²` acts
    /// on weight `w` by `(−1)^w`.
    pub fn new(field: &Field, weights: Vec<i64>, jmat: Matrix) -> Result<Self, NtError> {
        let n = weights.len();
        if jmat.rows() != n || jmat.cols() != n {
            return Err(NtError::InvalidModule(format!("J is {}x{}, expected {n}", jmat.rows(), jmat.cols())));
        }
        if jmat.field() != field {
            return Err(LinalgError::MixedContext.into());
        }
        for r in 0..n {
            for c in 0..n {
                if !field.is_zero(jmat.get(r, c)) && weights[r] != -weights[c] {
                    return Err(NtError::InvalidModule(format!(
                        "J sends a weight-{} vector into weight {}",
                        weights[c], weights[r]
                    )));
                }
            }
        }
        let sign: Vec<Scalar> = weights.iter().map(|w| field.from_i64(if w % 2 == 0 { 1 } else { -1 })).collect();
        if jmat.mul(&jmat)? != Matrix::diagonal(field, &sign) {
            return Err(NtError::InvalidModule("J² does not act by (−1)^w".into()));
        }
        Ok(NtModule { field: field.clone(), weights, jmat })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn jmat(&self) -> &Matrix {
        &self.jmat
    }

    /// Distinct positive weights, ascending.
    pub fn positive_weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.weights.iter().copied().filter(|&w| w > 0).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn coords_of_weight(&self, w: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.weights[k] == w).collect()
    }

    /// Weight-`w` component of `v`.
    pub fn project(&self, v: &[Scalar], w: i64) -> Vec<Scalar> {
        v.iter().zip(&self.weights).map(|(x, &wk)| if wk == w { x.clone() } else { self.field.zero() }).collect()
    }

    pub fn apply_j(&self, v: &[Scalar]) -> Result<Vec<Scalar>, NtError> {
        Ok(self.jmat.mat_vec(v)?)
    }

    /// Matrix of `H(t)`.
    pub fn h_matrix(&self, t: &Scalar) -> Result<Matrix, NtError> {
        let d = self.weights.iter().map(|&w| self.field.pow(t, w)).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::diagonal(&self.field, &d))
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<(), NtError> {
        if v.len() != self.dim() || v.iter().any(|x| !self.field.contains(x)) {
            return Err(NtError::InvalidInput(format!("vector does not lie in the {}-dim module", self.dim())));
        }
        Ok(())
    }

    /// Invariance under the algebraic group `N(T)`: the subspace is the sum
    /// of its weight components and is `J`-stable.
    pub fn is_invariant(&self, s: &Subspace) -> Result<bool, NtError> {
        if s.ambient() != self.dim() {
            return Err(NtError::InvalidInput("subspace ambient differs from module dimension".into()));
        }
        let mut weights = self.weights.clone();
        weights.sort_unstable();
        weights.dedup();
        for b in s.basis_vectors() {
            for &w in &weights {
                if !s.contains(&self.project(&b, w))? {
                    return Ok(false);
                }
            }
        }
        Ok(s.is_stable_under(&self.jmat)?)
    }

    /// Smallest `N(T)`-submodule containing `v`: the span of the weight
    /// components of `v` and their `J`-images.
    pub fn generated_submodule(&self, v: &[Scalar]) -> Result<Subspace, NtError> {
        self.check_vector(v)?;
        let mut weights = self.weights.clone();
        weights.sort_unstable();
        weights.dedup();
        let mut gens = Vec::new();
        for w in weights {
            let c = self.project(v, w);
            gens.push(self.apply_j(&c)?);
            gens.push(c);
        }
        Ok(Subspace::from_vectors(&self.field, self.dim(), &gens)?)
    }

    /// `N(T)` over a finite field as a matrix group generated by `H(ζ)` and
    /// `J`, with this module as a representation of it.
    pub fn finite_representation(&self) -> Result<Representation, NtError> {
        let f = &self.field;
        let z = f
            .multiplicative_generator()
            .ok_or_else(|| NtError::InvalidInput("finite representation needs a finite field".into()))?;
        let h = Matrix::diagonal(f, &[z.clone(), f.inv(&z)?]);
        let j = Matrix::from_i64(f, &[&[0, -1], &[1, 0]]);
        let group = MatrixGroup::new(f, 2, vec![h, j])?;
        let images = vec![self.h_matrix(&z)?, self.jmat.clone()];
        let rep = Representation::new(&group, f, self.dim(), images)?;
        rep.table()?;
        Ok(rep)
    }

    pub fn from_json(json: &NtModuleJson) -> Result<Self, NtError> {
        let field = Field::parse(&json.field)?;
        let jmat = Matrix::from_json_in(&field, &json.j, Some(json.weights.len()))?;
        NtModule::new(&field, json.weights.clone(), jmat)
    }

    pub fn to_json(&self) -> NtModuleJson {
        NtModuleJson { field: self.field.to_string(), weights: self.weights.clone(), j: self.jmat.to_json().rows }
    }
}

pub(crate) fn fmt_vec(field: &Field, v: &[Scalar]) -> Vec<String> {
    v.iter().map(|x| field.format(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::nt_module_from_blocks;
    use std::collections::BTreeMap;

    #[test]
    fn rejects_bad_j() {
        let f = Field::rationals();
        let j = Matrix::from_i64(&f, &[&[0, 1], &[1, 0]]);
        assert!(matches!(NtModule::new(&f, vec![-1, 1], j), Err(NtError::InvalidModule(_))));
        let j = Matrix::from_i64(&f, &[&[1, 0], &[0, 1]]);
        assert!(matches!(NtModule::new(&f, vec![-1, 1], j), Err(NtError::InvalidModule(_))));
    }

    #[test]
    fn invariance_is_graded_and_j_stable() {
        let f = Field::rationals();
        let m = nt_module_from_blocks(&f, &BTreeMap::from([(1, 1)]), 0, 0).unwrap();
        assert!(m.is_invariant(&Subspace::zero(&f, 2)).unwrap());
        assert!(!m.is_invariant(&Subspace::coordinate(&f, 2, &[0])).unwrap());
        let diag = Subspace::from_vectors(&f, 2, &[vec![f.one(), f.one()]]).unwrap();
        assert!(!m.is_invariant(&diag).unwrap());
    }

    #[test]
    fn finite_group_has_order_2_q_minus_1() {
        let f = Field::prime(7).unwrap();
        let m = nt_module_from_blocks(&f, &BTreeMap::from([(1, 1), (2, 1)]), 1, 1).unwrap();
        let rep = m.finite_representation().unwrap();
        assert_eq!(rep.group().order().unwrap(), 12);
    }
}
