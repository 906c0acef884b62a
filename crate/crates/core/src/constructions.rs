//! Standard representations: Borel groups acting on upper-triangular
//! matrices, symmetric powers of the standard SL₂-module, the char-p
//! invariant hyperplane, and N(T)-modules assembled from irreducible blocks.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Field, FieldKind, Scalar};
use crate::grouprep::{GroupError, MatrixGroup, Representation};
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::ntwitness::{NtError, NtModule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("degree {d} is not 2p-2 = {expected} for characteristic {p}")]
    WrongDegree { d: usize, p: u32, expected: usize },
    #[error("weights must be positive, got {0}")]
    NonpositiveWeight(i64),
    #[error("{0} has no square root of -1")]
    NoSquareRootOfMinusOne(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Nt(#[from] NtError),
}

/// Coordinates `(i, j)`, `i ≤ j`, of the upper-triangular `n x n`
/// matrices in row-major order.
pub fn upper_coords(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Flattens the upper triangle of `a` in [`upper_coords`] order.
pub fn flatten_upper(a: &Matrix) -> Vec<Scalar> {
    upper_coords(a.rows()).into_iter().map(|(i, j)| a.get(i, j).clone()).collect()
}

/// Inverse of [`flatten_upper`].
pub fn unflatten_upper(field: &Field, n: usize, v: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for ((i, j), x) in upper_coords(n).into_iter().zip(v) {
        m.set(i, j, x.clone());
    }
    m
}

/// Matrix of `A ↦ gA` on flattened upper-triangular `A`, for upper-triangular `g`.
pub fn left_mult_matrix(g: &Matrix) -> Matrix {
    let n = g.rows();
    let f = g.field();
    let coords = upper_coords(n);
    let pos = |i: usize, j: usize| coords.iter().position(|&c| c == (i, j)).unwrap();
    let mut m = Matrix::zeros(f, coords.len(), coords.len());
    for (r, &(i, j)) in coords.iter().enumerate() {
        for k in i..=j {
            m.set(r, pos(k, j), g.get(i, k).clone());
        }
    }
    m
}

/// `1, α, …, α^{n-1}`: an additive basis over the prime field (or ℚ).
fn additive_basis(field: &Field) -> Vec<Scalar> {
    match field.kind() {
        FieldKind::Finite { degree, .. } => {
            let a = field.adjoined();
            (0..*degree as i64).map(|k| field.pow(&a, k).unwrap()).collect()
        }
        FieldKind::Quadratic { .. } => vec![field.one(), field.adjoined()],
        FieldKind::Rationals => vec![field.one()],
    }
}

fn unit_generator(field: &Field) -> Scalar {
    field.multiplicative_generator().unwrap_or_else(|| field.from_i64(2))
}

/// Generators of `B_n`: `diag(ζ at i)` for each `i`, then `I + c·E_ij`
/// for `i < j` and `c` in the additive basis.
pub fn borel_generators(field: &Field, n: usize) -> Vec<Matrix> {
    let z = unit_generator(field);
    let mut gens = Vec::new();
    if field.order() != Some(2) {
        for i in 0..n {
            let mut d = vec![field.one(); n];
            d[i] = z.clone();
            gens.push(Matrix::diagonal(field, &d));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for c in additive_basis(field) {
                let mut e = Matrix::identity(field, n);
                e.set(i, j, c);
                gens.push(e);
            }
        }
    }
    gens
}

pub fn borel_group(field: &Field, n: usize) -> MatrixGroup {
    MatrixGroup::new(field, n, borel_generators(field, n)).expect("Borel generators are invertible")
}

/// `{A : A_ii = 0}` inside the flattened upper-triangular space.
pub fn diagonal_hyperplane(field: &Field, n: usize, i: usize) -> Subspace {
    let coords = upper_coords(n);
    let keep: Vec<usize> = (0..coords.len()).filter(|&k| coords[k] != (i, i)).collect();
    Subspace::coordinate(field, coords.len(), &keep)
}

/// Left multiplication of a representation's (upper-triangular) images on
/// upper-triangular matrices.
pub fn left_mult_rep(rep: &Representation) -> Result<Representation, GroupError> {
    let n = rep.dim();
    let images = rep.images().iter().map(left_mult_matrix).collect();
    Representation::new(rep.group(), rep.field(), n * (n + 1) / 2, images)
}

/// `B_n` acting by left multiplication on upper-triangular matrices, with
/// the family `{L_i}`.
pub fn upper_triangular_rep(n: usize, field: &Field) -> (Representation, Vec<Subspace>) {
    let group = borel_group(field, n);
    let rep = left_mult_rep(&Representation::natural(&group)).expect("left multiplication is faithful");
    let family = (0..n).map(|i| diagonal_hyperplane(field, n, i)).collect();
    (rep, family)
}

/// Generators of `SL₂`: `[[1,c],[0,1]]` and `[[1,0],[c,1]]` for `c` in the
/// additive basis.
pub fn sl2_generators(field: &Field) -> Vec<Matrix> {
    let mut gens = Vec::new();
    for c in additive_basis(field) {
        gens.push(Matrix::new(field, 2, 2, vec![field.one(), c.clone(), field.zero(), field.one()]).unwrap());
        gens.push(Matrix::new(field, 2, 2, vec![field.one(), field.zero(), c, field.one()]).unwrap());
    }
    gens
}

pub fn sl2_group(field: &Field) -> MatrixGroup {
    MatrixGroup::new(field, 2, sl2_generators(field)).expect("unipotents are invertible")
}

/// `J = [[0,-1],[1,0]]`.
pub fn j_element(field: &Field) -> Matrix {
    Matrix::from_i64(field, &[&[0, -1], &[1, 0]])
}

/// `H(t) = diag(t, t⁻¹)`.
pub fn h_element(field: &Field, t: &Scalar) -> Result<Matrix, LinalgError> {
    Ok(Matrix::diagonal(field, &[t.clone(), field.inv(t)?]))
}

/// Binomial expansion of `(p0 + p1·y)^e` style products over the monomial
/// basis; polynomials are coefficient lists indexed by the power of `y`.
fn poly_mul(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

fn poly_pow(f: &Field, a: &[Scalar], e: usize) -> Vec<Scalar> {
    let mut out = vec![f.one()];
    for _ in 0..e {
        out = poly_mul(f, &out, a);
    }
    out
}

/// Matrix of `[[a,b],[c,d]]` on degree-`deg` forms in the basis
/// `x^deg, x^{deg-1}y, …, y^deg`, acting by `y ↦ ay − cx`, `x ↦ −by + dx`.
pub fn sym_power_matrix(g: &Matrix, deg: usize) -> Matrix {
    let f = g.field();
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    // Dehomogenize with x = 1: forms become polynomials in y of degree ≤ deg.
    let x_img = [d.clone(), f.neg(b)];
    let y_img = [f.neg(c), a.clone()];
    let mut m = Matrix::zeros(f, deg + 1, deg + 1);
    for k in 0..=deg {
        let col = poly_mul(f, &poly_pow(f, &x_img, deg - k), &poly_pow(f, &y_img, k));
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, k, v);
        }
    }
    m
}

/// SL₂ acting on degree-`d` forms.
#[derive(Clone, Debug)]
pub struct SymPowerRep {
    pub d: usize,
    pub rep: Representation,
}

pub fn sym_power(field: &Field, d: usize) -> SymPowerRep {
    sym_power_of(&sl2_group(field), d)
}

/// Degree-`d` forms for any group of 2x2 matrices.
pub fn sym_power_of(group: &MatrixGroup, d: usize) -> SymPowerRep {
    let images = group.generators().iter().map(|g| sym_power_matrix(g, d)).collect();
    let rep = Representation::new(group, group.field(), d + 1, images).expect("substitutions are invertible");
    SymPowerRep { d, rep }
}

/// Hyperplane of degree-`d` forms with vanishing `x^{d-k}y^k` coefficient.
pub fn coefficient_hyperplane(field: &Field, d: usize, k: usize) -> Subspace {
    let keep: Vec<usize> = (0..=d).filter(|&i| i != k).collect();
    Subspace::coordinate(field, d + 1, &keep)
}

/// `L_{2p-2} ⊂ V_{2p-2}`: forms with no `x^{p-1}y^{p-1}` term.
pub fn char_p_subspace(field: &Field, d: usize) -> Result<Subspace, ConstructionError> {
    let p = field.characteristic();
    let expected = (2 * p as usize).saturating_sub(2);
    if p == 0 || d != expected {
        return Err(ConstructionError::WrongDegree { d, p, expected });
    }
    Ok(coefficient_hyperplane(field, d, p as usize - 1))
}

/// First `i` (in code order) with `i² = −1`.
pub fn sqrt_minus_one(field: &Field) -> Option<Scalar> {
    let target = field.from_i64(-1);
    field.elements()?.into_iter().find(|x| field.mul(x, x) == target)
}

/// `[[0,i],[i,0]]` with `i² = −1`: an SL₂ lift of the swap in PGL₂.
pub fn pgl2_swap(field: &Field) -> Result<Matrix, ConstructionError> {
    let i = sqrt_minus_one(field).ok_or_else(|| ConstructionError::NoSquareRootOfMinusOne(field.to_string()))?;
    Ok(Matrix::new(field, 2, 2, vec![field.zero(), i.clone(), i, field.zero()])?)
}

/// `⊕ W_i^{count} ⊕ W₀^{m0} ⊕ W₀′^{m0p}`. Each `W_i` copy contributes the
/// basis `(x^i, y^i)` with weights `(−i, i)`, `J x^i = y^i`,
/// `J y^i = (−1)^i x^i`; positive weights come in ascending order.
pub fn nt_module_from_blocks(
    field: &Field,
    multiplicities: &BTreeMap<i64, usize>,
    m0: usize,
    m0p: usize,
) -> Result<NtModule, ConstructionError> {
    if let Some((&w, _)) = multiplicities.iter().find(|(&w, _)| w <= 0) {
        return Err(ConstructionError::NonpositiveWeight(w));
    }
    let mut weights = Vec::new();
    let mut j_entries: Vec<(usize, usize, i64)> = Vec::new();
    for (&i, &count) in multiplicities {
        for _ in 0..count {
            let x = weights.len();
            weights.push(-i);
            weights.push(i);
            j_entries.push((x + 1, x, 1));
            j_entries.push((x, x + 1, if i % 2 == 0 { 1 } else { -1 }));
        }
    }
    for _ in 0..m0 {
        j_entries.push((weights.len(), weights.len(), 1));
        weights.push(0);
    }
    for _ in 0..m0p {
        j_entries.push((weights.len(), weights.len(), -1));
        weights.push(0);
    }
    let n = weights.len();
    let mut j = Matrix::zeros(field, n, n);
    for (r, c, v) in j_entries {
        j.set(r, c, field.from_i64(v));
    }
    Ok(NtModule::new(field, weights, j)?)
}
