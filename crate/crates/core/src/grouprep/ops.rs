use super::{dim_err, GroupError, MatrixGroup, Representation};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Subspace};

fn check_ambient(rep: &Representation, s: &Subspace) -> Result<(), GroupError> {
    if s.ambient() != rep.dim() {
        return dim_err(format!("subspace ambient {} vs representation dim {}", s.ambient(), rep.dim()));
    }
    if s.field() != rep.field() {
        return Err(crate::linalg::LinalgError::MixedContext.into());
    }
    Ok(())
}

/// `ρ(g)·s ⊆ s` for every generator image.
pub fn is_invariant(rep: &Representation, s: &Subspace) -> Result<bool, GroupError> {
    check_ambient(rep, s)?;
    for m in rep.images() {
        if !s.is_stable_under(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_vector(rep: &Representation, v: &[Scalar]) -> Result<(), GroupError> {
    if v.len() != rep.dim() {
        return dim_err(format!("vector of length {} for dim {}", v.len(), rep.dim()));
    }
    Ok(())
}

/// Every group element `g` with `ρ(g)v = v`, in enumeration order.
pub fn stabilizer(rep: &Representation, v: &[Scalar]) -> Result<Vec<Matrix>, GroupError> {
    transporter(rep, v, v)
}

/// Every group element `g` with `ρ(g)v = w`, in enumeration order.
pub fn transporter(rep: &Representation, v: &[Scalar], w: &[Scalar]) -> Result<Vec<Matrix>, GroupError> {
    check_vector(rep, v)?;
    check_vector(rep, w)?;
    let gt = rep.group().enumerate()?;
    let imgs = rep.table()?;
    let mut out = Vec::new();
    for (k, m) in imgs.iter().enumerate() {
        if m.mat_vec(v)? == w {
            out.push(gt.element(k).clone());
        }
    }
    Ok(out)
}

/// `V^N` for the subgroup generated by `sub`'s generators, evaluated
/// through `rep`.
pub fn fixed_subspace(rep: &Representation, sub: &MatrixGroup) -> Result<Subspace, GroupError> {
    if sub.degree() != rep.group().degree() {
        return dim_err(format!("subgroup degree {} vs group degree {}", sub.degree(), rep.group().degree()));
    }
    let images = sub.generators().iter().map(|g| rep.image_of(g)).collect::<Result<Vec<_>, _>>()?;
    fixed_subspace_of(rep.field(), rep.dim(), &images)
}

/// Common fixed space `∩ ker(M − I)` of a list of matrices.
pub fn fixed_subspace_of(field: &Field, dim: usize, images: &[Matrix]) -> Result<Subspace, GroupError> {
    let id = Matrix::identity(field, dim);
    let mut stacked = Matrix::zeros(field, 0, dim);
    for m in images {
        stacked = stacked.vstack(&m.sub(&id)?)?;
    }
    Ok(stacked.kernel())
}

/// Smallest invariant subspace containing `s`, by saturating under the
/// generator images.
pub fn generated_submodule(rep: &Representation, s: &Subspace) -> Result<Subspace, GroupError> {
    check_ambient(rep, s)?;
    let mut cur = s.clone();
    loop {
        let mut next = cur.clone();
        for m in rep.images() {
            next = next.sum(&cur.image(m)?)?;
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Eigenspace decomposition of `ρ(torus_element)` with eigenvalue `t^i`
/// labelled `i`, for `i` in the window. Only nonzero blocks are returned.
pub fn weight_decompose(
    rep: &Representation,
    torus_element: &Matrix,
    t: &Scalar,
    window: std::ops::RangeInclusive<i64>,
) -> Result<Vec<(i64, Subspace)>, GroupError> {
    let f = rep.field();
    let m = rep.image_of(torus_element)?;
    let weights: Vec<i64> = window.collect();
    let mut values: Vec<Scalar> = Vec::with_capacity(weights.len());
    for (k, &i) in weights.iter().enumerate() {
        let v = f.pow(t, i)?;
        if let Some(prev) = values.iter().position(|x| *x == v) {
            return Err(GroupError::AmbiguousWeights(weights[prev], weights[k]));
        }
        values.push(v);
    }
    let id = Matrix::identity(f, rep.dim());
    let mut blocks = Vec::new();
    let mut total = 0;
    for (&i, v) in weights.iter().zip(&values) {
        let space = m.sub(&id.scale(v))?.kernel();
        if space.dim() > 0 {
            total += space.dim();
            blocks.push((i, space));
        }
    }
    if total != rep.dim() {
        return Err(GroupError::NotDiagonalizable { found: total, dim: rep.dim() });
    }
    Ok(blocks)
}
