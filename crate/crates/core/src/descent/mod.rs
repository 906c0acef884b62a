//! Galois descent of an upper-triangular action.
//!
//! Given `ρ: G → B_n(k′)` for a Galois extension `k′/k` with automorphisms
//! `σ_0 = id, …, σ_{d-1}`, `Φ` acts on `V^{⊕d}` (with `V` the flattened
//! upper-triangular `n x n` matrices, dimension `N`) by left multiplication
//! through the twists `^{σ_j}ρ` on the `j`-th summand. Conjugating by the
//! blown-up Vandermonde matrix `A[N]`, `A_ij = σ_j(α^{i+1})`, gives `Ψ`, whose
//! images have entries in `k`.

mod checks;

pub use checks::{
    check_closed_image_equations, complement_check, corrupted_control, frobenius_reduce, image_tuple, phi_freeness,
    pointwise_rationality, sample_equations, subspace_oracle, ComplementReport, EquationReport, EquationSample,
    FrobeniusReduction, OracleStatus, PointwiseReport,
};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::constructions::{diagonal_hyperplane, left_mult_matrix};
use crate::field::galois::GaloisExtension;
use crate::field::{FieldError, Scalar};
use crate::grouprep::{is_invariant, GroupError, Representation};
use crate::linalg::{perm_matrix, LinalgError, Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    #[error("automorphism index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("the twist of generator {0} is not in the group")]
    TwistedGeneratorNotInGroup(usize),
    #[error("generator image {0} is not upper triangular")]
    NotUpperTriangular(usize),
    #[error("Vandermonde matrix is singular")]
    SingularA,
    #[error("sample {0} has no invertible component")]
    NoInvertibleComponent(usize),
    #[error("Frobenius reduction needs positive characteristic")]
    CharacteristicZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How automorphisms act on group elements when twisting.
///
/// `RationalPoints` treats the group as the points of a `k`-group, so
/// `^σρ(g) = σ(ρ(g))`. `Entrywise` applies `σ^{-1}` to the entries of the
/// group's own matrices, `^σρ(g) = σ(ρ(σ^{-1}(g)))`, which needs the group
/// to be Galois-stable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupGaloisAction {
    #[default]
    RationalPoints,
    Entrywise,
}

#[derive(Clone, Debug)]
pub struct DescentInput {
    pub ext: GaloisExtension,
    pub rep: Representation,
    pub action: GroupGaloisAction,
}

impl DescentInput {
    pub fn new(ext: GaloisExtension, rep: Representation, action: GroupGaloisAction) -> Result<Self, DescentError> {
        if rep.field() != ext.top() {
            return Err(DescentError::InvalidInput(format!(
                "representation over {} but the extension top is {}",
                rep.field(),
                ext.top()
            )));
        }
        for (i, m) in rep.images().iter().enumerate() {
            if !m.is_upper_triangular() {
                return Err(DescentError::NotUpperTriangular(i));
            }
        }
        if action == GroupGaloisAction::Entrywise && rep.group().field() != ext.top() {
            return Err(DescentError::InvalidInput("entrywise twisting needs a group over the top field".into()));
        }
        Ok(DescentInput { ext, rep, action })
    }

    pub fn n(&self) -> usize {
        self.rep.dim()
    }

    /// `N = n(n+1)/2`.
    pub fn block_dim(&self) -> usize {
        self.n() * (self.n() + 1) / 2
    }

    pub fn degree(&self) -> usize {
        self.ext.degree()
    }
}

/// `σ_j` applied to every entry.
pub fn galois_matrix(ext: &GaloisExtension, j: usize, m: &Matrix) -> Result<Matrix, DescentError> {
    if j >= ext.degree() {
        return Err(DescentError::IndexOutOfRange(j));
    }
    Ok(m.map_into(ext.top(), |x| ext.apply(j, x))?)
}

/// The element at which `^{σ_j}ρ` evaluates `ρ` for the group element `g`.
pub(crate) fn twist_element(
    ext: &GaloisExtension,
    action: GroupGaloisAction,
    j: usize,
    g: &Matrix,
) -> Result<Matrix, DescentError> {
    match action {
        GroupGaloisAction::RationalPoints => Ok(g.clone()),
        GroupGaloisAction::Entrywise => galois_matrix(ext, ext.inverse(j), g),
    }
}

/// `^{σ_j}ρ`.
pub fn twist(
    ext: &GaloisExtension,
    j: usize,
    rep: &Representation,
    action: GroupGaloisAction,
) -> Result<Representation, DescentError> {
    if j >= ext.degree() {
        return Err(DescentError::IndexOutOfRange(j));
    }
    let images = match action {
        GroupGaloisAction::RationalPoints => {
            rep.images().iter().map(|m| galois_matrix(ext, j, m)).collect::<Result<Vec<_>, _>>()?
        }
        GroupGaloisAction::Entrywise => {
            let mut images = Vec::with_capacity(rep.images().len());
            for (i, g) in rep.group().generators().iter().enumerate() {
                let h = twist_element(ext, action, j, g)?;
                if !rep.group().contains(&h)? {
                    return Err(DescentError::TwistedGeneratorNotInGroup(i));
                }
                images.push(galois_matrix(ext, j, &rep.image_of(&h)?)?);
            }
            images
        }
    };
    Ok(Representation::new(rep.group(), ext.top(), rep.dim(), images)?)
}

/// The twists `^{σ_j}ρ` for all `j`, and `Φ` acting block-diagonally on
/// `V^{⊕d}` by left multiplication.
pub fn build_phi(input: &DescentInput) -> Result<(Vec<Representation>, Representation), DescentError> {
    let twists =
        (0..input.degree()).map(|j| twist(&input.ext, j, &input.rep, input.action)).collect::<Result<Vec<_>, _>>()?;
    let top = input.ext.top();
    let mut images = Vec::with_capacity(input.rep.images().len());
    for i in 0..input.rep.images().len() {
        let blocks: Vec<Matrix> = twists.iter().map(|t| left_mult_matrix(&t.images()[i])).collect();
        images.push(Matrix::block_diag(top, &blocks)?);
    }
    let phi = Representation::new(input.rep.group(), top, input.degree() * input.block_dim(), images)?;
    Ok((twists, phi))
}

/// `A_ij = σ_j(α)^{i+1}` for `0 ≤ i, j < d`.
pub fn vandermonde(ext: &GaloisExtension) -> Result<Matrix, DescentError> {
    let top = ext.top();
    let d = ext.degree();
    let mut a = Matrix::zeros(top, d, d);
    for j in 0..d {
        let s = ext.image(j)?;
        for i in 0..d {
            a.set(i, j, top.pow(s, i as i64 + 1)?);
        }
    }
    if top.is_zero(&a.det()?) {
        return Err(DescentError::SingularA);
    }
    Ok(a)
}

/// `J_σ` for `σ = σ_k`: the permutation `σ_j ↦ σ_k σ_j`.
pub fn galois_permutation(ext: &GaloisExtension, k: usize) -> Result<Matrix, DescentError> {
    let perm: Vec<usize> = (0..ext.degree()).map(|j| ext.compose(k, j)).collect();
    Ok(perm_matrix(ext.top(), &perm)?)
}

/// `σ_k(A) = A J_{σ_k}` for every `k`.
pub fn vandermonde_galois_check(ext: &GaloisExtension, a: &Matrix) -> Result<bool, DescentError> {
    for k in 0..ext.degree() {
        if galois_matrix(ext, k, a)? != a.mul(&galois_permutation(ext, k)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `det A` computed directly and by two closed forms:
/// `∏_{i<j} (−1)^d (σ_iα − σ_jα)` and `N(α) ∏_{i<j} (σ_jα − σ_iα)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetReport {
    pub direct: Scalar,
    pub product_formula: Scalar,
    pub norm_formula: Scalar,
}

impl DetReport {
    pub fn new(ext: &GaloisExtension, a: &Matrix) -> Result<Self, DescentError> {
        let f = ext.top();
        let d = ext.degree();
        let sign = f.from_i64(if d.is_multiple_of(2) { 1 } else { -1 });
        let mut product = f.one();
        let mut vander = f.one();
        let mut norm = f.one();
        for i in 0..d {
            norm = f.mul(&norm, ext.image(i)?);
            for j in (i + 1)..d {
                let diff = f.sub(ext.image(i)?, ext.image(j)?);
                product = f.mul(&product, &f.mul(&sign, &diff));
                vander = f.mul(&vander, &f.neg(&diff));
            }
        }
        Ok(DetReport { direct: a.det()?, product_formula: product, norm_formula: f.mul(&norm, &vander) })
    }

    pub fn product_matches(&self) -> bool {
        self.direct == self.product_formula
    }

    pub fn norm_matches(&self) -> bool {
        self.direct == self.norm_formula
    }
}

/// Invariance of `L_{(j_1,…,j_d)}` under `Φ` and `Ψ`, and of `A[N]·L`
/// under `Ψ`, from the generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceStatus {
    pub tuple: Vec<usize>,
    pub phi_invariant: bool,
    pub psi_invariant: bool,
    pub transported_psi_invariant: bool,
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    pub input: DescentInput,
    pub twists: Vec<Representation>,
    pub phi: Representation,
    pub a: Matrix,
    pub a_blown: Matrix,
    pub det: DetReport,
    pub a_galois: bool,
    /// `σ(Φ(σ^{-1}·g)) = J_σ[N]^{-1} Φ(g) J_σ[N]` for every `σ` and generator.
    pub phi_conjugation: bool,
    pub psi: Representation,
    /// `Ψ` over the base field, when every generator image is rational.
    pub psi_base: Option<Representation>,
    /// Per generator: all entries of `Ψ(g)` lie in the base field.
    pub rationality: Vec<bool>,
    pub subspaces: Vec<SubspaceStatus>,
}

/// Tuples in `{0..n-1}^d`, lexicographic.
pub fn tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|t| (0..n).map(move |j| [t.clone(), vec![j]].concat())).collect();
    }
    out
}

/// `L_{j_1} ⊕ … ⊕ L_{j_d}` in `V^{⊕d}`.
pub fn tuple_subspace(input: &DescentInput, tuple: &[usize]) -> Result<Subspace, DescentError> {
    let top = input.ext.top();
    let n = input.n();
    let mut s = Subspace::zero(top, 0);
    for &j in tuple {
        if j >= n {
            return Err(DescentError::IndexOutOfRange(j));
        }
        s = s.direct_sum(&diagonal_hyperplane(top, n, j))?;
    }
    Ok(s)
}

fn base_matrix(ext: &GaloisExtension, m: &Matrix) -> Option<Matrix> {
    let entries: Option<Vec<Scalar>> = m.entries().iter().map(|x| ext.to_base(x)).collect();
    Matrix::new(ext.base(), m.rows(), m.cols(), entries?).ok()
}

pub fn build_psi(input: &DescentInput) -> Result<DescentResult, DescentError> {
    let ext = &input.ext;
    let (twists, phi) = build_phi(input)?;
    let a = vandermonde(ext)?;
    let det = DetReport::new(ext, &a)?;
    let a_galois = vandermonde_galois_check(ext, &a)?;
    let big_n = input.block_dim();
    let a_blown = a.blowup(big_n)?;
    let psi = phi.conjugate(&a_blown)?;

    let mut phi_conjugation = true;
    for k in 0..ext.degree() {
        let jb = galois_permutation(ext, k)?.blowup(big_n)?;
        let jb_inv = jb.inverse()?;
        for (g, img) in input.rep.group().generators().iter().zip(phi.images()) {
            let h = twist_element(ext, input.action, k, g)?;
            let lhs = galois_matrix(ext, k, &phi.image_of(&h)?)?;
            if lhs != jb_inv.mul(img)?.mul(&jb)? {
                phi_conjugation = false;
            }
        }
    }

    let base_images: Vec<Option<Matrix>> = psi.images().iter().map(|m| base_matrix(ext, m)).collect();
    let rationality: Vec<bool> = base_images.iter().map(Option::is_some).collect();
    let psi_base = match base_images.into_iter().collect::<Option<Vec<_>>>() {
        Some(images) => Some(Representation::new(input.rep.group(), ext.base(), psi.dim(), images)?),
        None => None,
    };

    let mut subspaces = Vec::new();
    for tuple in tuples(input.n(), ext.degree()) {
        let l = tuple_subspace(input, &tuple)?;
        let transported = l.image(&a_blown)?;
        subspaces.push(SubspaceStatus {
            phi_invariant: is_invariant(&phi, &l)?,
            psi_invariant: is_invariant(&psi, &l)?,
            transported_psi_invariant: is_invariant(&psi, &transported)?,
            tuple,
        });
    }

    Ok(DescentResult {
        input: input.clone(),
        twists,
        phi,
        a,
        a_blown,
        det,
        a_galois,
        phi_conjugation,
        psi,
        psi_base,
        rationality,
        subspaces,
    })
}

impl DescentResult {
    pub fn to_json(&self) -> Value {
        let top = self.input.ext.top();
        let base = self.input.ext.base();
        let fmt = |s: &Scalar| top.format(s);
        json!({
            "extension": {
                "base": base.to_string(),
                "top": top.to_string(),
                "alpha": fmt(self.input.ext.alpha()),
                "conjugates": (0..self.input.degree())
                    .map(|j| self.input.ext.image(j).map(fmt))
                    .collect::<Result<Vec<_>, _>>()
                    .unwrap_or_default(),
            },
            "action": self.input.action,
            "n": self.input.n(),
            "block_dim": self.input.block_dim(),
            "generators": self.input.rep.group().generators().iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "rho_images": self.input.rep.images().iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "A": self.a.to_json(),
            "det_A": {
                "direct": fmt(&self.det.direct),
                "product_formula": fmt(&self.det.product_formula),
                "product_formula_matches": self.det.product_matches(),
                "norm_formula": fmt(&self.det.norm_formula),
                "norm_formula_matches": self.det.norm_matches(),
            },
            "A_galois_action": self.a_galois,
            "phi_conjugation": self.phi_conjugation,
            "phi_images": self.phi.images().iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "psi_images": self.psi.images().iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "psi_base_images": self.psi_base.as_ref().map(|r| r.images().iter().map(Matrix::to_json).collect::<Vec<_>>()),
            "rationality": self.rationality,
            "subspaces": self.subspaces,
        })
    }
}
