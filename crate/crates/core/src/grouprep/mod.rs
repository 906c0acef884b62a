//! Matrix groups given by generators, their representations, and the
//! verification predicates built on top of them.

pub(crate) mod compact;
mod freeness;
mod ops;

pub use freeness::{
    check_set_free, FreenessReport, FreenessReportJson, GoodnessSpec, Mode, Status, Witness, WitnessJson,
    EXHAUSTIVE_LIMIT,
};
pub(crate) use freeness::{random_scalar, random_vector};
pub use ops::{
    fixed_subspace, fixed_subspace_of, generated_submodule, is_invariant, stabilizer, transporter, weight_decompose,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::linalg::{LinalgError, Matrix};

/// Default bound on the number of elements enumerated.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group enumeration exceeded the element cap after {reached} elements")]
    CapExceeded { reached: usize },
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("representation is not a homomorphism (element {element}, generator {generator})")]
    NotHomomorphism { element: usize, generator: usize },
    #[error("the subspace family covers every rational point")]
    EmptyU,
    #[error("{0} ambient points exceed the exhaustive search bound")]
    SearchTooLarge(String),
    #[error("exhaustive enumeration needs a finite field")]
    InfiniteField,
    #[error("element is not in the enumerated group")]
    NotInGroup,
    #[error("window weights {0} and {1} have the same eigenvalue")]
    AmbiguousWeights(i64, i64),
    #[error("eigenspaces in the window span only {found} of {dim} dimensions")]
    NotDiagonalizable { found: usize, dim: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn dim_err<T>(msg: impl Into<String>) -> Result<T, GroupError> {
    Err(GroupError::DimensionMismatch(msg.into()))
}

/// Breadth-first enumeration of a matrix group.
#[derive(Debug)]
pub struct GroupTable {
    elements: Vec<Matrix>,
    index: HashMap<Vec<Scalar>, usize>,
    /// BFS tree: element `i > 0` is `elements[parent] · gen`.
    parent: Vec<Option<(usize, usize)>>,
    /// `right[i][s]` is the index of `elements[i] · gen_s`.
    right: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Matrix) -> Option<usize> {
        self.index.get(g.entries()).copied()
    }

    /// Index of `elements[i] · gen_s`.
    pub fn right_mul(&self, i: usize, s: usize) -> usize {
        self.right[i][s]
    }

    /// Generator word (indices) for element `i`, shortest in BFS order.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, s)) = self.parent[i] {
            w.push(s);
            i = p;
        }
        w.reverse();
        w
    }
}

/// A group given by invertible generators of a fixed degree.
#[derive(Clone)]
pub struct MatrixGroup {
    field: Field,
    degree: usize,
    generators: Vec<Matrix>,
    element_cap: usize,
    table: OnceLock<Result<Arc<GroupTable>, GroupError>>,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("field", &self.field)
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for MatrixGroup {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.degree == other.degree && self.generators == other.generators
    }
}

impl MatrixGroup {
    pub fn new(field: &Field, degree: usize, generators: Vec<Matrix>) -> Result<Self, GroupError> {
        for (i, g) in generators.iter().enumerate() {
            if g.field() != field {
                return Err(LinalgError::MixedContext.into());
            }
            if g.rows() != degree || g.cols() != degree {
                return dim_err(format!("generator {i} is {}x{}, expected degree {degree}", g.rows(), g.cols()));
            }
            if field.is_zero(&g.det()?) {
                return Err(GroupError::NotInvertible(i));
            }
        }
        Ok(MatrixGroup {
            field: field.clone(),
            degree,
            generators,
            element_cap: DEFAULT_ELEMENT_CAP,
            table: OnceLock::new(),
        })
    }

    pub fn trivial(field: &Field, degree: usize) -> Self {
        Self::new(field, degree, Vec::new()).expect("no generators to check")
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.element_cap = cap;
        self.table = OnceLock::new();
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn element_cap(&self) -> usize {
        self.element_cap
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(&self.field, self.degree)
    }

    /// All elements, identity first, then breadth-first by word length
    /// with generators tried in input order.
    pub fn enumerate(&self) -> Result<Arc<GroupTable>, GroupError> {
        self.table.get_or_init(|| self.build_table().map(Arc::new)).clone()
    }

    fn build_table(&self) -> Result<GroupTable, GroupError> {
        let id = self.identity();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id.entries().to_vec(), 0);
        let mut parent = vec![None];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            let mut row = Vec::with_capacity(self.generators.len());
            for (s, gen) in self.generators.iter().enumerate() {
                let p = elements[i].mul(gen)?;
                let k = match index.get(p.entries()) {
                    Some(&k) => k,
                    None => {
                        let k = elements.len();
                        if k >= self.element_cap {
                            return Err(GroupError::CapExceeded { reached: k });
                        }
                        index.insert(p.entries().to_vec(), k);
                        elements.push(p);
                        parent.push(Some((i, s)));
                        k
                    }
                };
                row.push(k);
            }
            right.push(row);
            i += 1;
        }
        Ok(GroupTable { elements, index, parent, right })
    }

    pub fn order(&self) -> Result<usize, GroupError> {
        Ok(self.enumerate()?.order())
    }

    /// Element from a word in the generators.
    pub fn word_element(&self, word: &[usize]) -> Result<Matrix, GroupError> {
        let mut m = self.identity();
        for &s in word {
            let g = self.generators.get(s).ok_or_else(|| GroupError::DimensionMismatch(format!("no generator {s}")))?;
            m = m.mul(g)?;
        }
        Ok(m)
    }

    pub fn contains(&self, g: &Matrix) -> Result<bool, GroupError> {
        Ok(self.enumerate()?.index_of(g).is_some())
    }
}

/// Evaluates a representation at an arbitrary group element.
pub type Evaluator = Arc<dyn Fn(&Matrix) -> Result<Matrix, GroupError> + Send + Sync>;

/// A representation given by one image per generator, optionally with a
/// pointwise evaluator. Images may live over a different field than the
/// group (for instance a group over GF(9) acting on a GF(3)-space).
#[derive(Clone)]
pub struct Representation {
    group: MatrixGroup,
    field: Field,
    dim: usize,
    images: Vec<Matrix>,
    evaluator: Option<Evaluator>,
    table: OnceLock<Result<Arc<Vec<Matrix>>, GroupError>>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("group", &self.group)
            .field("field", &self.field)
            .field("dim", &self.dim)
            .field("images", &self.images)
            .finish()
    }
}

impl Representation {
    pub fn new(group: &MatrixGroup, field: &Field, dim: usize, images: Vec<Matrix>) -> Result<Self, GroupError> {
        if images.len() != group.generators().len() {
            return dim_err(format!("{} images for {} generators", images.len(), group.generators().len()));
        }
        for (i, m) in images.iter().enumerate() {
            if m.field() != field {
                return Err(LinalgError::MixedContext.into());
            }
            if m.rows() != dim || m.cols() != dim {
                return dim_err(format!("image {i} is {}x{}, expected {dim}", m.rows(), m.cols()));
            }
            if field.is_zero(&m.det()?) {
                return Err(GroupError::NotInvertible(i));
            }
        }
        Ok(Representation {
            group: group.clone(),
            field: field.clone(),
            dim,
            images,
            evaluator: None,
            table: OnceLock::new(),
        })
    }

    /// Representation computed pointwise; generator images are taken from
    /// the evaluator.
    pub fn from_evaluator(group: &MatrixGroup, field: &Field, dim: usize, eval: Evaluator) -> Result<Self, GroupError> {
        let images = group.generators().iter().map(|g| eval(g)).collect::<Result<Vec<_>, _>>()?;
        let mut rep = Self::new(group, field, dim, images)?;
        rep.evaluator = Some(eval);
        Ok(rep)
    }

    /// The defining representation of a matrix group.
    pub fn natural(group: &MatrixGroup) -> Self {
        Self::new(group, group.field(), group.degree(), group.generators().to_vec()).expect("generators are invertible")
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    pub fn has_evaluator(&self) -> bool {
        self.evaluator.is_some()
    }

    /// Images of every enumerated element, in enumeration order, after
    /// checking the homomorphism property on every Cayley-graph edge.
    pub fn table(&self) -> Result<Arc<Vec<Matrix>>, GroupError> {
        self.table.get_or_init(|| self.build_table().map(Arc::new)).clone()
    }

    fn build_table(&self) -> Result<Vec<Matrix>, GroupError> {
        let gt = self.group.enumerate()?;
        let mut imgs: Vec<Matrix> = Vec::with_capacity(gt.order());
        imgs.push(Matrix::identity(&self.field, self.dim));
        for i in 1..gt.order() {
            let (p, s) = gt.parent[i].expect("non-identity elements have parents");
            imgs.push(imgs[p].mul(&self.images[s])?);
        }
        for i in 0..gt.order() {
            for s in 0..self.images.len() {
                let k = gt.right_mul(i, s);
                if gt.parent[k] == Some((i, s)) {
                    continue;
                }
                if imgs[i].mul(&self.images[s])? != imgs[k] {
                    return Err(GroupError::NotHomomorphism { element: i, generator: s });
                }
            }
        }
        Ok(imgs)
    }

    /// `ρ(g)` for a group element `g`.
    pub fn image_of(&self, g: &Matrix) -> Result<Matrix, GroupError> {
        if let Some(eval) = &self.evaluator {
            return eval(g);
        }
        let gt = self.group.enumerate()?;
        let i = gt.index_of(g).ok_or(GroupError::NotInGroup)?;
        Ok(self.table()?[i].clone())
    }

    /// `ρ` of a generator word.
    pub fn image_of_word(&self, word: &[usize]) -> Result<Matrix, GroupError> {
        let mut m = Matrix::identity(&self.field, self.dim);
        for &s in word {
            let g = self.images.get(s).ok_or_else(|| GroupError::DimensionMismatch(format!("no generator {s}")))?;
            m = m.mul(g)?;
        }
        Ok(m)
    }

    /// Same group, images conjugated: `c · ρ(g) · c⁻¹`.
    pub fn conjugate(&self, c: &Matrix) -> Result<Representation, GroupError> {
        let ci = c.inverse()?;
        let images = self.images.iter().map(|m| c.mul(m)?.mul(&ci)).collect::<Result<Vec<_>, _>>()?;
        Representation::new(&self.group, &self.field, self.dim, images)
    }

    /// Direct sum of two representations of the same group.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, GroupError> {
        if self.group != other.group {
            return dim_err("direct sum of representations of different groups");
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| Matrix::block_diag(&self.field, &[a.clone(), b.clone()]))
            .collect::<Result<Vec<_>, _>>()?;
        Representation::new(&self.group, &self.field, self.dim + other.dim, images)
    }
}
