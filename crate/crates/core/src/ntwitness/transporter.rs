use serde_json::{json, Value};

use super::{fmt_vec, NtError, NtModule};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::smith::row_relations;

/// Solutions `t` of one coset equation, over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetSolution {
    Empty(String),
    /// Every `t` works (no weight-nonzero constraints).
    All,
    /// Exactly the `t` with `t^g = c`.
    Power {
        g: i64,
        c: Scalar,
    },
}

impl CosetSolution {
    pub fn contains(&self, field: &Field, t: &Scalar) -> Result<bool, NtError> {
        Ok(match self {
            CosetSolution::Empty(_) => false,
            CosetSolution::All => true,
            CosetSolution::Power { g, c } => field.pow(t, *g)? == *c,
        })
    }

    fn to_json(&self, field: &Field) -> Value {
        match self {
            CosetSolution::Empty(reason) => json!({"kind": "empty", "reason": reason}),
            CosetSolution::All => json!({"kind": "all"}),
            CosetSolution::Power { g, c } => json!({"kind": "power", "g": g, "c": field.format(c)}),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetReport {
    pub solution: CosetSolution,
    /// Weights of the constrained coordinates, with `t^{weights[k]} = ratios[k]`.
    pub weights: Vec<i64>,
    pub ratios: Vec<Scalar>,
    /// Basis of the integer relations among `weights`.
    pub relations: Vec<Vec<i64>>,
}

impl CosetReport {
    fn to_json(&self, field: &Field) -> Value {
        json!({
            "solution": self.solution.to_json(field),
            "weights": self.weights,
            "ratios": fmt_vec(field, &self.ratios),
            "relations": self.relations,
        })
    }
}

/// Solutions of `H(t) v = w` and of `J H(t) v = w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransporterReport {
    pub torus: CosetReport,
    pub j_coset: CosetReport,
}

impl TransporterReport {
    pub fn to_json(&self, field: &Field) -> Value {
        json!({"T": self.torus.to_json(field), "JT": self.j_coset.to_json(field)})
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.torus.solution, CosetSolution::Empty(_))
            && matches!(self.j_coset.solution, CosetSolution::Empty(_))
    }
}

fn solve_torus(module: &NtModule, v: &[Scalar], w: &[Scalar]) -> Result<CosetReport, NtError> {
    let f = module.field();
    let empty = |reason: String| CosetReport {
        solution: CosetSolution::Empty(reason),
        weights: Vec::new(),
        ratios: Vec::new(),
        relations: Vec::new(),
    };
    let mut weights = Vec::new();
    let mut ratios = Vec::new();
    for (k, &om) in module.weights().iter().enumerate() {
        match (f.is_zero(&v[k]), f.is_zero(&w[k])) {
            (true, true) => {}
            (true, false) | (false, true) => return Ok(empty(format!("coordinate {k} is zero on one side only"))),
            (false, false) => {
                let r = f.div(&w[k], &v[k])?;
                if om == 0 {
                    if !f.is_one(&r) {
                        return Ok(empty(format!("weight-zero coordinate {k} differs")));
                    }
                } else {
                    weights.push(om);
                    ratios.push(r);
                }
            }
        }
    }
    if weights.is_empty() {
        return Ok(CosetReport { solution: CosetSolution::All, weights, ratios, relations: Vec::new() });
    }
    let (g, b, relations) = row_relations(&weights);
    let power = |exps: &[i64]| -> Result<Scalar, NtError> {
        let mut acc = f.one();
        for (r, &e) in ratios.iter().zip(exps) {
            acc = f.mul(&acc, &f.pow(r, e)?);
        }
        Ok(acc)
    };
    let mut solution = None;
    for rel in &relations {
        if !f.is_one(&power(rel)?) {
            solution = Some(CosetSolution::Empty(format!("relation {rel:?} is violated")));
            break;
        }
    }
    let solution = match solution {
        Some(s) => s,
        None => CosetSolution::Power { g, c: power(&b)? },
    };
    Ok(CosetReport { solution, weights, ratios, relations })
}

/// Elements of `N(T) = T ∪ JT` carrying `v` to `w`.
pub fn nt_transporter(module: &NtModule, v: &[Scalar], w: &[Scalar]) -> Result<TransporterReport, NtError> {
    let n = module.dim();
    let f = module.field();
    if v.len() != n || w.len() != n || v.iter().chain(w).any(|x| !f.contains(x)) {
        return Err(NtError::InvalidInput(format!("vectors must lie in the {n}-dim module")));
    }
    let torus = solve_torus(module, v, w)?;
    let jinv_w = module.jmat().inverse()?.mat_vec(w)?;
    let j_coset = solve_torus(module, v, &jinv_w)?;
    Ok(TransporterReport { torus, j_coset })
}

/// Evidence that `u` lies in the submodule generated by its torus
/// translates: the generalized Vandermonde `A_{pq} = t_q^{i_p}` over the
/// distinct weights `i_p` in the support of `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    pub weights: Vec<i64>,
    pub scalars: Vec<Scalar>,
    pub det: Scalar,
    /// `span{H(t_q) u}` equals the span of the nonzero weight components.
    pub span_equal: bool,
}

impl SpanReport {
    pub fn to_json(&self, field: &Field) -> Value {
        json!({
            "weights": self.weights,
            "scalars": fmt_vec(field, &self.scalars),
            "det": field.format(&self.det),
            "span_equal": self.span_equal,
        })
    }
}

pub fn rescale_closure(module: &NtModule, u: &[Scalar], scalars: &[Scalar]) -> Result<SpanReport, NtError> {
    let f = module.field();
    if u.len() != module.dim() {
        return Err(NtError::InvalidInput("u has the wrong length".into()));
    }
    let mut weights: Vec<i64> =
        u.iter().zip(module.weights()).filter(|(x, _)| !f.is_zero(x)).map(|(_, &w)| w).collect();
    weights.sort_unstable();
    weights.dedup();
    let p = weights.len();
    if scalars.len() < p {
        return Err(NtError::InvalidInput(format!("need {p} scalars, got {}", scalars.len())));
    }
    if scalars.iter().any(|t| f.is_zero(t) || !f.contains(t)) {
        return Err(NtError::InvalidInput("scalars must be nonzero field elements".into()));
    }
    let ts = &scalars[..p];
    let mut rows = Vec::with_capacity(p);
    for &i in &weights {
        rows.push(ts.iter().map(|t| f.pow(t, i)).collect::<Result<Vec<_>, _>>()?);
    }
    let det = Matrix::from_rows(f, rows)?.det()?;
    if f.is_zero(&det) {
        return Err(NtError::SingularChoice);
    }
    let translates =
        ts.iter().map(|t| module.h_matrix(t)?.mat_vec(u).map_err(NtError::from)).collect::<Result<Vec<_>, _>>()?;
    let components: Vec<Vec<Scalar>> = weights.iter().map(|&w| module.project(u, w)).collect();
    let a = Subspace::from_vectors(f, module.dim(), &translates)?;
    let b = Subspace::from_vectors(f, module.dim(), &components)?;
    let span_equal = a == b;
    Ok(SpanReport { weights, scalars: ts.to_vec(), det, span_equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::nt_module_from_blocks;
    use std::collections::BTreeMap;

    fn weighted(f: &Field, weights: Vec<i64>) -> NtModule {
        // Diagonal module with one coordinate per weight and its negative.
        let mut blocks = BTreeMap::new();
        for w in weights {
            *blocks.entry(w).or_insert(0) += 1;
        }
        nt_module_from_blocks(f, &blocks, 0, 0).unwrap()
    }

    #[test]
    fn single_weight_identity() {
        let f = Field::rationals();
        let m = weighted(&f, vec![1]);
        let v = vec![f.zero(), f.one()];
        let r = nt_transporter(&m, &v, &v).unwrap();
        assert_eq!(r.torus.solution, CosetSolution::Power { g: 1, c: f.one() });
        let w = vec![f.zero(), f.from_i64(2)];
        let r = nt_transporter(&m, &v, &w).unwrap();
        assert_eq!(r.torus.solution, CosetSolution::Power { g: 1, c: f.from_i64(2) });
        assert!(matches!(r.j_coset.solution, CosetSolution::Empty(_)));
    }

    #[test]
    fn relation_check() {
        // Coordinates of weights 2 and 3 (the y-parts of W₂ and W₃).
        let f = Field::rationals();
        let m = weighted(&f, vec![2, 3]);
        // Basis order: x², y², x³, y³ per block construction.
        let idx2 = m.weights().iter().position(|&w| w == 2).unwrap();
        let idx3 = m.weights().iter().position(|&w| w == 3).unwrap();
        let mut v = vec![f.zero(); m.dim()];
        v[idx2] = f.one();
        v[idx3] = f.one();
        let mut w = v.clone();
        w[idx3] = f.from_i64(-1);
        let r = nt_transporter(&m, &v, &w).unwrap();
        assert_eq!(r.torus.solution, CosetSolution::Power { g: 1, c: f.from_i64(-1) });
        w[idx2] = f.from_i64(2);
        let r = nt_transporter(&m, &v, &w).unwrap();
        assert!(matches!(r.torus.solution, CosetSolution::Empty(_)));
    }

    #[test]
    fn rescale_vandermonde() {
        let f = Field::rationals();
        let m = weighted(&f, vec![1]);
        let u = vec![f.one(), f.one()];
        let r = rescale_closure(&m, &u, &[f.from_i64(2), f.from_i64(3)]).unwrap();
        // det [[2^-1, 3^-1], [2, 3]] = 3/2 - 2/3.
        assert_eq!(r.det, f.div(&f.from_i64(5), &f.from_i64(6)).unwrap());
        assert!(r.span_equal);
        assert_eq!(rescale_closure(&m, &u, &[f.one(), f.one()]).unwrap_err(), NtError::SingularChoice);
        let single = vec![f.zero(), f.from_i64(4)];
        assert!(rescale_closure(&m, &single, &[f.from_i64(5)]).unwrap().span_equal);
    }
}
