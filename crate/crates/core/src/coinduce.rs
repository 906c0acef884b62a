//! Coinduced modules for a normal subgroup of a finite matrix group.
//!
//! For `H ⊲ G` and an `H`-module `W`, `Γ` is the space of functions
//! `γ: G → W` with `γ(gh) = h^{-1}·γ(g)`, stored by their values on a left
//! coset transversal `g_1, …, g_m`. `G` acts by `(g·γ)(g_0) = γ(g^{-1}g_0)`.

use std::sync::Arc;

use rand_core::SeedableRng;
use rand_pcg::Pcg64;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::Scalar;
use crate::grouprep::compact::Packed;
use crate::grouprep::{
    check_set_free, is_invariant, random_vector, stabilizer, FreenessReport, GoodnessSpec, GroupError, GroupTable,
    MatrixGroup, Mode, Representation,
};
use crate::linalg::{LinalgError, Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoinduceError {
    #[error("generator {0} of H is not in G")]
    NotSubgroup(usize),
    #[error("conjugating H generator {h} by G generator {g} leaves H")]
    NotNormal { g: usize, h: usize },
    #[error("M-family member {0} is not H-invariant")]
    NotHInvariant(usize),
    #[error("L-subspace {0} is not G-invariant")]
    LNotInvariant(usize),
    #[error("V-family member {0} is not G-invariant")]
    VNotInvariant(usize),
    #[error("V-point {point:?} off the family has stabilizer of order {order}, not H")]
    HypothesisFailed { point: Vec<String>, order: usize },
    #[error("coinduced action check failed: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug)]
pub struct CoinducedModule {
    g: MatrixGroup,
    h: MatrixGroup,
    wrep: Representation,
    /// Indices (in `G`'s enumeration) of the coset representatives.
    reps: Vec<usize>,
    /// For each element `x` of `G`: `(l, h)` with `x = g_l · h`, `h` an index into `H`.
    coset_of: Vec<(usize, usize)>,
    rep: Representation,
}

impl CoinducedModule {
    pub fn build(g: &MatrixGroup, h: &MatrixGroup, wrep: &Representation) -> Result<Self, CoinduceError> {
        if wrep.group() != h {
            return Err(CoinduceError::DimensionMismatch("W must be a representation of H".into()));
        }
        for (i, x) in h.generators().iter().enumerate() {
            if !g.contains(x)? {
                return Err(CoinduceError::NotSubgroup(i));
            }
        }
        for (gi, x) in g.generators().iter().enumerate() {
            let xi = x.inverse()?;
            for (hi, y) in h.generators().iter().enumerate() {
                if !h.contains(&x.mul(y)?.mul(&xi)?)? {
                    return Err(CoinduceError::NotNormal { g: gi, h: hi });
                }
            }
        }
        let gt = g.enumerate()?;
        let ht = h.enumerate()?;
        let wt = wrep.table()?;
        let mut covered = vec![false; gt.order()];
        let mut reps = Vec::new();
        let mut coset_of = vec![(0, 0); gt.order()];
        for i in 0..gt.order() {
            if covered[i] {
                continue;
            }
            let l = reps.len();
            reps.push(i);
            for (hi, y) in ht.elements().iter().enumerate() {
                let k = gt.index_of(&gt.element(i).mul(y)?).expect("H lies in G");
                covered[k] = true;
                coset_of[k] = (l, hi);
            }
        }
        let field = wrep.field();
        let dw = wrep.dim();
        let m = reps.len();
        let action = |x: &Matrix| -> Result<Matrix, CoinduceError> {
            let xi = x.inverse()?;
            let mut out = Matrix::zeros(field, m * dw, m * dw);
            for (l, &r) in reps.iter().enumerate() {
                let y = xi.mul(gt.element(r))?;
                let yi = gt.index_of(&y).ok_or(GroupError::NotInGroup)?;
                let (k, hi) = coset_of[yi];
                let block = wt[hi].inverse()?;
                for a in 0..dw {
                    for b in 0..dw {
                        out.set(l * dw + a, k * dw + b, block.get(a, b).clone());
                    }
                }
            }
            Ok(out)
        };
        let images = g.generators().iter().map(&action).collect::<Result<Vec<_>, _>>()?;
        let rep = Representation::new(g, field, m * dw, images)?;
        let table = rep.table()?;
        for (i, x) in gt.elements().iter().enumerate() {
            if action(x)? != table[i] {
                return Err(CoinduceError::Inconsistent(format!("action formula disagrees at element {i}")));
            }
        }
        let cm = CoinducedModule { g: g.clone(), h: h.clone(), wrep: wrep.clone(), reps, coset_of, rep };
        cm.check_equivariance(&gt, &ht)?;
        Ok(cm)
    }

    /// Reconstructs every basis function on all of `G` and checks
    /// `γ(xh) = h^{-1}·γ(x)`.
    fn check_equivariance(&self, gt: &Arc<GroupTable>, ht: &Arc<GroupTable>) -> Result<(), CoinduceError> {
        let f = self.wrep.field();
        for b in 0..self.rep.dim() {
            let mut e = vec![f.zero(); self.rep.dim()];
            e[b] = f.one();
            for x in gt.elements() {
                let gx = self.evaluate(&e, x)?;
                for y in ht.elements() {
                    let lhs = self.evaluate(&e, &x.mul(y)?)?;
                    let rhs = self.wrep.image_of(y)?.inverse()?.mat_vec(&gx)?;
                    if lhs != rhs {
                        return Err(CoinduceError::Inconsistent("equivariance fails".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &MatrixGroup {
        &self.g
    }

    pub fn normal(&self) -> &MatrixGroup {
        &self.h
    }

    pub fn wrep(&self) -> &Representation {
        &self.wrep
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn transversal(&self) -> Result<Vec<Matrix>, CoinduceError> {
        let gt = self.g.enumerate()?;
        Ok(self.reps.iter().map(|&r| gt.element(r).clone()).collect())
    }

    /// `γ(x)` from the stored values `γ(g_l)`.
    pub fn evaluate(&self, gamma: &[Scalar], x: &Matrix) -> Result<Vec<Scalar>, CoinduceError> {
        let gt = self.g.enumerate()?;
        let xi = gt.index_of(x).ok_or(GroupError::NotInGroup)?;
        let (l, hi) = self.coset_of[xi];
        let dw = self.wrep.dim();
        let ht = self.h.enumerate()?;
        let value = &gamma[l * dw..(l + 1) * dw];
        Ok(self.wrep.image_of(ht.element(hi))?.inverse()?.mat_vec(value)?)
    }

    /// Every action matrix has exactly one nonzero `dim W` block per block
    /// row, and that block is invertible.
    pub fn monomial_block_check(&self) -> Result<bool, CoinduceError> {
        let dw = self.wrep.dim();
        let f = self.wrep.field();
        for m in self.rep.table()?.iter() {
            for l in 0..self.index() {
                let mut nonzero = 0;
                for k in 0..self.index() {
                    let b = m.block(l, k, dw);
                    if !b.is_zero() {
                        nonzero += 1;
                        if f.is_zero(&b.det()?) {
                            return Ok(false);
                        }
                    }
                }
                if nonzero != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `L = {γ : every value lies in M}` for each `M`; each is checked
    /// `G`-invariant.
    pub fn l_subspaces(&self, m_family: &[Subspace]) -> Result<Vec<Subspace>, CoinduceError> {
        let mut out = Vec::with_capacity(m_family.len());
        for (i, mi) in m_family.iter().enumerate() {
            if mi.ambient() != self.wrep.dim() {
                return Err(CoinduceError::DimensionMismatch(format!("M {i} is not a subspace of W")));
            }
            if !is_invariant(&self.wrep, mi)? {
                return Err(CoinduceError::NotHInvariant(i));
            }
            let mut l = Subspace::zero(self.wrep.field(), 0);
            for _ in 0..self.index() {
                l = l.direct_sum(mi)?;
            }
            if !is_invariant(&self.rep, &l)? {
                return Err(CoinduceError::LNotInvariant(i));
            }
            out.push(l);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<Value, CoinduceError> {
        Ok(json!({
            "index": self.index(),
            "gamma_dim": self.dim(),
            "transversal": self.transversal()?.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "action_images": self.rep.images().iter().map(Matrix::to_json).collect::<Vec<_>>(),
        }))
    }
}

/// `V ⊕ Γ` with the families `{V_j ⊕ Γ}` and `{V ⊕ L_i}`.
#[derive(Clone, Debug)]
pub struct CombinedGoodness {
    pub cm: CoinducedModule,
    pub vrep: Representation,
    pub v_family: Vec<Subspace>,
    pub m_family: Vec<Subspace>,
    pub l_family: Vec<Subspace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    /// `V`-points off the family whose stabilizer was compared with `H`.
    pub points: u64,
    pub holds: bool,
}

impl CombinedGoodness {
    pub fn new(
        cm: CoinducedModule,
        vrep: Representation,
        v_family: Vec<Subspace>,
        m_family: Vec<Subspace>,
    ) -> Result<Self, CoinduceError> {
        if vrep.group() != cm.group() || vrep.field() != cm.wrep.field() {
            return Err(CoinduceError::DimensionMismatch("V must be a representation of G over the field of W".into()));
        }
        for (j, s) in v_family.iter().enumerate() {
            if !is_invariant(&vrep, s)? {
                return Err(CoinduceError::VNotInvariant(j));
            }
        }
        let l_family = cm.l_subspaces(&m_family)?;
        Ok(CombinedGoodness { cm, vrep, v_family, m_family, l_family })
    }

    pub fn total_rep(&self) -> Result<Representation, CoinduceError> {
        Ok(self.vrep.direct_sum(&self.cm.rep)?)
    }

    pub fn family(&self) -> Result<Vec<Subspace>, CoinduceError> {
        let f = self.vrep.field();
        let gamma = Subspace::full(f, self.cm.dim());
        let v = Subspace::full(f, self.vrep.dim());
        let mut out = Vec::new();
        for s in &self.v_family {
            out.push(s.direct_sum(&gamma)?);
        }
        for l in &self.l_family {
            out.push(v.direct_sum(l)?);
        }
        Ok(out)
    }

    /// Checks that every `V`-point off `∪V_j` has stabilizer exactly `H`.
    pub fn check_hypothesis(&self) -> Result<HypothesisReport, CoinduceError> {
        let f = self.vrep.field();
        let dim = self.vrep.dim();
        let packed = Packed::new(f, dim, crate::grouprep::EXHAUSTIVE_LIMIT)
            .ok_or_else(|| GroupError::SearchTooLarge(format!("{f}^{dim}")))?;
        let ht = self.cm.h.enumerate()?;
        let mut codes = vec![0u32; dim];
        let mut points = 0;
        for idx in 0..packed.total() {
            packed.decode(idx, &mut codes);
            let v = Packed::to_scalars(&codes);
            let mut off = true;
            for s in &self.v_family {
                if s.contains(&v)? {
                    off = false;
                    break;
                }
            }
            if !off {
                continue;
            }
            points += 1;
            let stab = stabilizer(&self.vrep, &v)?;
            let equal = stab.len() == ht.order() && stab.iter().all(|x| ht.index_of(x).is_some());
            if !equal {
                return Err(CoinduceError::HypothesisFailed {
                    point: v.iter().map(|x| f.format(x)).collect(),
                    order: stab.len(),
                });
            }
        }
        Ok(HypothesisReport { points, holds: true })
    }

    /// Stabilizers are trivial on the complement of the combined family.
    pub fn verify(&self, mode: Mode) -> Result<FreenessReport, CoinduceError> {
        self.check_hypothesis()?;
        let spec = GoodnessSpec::new(self.total_rep()?, self.family()?)?;
        Ok(check_set_free(&spec, mode)?)
    }
}

/// For sampled `γ` off every `L_i`, whether some coset value avoids every `M_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub sampled: usize,
    pub off_family: usize,
    pub violations: usize,
}

pub fn lemma_check(cg: &CombinedGoodness, count: usize, seed: u64) -> Result<LemmaReport, CoinduceError> {
    let f = cg.vrep.field();
    let dw = cg.cm.wrep.dim();
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut report = LemmaReport { seed, sampled: count, off_family: 0, violations: 0 };
    let in_any = |fam: &[Subspace], v: &[Scalar]| -> Result<bool, CoinduceError> {
        for s in fam {
            if s.contains(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    for _ in 0..count {
        let gamma = random_vector(f, cg.cm.dim(), &mut rng);
        if in_any(&cg.l_family, &gamma)? {
            continue;
        }
        report.off_family += 1;
        let mut found = false;
        for l in 0..cg.cm.index() {
            if !in_any(&cg.m_family, &gamma[l * dw..(l + 1) * dw])? {
                found = true;
                break;
            }
        }
        report.violations += usize::from(!found);
    }
    Ok(report)
}

/// The running example over GF(3): `G = B₂`, `H` its unipotent radical,
/// `W` the standard `H`-module with `M₁ = {y = 0}`, and `V` the torus
/// module `g ↦ diag(g_11, g_22)` with its coordinate lines.
pub struct RunningExample {
    pub g: MatrixGroup,
    pub h: MatrixGroup,
    pub wrep: Representation,
    pub m_family: Vec<Subspace>,
    pub vrep: Representation,
    pub v_family: Vec<Subspace>,
}

pub fn running_example() -> RunningExample {
    let f = crate::field::Field::prime(3).expect("3 is prime");
    let g = crate::constructions::borel_group(&f, 2);
    let h = MatrixGroup::new(&f, 2, vec![Matrix::from_i64(&f, &[&[1, 1], &[0, 1]])]).expect("invertible");
    let wrep = Representation::natural(&h);
    let m_family = vec![Subspace::coordinate(&f, 2, &[0])];
    let images =
        g.generators().iter().map(|x| Matrix::diagonal(&f, &[x.get(0, 0).clone(), x.get(1, 1).clone()])).collect();
    let vrep = Representation::new(&g, &f, 2, images).expect("diagonal images are invertible");
    let v_family = vec![Subspace::coordinate(&f, 2, &[0]), Subspace::coordinate(&f, 2, &[1])];
    RunningExample { g, h, wrep, m_family, vrep, v_family }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::grouprep::Status;

    #[test]
    fn running_example_dimensions() {
        let ex = running_example();
        let cm = CoinducedModule::build(&ex.g, &ex.h, &ex.wrep).unwrap();
        assert_eq!(cm.index(), 4);
        assert_eq!(cm.dim(), 8);
        assert!(cm.monomial_block_check().unwrap());
        let ls = cm.l_subspaces(&ex.m_family).unwrap();
        assert_eq!(ls[0].dim(), 4);
        let f = Field::prime(3).unwrap();
        assert_eq!(cm.l_subspaces(&[Subspace::full(&f, 2)]).unwrap()[0].dim(), 8);
        assert_eq!(cm.l_subspaces(&[Subspace::zero(&f, 2)]).unwrap()[0].dim(), 0);
        assert_eq!(cm.l_subspaces(&[Subspace::coordinate(&f, 2, &[1])]).unwrap_err(), CoinduceError::NotHInvariant(0));
    }

    #[test]
    fn index_one_and_trivial_subgroup() {
        let ex = running_example();
        let f = Field::prime(3).unwrap();
        let cm = CoinducedModule::build(&ex.g, &ex.g, &Representation::natural(&ex.g)).unwrap();
        assert_eq!(cm.dim(), 2);
        let triv = MatrixGroup::trivial(&f, 2);
        let w = Representation::new(&triv, &f, 1, vec![]).unwrap();
        let cm = CoinducedModule::build(&ex.g, &triv, &w).unwrap();
        assert_eq!(cm.dim(), 12);
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let f = Field::prime(3).unwrap();
        let g = crate::constructions::borel_group(&f, 2);
        let h = MatrixGroup::new(&f, 2, vec![Matrix::from_i64(&f, &[&[2, 0], &[0, 1]])]).unwrap();
        let w = Representation::natural(&h);
        assert!(matches!(CoinducedModule::build(&g, &h, &w), Err(CoinduceError::NotNormal { .. })));
    }

    #[test]
    fn running_example_verdicts() {
        let ex = running_example();
        let cm = CoinducedModule::build(&ex.g, &ex.h, &ex.wrep).unwrap();
        let cg = CombinedGoodness::new(cm.clone(), ex.vrep.clone(), ex.v_family.clone(), ex.m_family.clone()).unwrap();
        assert_eq!(cg.verify(Mode::Exhaustive).unwrap().status, Status::Verified);
        let lemma = lemma_check(&cg, 200, 1).unwrap();
        assert_eq!(lemma.violations, 0);
        let bare = CombinedGoodness::new(cm, ex.vrep, ex.v_family, vec![]).unwrap();
        let r = bare.verify(Mode::Exhaustive).unwrap();
        assert_eq!(r.status, Status::Refuted);
        assert!(r.witness.is_some());
    }
}
