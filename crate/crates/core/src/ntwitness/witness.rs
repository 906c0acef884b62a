use serde_json::{json, Value};

use super::search::check_family;
use super::{
    adjust_j_symmetric, find_u, fmt_vec, nt_transporter, rescale_closure, AdjustStep, NtError, NtModule, SearchPath,
    SpanReport,
};
use crate::field::laurent::{laurent_gcd_roots, LaurentPoly};
use crate::field::{Field, Scalar};
use crate::linalg::Subspace;

/// The curve `λ ↦ (v_λ, v′_λ)` and its limit as `λ → ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub v: Vec<LaurentPoly>,
    pub v_prime: Vec<LaurentPoly>,
    pub limit: (Vec<Scalar>, Vec<Scalar>),
}

impl Family {
    pub fn to_json(&self, field: &Field) -> Value {
        json!({
            "v_lambda": self.v.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
            "v_prime_lambda": self.v_prime.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(),
            "limit": [fmt_vec(field, &self.limit.0), fmt_vec(field, &self.limit.1)],
        })
    }
}

fn check_symmetric(module: &NtModule, u: &[Scalar]) -> Result<(), NtError> {
    for j in module.positive_weights() {
        if module.apply_j(&module.project(u, j))? != module.project(u, -j) {
            return Err(NtError::AsymmetricInput(j));
        }
    }
    Ok(())
}

/// `v_λ = u₀ + Σ_{i>0} (u_{−i} + λ^{−i} u_i)` and
/// `v′_λ = J u₀ + Σ_{i>0} (u_{−i} + (−1)^i λ^{−i} u_i)`.
pub fn build_family(module: &NtModule, u: &[Scalar]) -> Result<Family, NtError> {
    let f = module.field();
    if u.len() != module.dim() {
        return Err(NtError::InvalidInput("u has the wrong length".into()));
    }
    check_symmetric(module, u)?;
    let ju0 = module.apply_j(&module.project(u, 0))?;
    let mut v = Vec::with_capacity(u.len());
    let mut v_prime = Vec::with_capacity(u.len());
    for (k, &w) in module.weights().iter().enumerate() {
        let (a, b) = match w {
            w if w < 0 => (LaurentPoly::constant(f, u[k].clone()), LaurentPoly::constant(f, u[k].clone())),
            0 => (LaurentPoly::constant(f, u[k].clone()), LaurentPoly::constant(f, ju0[k].clone())),
            w => {
                let sign = if w % 2 == 0 { u[k].clone() } else { f.neg(&u[k]) };
                (LaurentPoly::monomial(f, u[k].clone(), -w), LaurentPoly::monomial(f, sign, -w))
            }
        };
        v.push(a);
        v_prime.push(b);
    }
    let limit = (v.iter().map(|p| p.coeff(0)).collect(), v_prime.iter().map(|p| p.coeff(0)).collect());
    Ok(Family { v, v_prime, limit })
}

/// Outcomes of the four certificate checks, with their evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct Checks {
    /// `g_λ v_λ = v′_λ` with `g_λ = J H(λ)`, as a Laurent identity.
    pub action_identity: bool,
    /// No `λ ≠ 0` puts `v_λ` or `v′_λ` into a member of the family.
    pub family_in_u: bool,
    /// `v, v′` lie off the family, and `u` lies in the submodules they generate.
    pub limit_in_u: bool,
    /// No `λ ≠ 0` gives `(v_λ, v′_λ) = (v, v′)`.
    pub limit_not_attained: bool,
    pub evidence: Value,
}

impl Checks {
    pub fn all_passed(&self) -> bool {
        self.action_identity && self.family_in_u && self.limit_in_u && self.limit_not_attained
    }

    pub fn to_json(&self) -> Value {
        json!({
            "action_identity": self.action_identity,
            "family_in_u": self.family_in_u,
            "limit_in_u": self.limit_in_u,
            "limit_not_attained": self.limit_not_attained,
            "evidence": self.evidence,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessCertificate {
    pub module: NtModule,
    pub subspaces: Vec<Subspace>,
    pub u: Vec<Scalar>,
    pub family: Family,
    pub checks: Checks,
    pub search: Option<SearchPath>,
    pub adjust_steps: Vec<AdjustStep>,
    pub rescale: Option<SpanReport>,
}

impl WitnessCertificate {
    pub fn to_json(&self) -> Value {
        let f = self.module.field();
        json!({
            "module": self.module.to_json(),
            "subspaces": self.subspaces.iter().map(Subspace::to_json).collect::<Vec<_>>(),
            "u": fmt_vec(f, &self.u),
            "search": self.search,
            "adjust_steps": self.adjust_steps,
            "family": self.family.to_json(f),
            "checks": self.checks.to_json(),
            "rescale": self.rescale.as_ref().map(|r| r.to_json(f)),
        })
    }
}

/// Emitted when `u` has no positive-weight support: the torus fixes `u`,
/// so its stabilizer is infinite and properness fails without a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateReport {
    pub u: Vec<Scalar>,
    pub weights_in_support: Vec<i64>,
    /// `H(t) u = u` holds identically in `t`.
    pub torus_fixes_u: bool,
}

impl DegenerateReport {
    pub fn to_json(&self, field: &Field) -> Value {
        json!({
            "u": fmt_vec(field, &self.u),
            "weights_in_support": self.weights_in_support,
            "torus_fixes_u": self.torus_fixes_u,
            "stabilizer": "infinite",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Certificate(Box<WitnessCertificate>),
    Degenerate(DegenerateReport),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Certificate(c) => c.checks.all_passed(),
            Outcome::Degenerate(d) => d.torus_fixes_u,
        }
    }

    pub fn to_json(&self, field: &Field) -> Value {
        match self {
            Outcome::Certificate(c) => json!({"kind": "curve", "certificate": c.to_json()}),
            Outcome::Degenerate(d) => json!({"kind": "infinite_stabilizer", "report": d.to_json(field)}),
        }
    }
}

fn in_union(family: &[Subspace], v: &[Scalar]) -> Result<bool, NtError> {
    for s in family {
        if s.contains(v)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Laurent polynomials `Σ_k a_k p_k` for the rows `a` of the annihilator.
fn membership_polys(s: &Subspace, p: &[LaurentPoly]) -> Result<Vec<LaurentPoly>, NtError> {
    let f = s.field();
    let ann = s.annihilator();
    let mut out = Vec::with_capacity(ann.rows());
    for r in 0..ann.rows() {
        let mut acc = LaurentPoly::zero(f);
        for (k, pk) in p.iter().enumerate() {
            acc = acc.add(&pk.scale(ann.get(r, k)))?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Whether the polynomials have a common nonzero root over the closure.
fn common_root(field: &Field, polys: &[LaurentPoly]) -> Result<(bool, Vec<String>), NtError> {
    if polys.is_empty() {
        return Ok((true, Vec::new()));
    }
    let r = laurent_gcd_roots(polys)?;
    Ok((r.common_nonzero_root, fmt_vec(field, &r.gcd)))
}

fn action_identity(module: &NtModule, fam: &Family) -> Result<bool, NtError> {
    let f = module.field();
    let j = module.jmat();
    for r in 0..module.dim() {
        let mut acc = LaurentPoly::zero(f);
        for (c, &w) in module.weights().iter().enumerate() {
            let e = j.get(r, c);
            if !f.is_zero(e) {
                acc = acc.add(&fam.v[c].shift(w).scale(e))?;
            }
        }
        if acc != fam.v_prime[r] {
            return Ok(false);
        }
    }
    Ok(true)
}

fn run_checks(module: &NtModule, family: &[Subspace], u: &[Scalar], fam: &Family) -> Result<Checks, NtError> {
    let f = module.field();
    let c1 = action_identity(module, fam)?;

    let mut c2 = true;
    let mut c2_ev = Vec::new();
    for s in family {
        let (rv, gv) = common_root(f, &membership_polys(s, &fam.v)?)?;
        let (rp, gp) = common_root(f, &membership_polys(s, &fam.v_prime)?)?;
        c2 &= !rv && !rp;
        c2_ev.push(json!({"v_gcd": gv, "v_prime_gcd": gp, "v_root": rv, "v_prime_root": rp}));
    }

    let (v, vp) = &fam.limit;
    let v_in = in_union(family, v)?;
    let vp_in = in_union(family, vp)?;
    let u_from_v = module.generated_submodule(v)?.contains(u)?;
    let u_from_vp = module.generated_submodule(vp)?.contains(u)?;
    let c3 = !v_in && !vp_in && u_from_v && u_from_vp;

    let mut diffs = Vec::new();
    for (p, l) in fam.v.iter().zip(v).chain(fam.v_prime.iter().zip(vp)) {
        diffs.push(p.sub(&LaurentPoly::constant(f, l.clone()))?);
    }
    let (attained, dgcd) = common_root(f, &diffs)?;

    let evidence = json!({
        "family_in_u": c2_ev,
        "limit_in_u": {
            "v_in_union": v_in,
            "v_prime_in_union": vp_in,
            "u_in_submodule_of_v": u_from_v,
            "u_in_submodule_of_v_prime": u_from_vp,
        },
        "limit_not_attained": {"difference_gcd": dgcd},
    });
    Ok(Checks { action_identity: c1, family_in_u: c2, limit_in_u: c3, limit_not_attained: !attained, evidence })
}

fn require_positive_support(module: &NtModule, u: &[Scalar]) -> Result<(), NtError> {
    let f = module.field();
    if u.iter().zip(module.weights()).any(|(x, &w)| w > 0 && !f.is_zero(x)) {
        Ok(())
    } else {
        Err(NtError::NoPositiveWeightSupport)
    }
}

/// Builds the curve through `u` and runs all four checks. The returned
/// certificate records failures rather than hiding them.
pub fn verify_witness(module: &NtModule, family: &[Subspace], u: &[Scalar]) -> Result<WitnessCertificate, NtError> {
    check_family(module, family)?;
    if u.len() != module.dim() {
        return Err(NtError::InvalidInput("u has the wrong length".into()));
    }
    if in_union(family, u)? {
        return Err(NtError::InvalidInput("u lies in the family".into()));
    }
    check_symmetric(module, u)?;
    require_positive_support(module, u)?;
    let fam = build_family(module, u)?;
    let checks = run_checks(module, family, u, &fam)?;
    Ok(WitnessCertificate {
        module: module.clone(),
        subspaces: family.to_vec(),
        u: u.to_vec(),
        family: fam,
        checks,
        search: None,
        adjust_steps: Vec::new(),
        rescale: None,
    })
}

fn scalar_sequence(field: &Field) -> Vec<Scalar> {
    match field.elements() {
        Some(all) => {
            let mut v: Vec<Scalar> = all.into_iter().filter(|x| !field.is_zero(x) && !field.is_one(x)).collect();
            v.push(field.one());
            v
        }
        None => (2..66).map(|k| field.from_i64(k)).collect(),
    }
}

/// First window of the scalar sequence giving a nonsingular Vandermonde.
fn rescale_report(module: &NtModule, u: &[Scalar]) -> Result<Option<SpanReport>, NtError> {
    let seq = scalar_sequence(module.field());
    for start in 0..seq.len() {
        let window: Vec<Scalar> = seq.iter().cycle().skip(start).take(seq.len()).cloned().collect();
        match rescale_closure(module, u, &window) {
            Ok(r) => return Ok(Some(r)),
            Err(NtError::SingularChoice) | Err(NtError::InvalidInput(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Full pipeline: search, symmetrize, build and verify the curve.
pub fn certify(module: &NtModule, family: &[Subspace], seed: u64) -> Result<Outcome, NtError> {
    check_family(module, family)?;
    let found = find_u(module, family, seed)?;
    let (u, steps) = adjust_j_symmetric(module, family, &found.u, seed)?;
    if let Err(NtError::NoPositiveWeightSupport) = require_positive_support(module, &u) {
        let f = module.field();
        let mut weights: Vec<i64> =
            u.iter().zip(module.weights()).filter(|(x, _)| !f.is_zero(x)).map(|(_, &w)| w).collect();
        weights.sort_unstable();
        weights.dedup();
        let fixes = matches!(nt_transporter(module, &u, &u)?.torus.solution, super::CosetSolution::All);
        return Ok(Outcome::Degenerate(DegenerateReport { u, weights_in_support: weights, torus_fixes_u: fixes }));
    }
    let mut cert = verify_witness(module, family, &u)?;
    cert.search = Some(found.path);
    cert.adjust_steps = steps;
    cert.rescale = rescale_report(module, &u)?;
    Ok(Outcome::Certificate(Box::new(cert)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::nt_module_from_blocks;
    use std::collections::BTreeMap;

    fn lp(f: &Field, c: i64, e: i64) -> LaurentPoly {
        LaurentPoly::monomial(f, f.from_i64(c), e)
    }

    #[test]
    fn w1_family() {
        let f = Field::rationals();
        let m = nt_module_from_blocks(&f, &BTreeMap::from([(1, 1)]), 0, 0).unwrap();
        // Basis (x, y); u = y − x.
        let u = vec![f.from_i64(-1), f.one()];
        let fam = build_family(&m, &u).unwrap();
        assert_eq!(fam.v, vec![lp(&f, -1, 0), lp(&f, 1, -1)]);
        assert_eq!(fam.v_prime, vec![lp(&f, -1, 0), lp(&f, -1, -1)]);
        assert_eq!(fam.limit, (vec![f.from_i64(-1), f.zero()], vec![f.from_i64(-1), f.zero()]));
        let cert = verify_witness(&m, &[Subspace::zero(&f, 2)], &u).unwrap();
        assert!(cert.checks.all_passed());
        assert_eq!(build_family(&m, &[f.zero(), f.one()]).unwrap_err(), NtError::AsymmetricInput(1));
    }

    #[test]
    fn even_weight_sign() {
        let f = Field::rationals();
        let m = nt_module_from_blocks(&f, &BTreeMap::from([(2, 1)]), 0, 0).unwrap();
        // J x² = y², J y² = x²; u = x² + y² is symmetric.
        let u = vec![f.one(), f.one()];
        let fam = build_family(&m, &u).unwrap();
        assert_eq!(fam.v, fam.v_prime);
    }

    #[test]
    fn w2_plus_trivial_sign() {
        let f = Field::prime(7).unwrap();
        let m = nt_module_from_blocks(&f, &BTreeMap::from([(2, 1)]), 0, 1).unwrap();
        let fam = [Subspace::coordinate(&f, 3, &[0, 1]), Subspace::coordinate(&f, 3, &[2])];
        match certify(&m, &fam, 0).unwrap() {
            Outcome::Certificate(c) => assert!(c.checks.all_passed()),
            Outcome::Degenerate(_) => panic!("expected a curve"),
        }
    }

    #[test]
    fn weight_zero_only_is_degenerate() {
        let f = Field::rationals();
        let m = nt_module_from_blocks(&f, &BTreeMap::new(), 1, 0).unwrap();
        assert_eq!(
            verify_witness(&m, &[Subspace::zero(&f, 1)], &[f.one()]).unwrap_err(),
            NtError::NoPositiveWeightSupport
        );
        match certify(&m, &[Subspace::zero(&f, 1)], 0).unwrap() {
            Outcome::Degenerate(d) => assert!(d.torus_fixes_u),
            Outcome::Certificate(_) => panic!("expected the degenerate report"),
        }
    }
}
