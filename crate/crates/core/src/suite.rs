//! Certificates and the bundled scenario suites.
//!
//! Each runner returns a [`Run`]: a status, the inputs it was given and an
//! evidence payload. [`Certificate::from_run`] adds the command echo, the
//! version, a SHA-256 digest of the inputs and the wall time. Payloads
//! never contain timings, so reruns with the same seed are byte-identical.

use std::collections::BTreeMap;
use std::time::Duration;

use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coinduce::{lemma_check, running_example, CoinduceError, CoinducedModule, CombinedGoodness};
use crate::constructions::{
    char_p_subspace, coefficient_hyperplane, nt_module_from_blocks, pgl2_swap, sl2_group, sym_power, sym_power_of,
    upper_triangular_rep, ConstructionError,
};
use crate::descent::{
    build_psi, check_closed_image_equations, complement_check, corrupted_control, phi_freeness, pointwise_rationality,
    sample_equations, subspace_oracle, DescentError, DescentInput, DescentResult, GroupGaloisAction,
};
use crate::field::galois::GaloisExtension;
use crate::field::{Field, FieldError, Scalar};
use crate::grouprep::{
    check_set_free, fixed_subspace, generated_submodule, is_invariant, stabilizer, transporter, GoodnessSpec,
    GroupError, MatrixGroup, Mode, Representation, Status,
};
use crate::io::{rep_to_json, subspaces_to_json};
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::ntwitness::{certify, Family, NtError, NtModule, Outcome};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Nt(#[from] NtError),
    #[error(transparent)]
    Coinduce(#[from] CoinduceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertStatus {
    Verified,
    Refuted,
    Evidence,
    Error,
}

impl From<Status> for CertStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Verified => CertStatus::Verified,
            Status::Refuted => CertStatus::Refuted,
            Status::Evidence => CertStatus::Evidence,
        }
    }
}

/// Outcome of a runner before it is wrapped into a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub claim: String,
    pub status: CertStatus,
    pub seeds: Vec<u64>,
    pub inputs: Value,
    pub payload: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub command: Vec<String>,
    pub version: String,
    pub seeds: Vec<u64>,
    pub inputs_digest: String,
    pub claim: String,
    pub status: CertStatus,
    pub payload: Value,
    pub wall_time_s: f64,
}

/// Hex SHA-256 of the compact JSON encoding.
pub fn inputs_digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Certificate {
    pub fn from_run(command: Vec<String>, run: Run, wall_time: Duration) -> Self {
        Certificate {
            command,
            version: VERSION.to_string(),
            seeds: run.seeds,
            inputs_digest: inputs_digest(&run.inputs),
            claim: run.claim,
            status: run.status,
            payload: json!({"inputs": run.inputs, "evidence": run.payload}),
            wall_time_s: wall_time.as_secs_f64(),
        }
    }

    pub fn error(command: Vec<String>, claim: &str, err: &dyn std::fmt::Display, wall_time: Duration) -> Self {
        let inputs = Value::Null;
        Certificate {
            command,
            version: VERSION.to_string(),
            seeds: Vec::new(),
            inputs_digest: inputs_digest(&inputs),
            claim: claim.to_string(),
            status: CertStatus::Error,
            payload: json!({"error": err.to_string()}),
            wall_time_s: wall_time.as_secs_f64(),
        }
    }

    /// Canonical bytes of the payload, for determinism comparisons.
    pub fn payload_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(&self.payload).expect("JSON values serialize")
    }
}

fn mode_json(mode: Mode) -> Value {
    match mode {
        Mode::Exhaustive => json!("exhaustive"),
        Mode::Sample { seed, count } => json!({"sample": count, "seed": seed}),
    }
}

fn mode_seeds(mode: Mode) -> Vec<u64> {
    match mode {
        Mode::Exhaustive => Vec::new(),
        Mode::Sample { seed, .. } => vec![seed],
    }
}

fn dims(family: &[Subspace]) -> Vec<usize> {
    family.iter().map(Subspace::dim).collect()
}

/// Set-theoretic freeness of `rep` off the union of `family`.
pub fn run_freeness(rep: &Representation, family: &[Subspace], mode: Mode) -> Result<Run, SuiteError> {
    let spec = GoodnessSpec::new(rep.clone(), family.to_vec())?;
    let report = check_set_free(&spec, mode)?;
    let order = rep.group().order().ok();
    Ok(Run {
        claim: "set-theoretic freeness off the family".into(),
        status: report.status.into(),
        seeds: mode_seeds(mode),
        inputs: json!({
            "rep": rep_to_json(rep),
            "subspaces": subspaces_to_json(family),
            "mode": mode_json(mode),
        }),
        payload: json!({
            "group_order": order,
            "family_dims": dims(family),
            "report": report.to_json(rep.field()),
        }),
    })
}

/// Invariance by enumerating every group element.
pub fn invariant_by_enumeration(rep: &Representation, s: &Subspace) -> Result<bool, SuiteError> {
    for m in rep.table()?.iter() {
        if !s.is_stable_under(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First generator and basis vector carried outside `s`.
fn invariance_witness(rep: &Representation, s: &Subspace) -> Result<Option<Value>, SuiteError> {
    let f = rep.field();
    for (i, m) in rep.images().iter().enumerate() {
        for b in s.basis_vectors() {
            let img = m.mat_vec(&b)?;
            if !s.contains(&img)? {
                let fmt = |v: &[Scalar]| v.iter().map(|x| f.format(x)).collect::<Vec<_>>();
                return Ok(Some(json!({"generator": i, "vector": fmt(&b), "image": fmt(&img)})));
            }
        }
    }
    Ok(None)
}

/// Invariance of each subspace, from the generators and (when the group
/// is enumerable) from every element.
pub fn run_invariance(rep: &Representation, family: &[Subspace]) -> Result<Run, SuiteError> {
    let mut all = true;
    let mut rows = Vec::new();
    for s in family {
        if s.ambient() != rep.dim() || s.field() != rep.field() {
            return Err(SuiteError::Invalid("subspace does not live in the representation space".into()));
        }
        let by_generators = is_invariant(rep, s)?;
        let by_elements = match rep.table() {
            Ok(_) => Some(invariant_by_enumeration(rep, s)?),
            Err(_) => None,
        };
        all &= by_generators;
        rows.push(json!({
            "dim": s.dim(),
            "invariant": by_generators,
            "oracle": by_elements,
            "witness": invariance_witness(rep, s)?,
        }));
    }
    Ok(Run {
        claim: "invariance of the given subspaces".into(),
        status: if all { CertStatus::Verified } else { CertStatus::Refuted },
        seeds: Vec::new(),
        inputs: json!({"rep": rep_to_json(rep), "subspaces": subspaces_to_json(family)}),
        payload: json!({"subspaces": rows}),
    })
}

/// Subspace table of a descent run checked against the enumeration
/// oracle. The flag is true when every constant tuple and every
/// transported tuple is `Ψ`-invariant and both methods agree.
fn descent_subspace_table(res: &DescentResult) -> Result<(bool, Value), SuiteError> {
    let oracle = subspace_oracle(res)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for (s, o) in res.subspaces.iter().zip(&oracle) {
        let constant = s.tuple.iter().all(|&j| j == s.tuple[0]);
        let agree = s.phi_invariant == o.phi_invariant
            && s.psi_invariant == o.psi_invariant
            && s.transported_psi_invariant == o.transported_psi_invariant;
        ok &= agree && s.transported_psi_invariant && (!constant || s.psi_invariant);
        rows.push(json!({
            "tuple": s.tuple,
            "kind": if constant { "constant" } else { "mixed" },
            "phi_invariant": s.phi_invariant,
            "psi_invariant": s.psi_invariant,
            "transported_psi_invariant": s.transported_psi_invariant,
            "oracle_agrees": agree,
        }));
    }
    Ok((ok, Value::Array(rows)))
}

fn descent_inputs(input: &DescentInput) -> Value {
    json!({
        "ext": input.ext.top().to_string(),
        "group": rep_to_json(&input.rep),
        "action": input.action,
    })
}

/// Full descent certificate: `A`, `det A`, `Ψ`, rationality, subspace
/// table, `Φ`-freeness on the complement and the closed-image equations.
pub fn run_descent(input: &DescentInput, samples: usize, seed: u64, mode: Mode) -> Result<Run, SuiteError> {
    let res = build_psi(input)?;
    let top = input.ext.top();
    let det_nonzero = !top.is_zero(&res.det.direct);
    let pointwise = pointwise_rationality(&res)?;
    let (subspaces_ok, table) = descent_subspace_table(&res)?;
    let complement = match complement_check(input) {
        Ok(c) => json!(c),
        Err(e) => json!({"skipped": e.to_string()}),
    };
    let freeness = phi_freeness(&res, mode)?;
    let eq_samples = sample_equations(input, samples, seed)?;
    let mut equations = check_closed_image_equations(input, &eq_samples)?;
    equations.seed = Some(seed);
    let control = match eq_samples.first() {
        Some(s) => Some(corrupted_control(input, s)?),
        None => None,
    };
    let rational = res.rationality.iter().all(|&r| r);
    let pointwise_ok = pointwise.rational_entries && pointwise.galois_fixed && pointwise.consistent;
    let core = det_nonzero && rational && pointwise_ok && equations.passed() && control != Some(false);
    let status = match (core, freeness.status) {
        (true, Status::Verified) => CertStatus::Verified,
        (true, Status::Evidence) => CertStatus::Evidence,
        _ => CertStatus::Refuted,
    };
    let mut seeds = vec![seed];
    seeds.extend(mode_seeds(mode));
    let mut payload = res.to_json();
    let extra = json!({
        "det_nonzero": det_nonzero,
        "pointwise": {
            "elements": pointwise.elements,
            "rational_entries": pointwise.rational_entries,
            "galois_fixed": pointwise.galois_fixed,
            "consistent": pointwise.consistent,
            "first_failure": pointwise.first_failure,
        },
        "subspace_report": table,
        "subspace_claims_hold": subspaces_ok,
        "complement": complement,
        "phi_freeness": freeness.to_json(top),
        "equations": equations,
        "corrupted_control_detected": control,
    });
    if let (Value::Object(p), Value::Object(e)) = (&mut payload, extra) {
        p.extend(e);
    }
    Ok(Run {
        claim: "Galois descent of an upper-triangular action".into(),
        status,
        seeds,
        inputs: json!({"descent": descent_inputs(input), "samples": samples, "mode": mode_json(mode)}),
        payload,
    })
}

/// Subspace-status report of a descent run on its own.
pub fn run_descent_subspaces(input: &DescentInput) -> Result<Run, SuiteError> {
    let res = build_psi(input)?;
    let (ok, table) = descent_subspace_table(&res)?;
    Ok(Run {
        claim: "invariance of the tuple subspaces under the descended action".into(),
        status: if ok { CertStatus::Verified } else { CertStatus::Refuted },
        seeds: Vec::new(),
        inputs: json!({"descent": descent_inputs(input)}),
        payload: json!({"subspace_report": table}),
    })
}

/// GF(9) with `α² = α + 1`.
pub fn gf9_conway() -> Field {
    Field::extension(3, 2, Some(vec![2, 2, 1])).expect("x² + 2x + 2 is irreducible over GF(3)")
}

pub fn b2_gf9_descent() -> Result<DescentInput, SuiteError> {
    let f = gf9_conway();
    let ext = GaloisExtension::of(&f)?;
    let rep = Representation::natural(&crate::constructions::borel_group(&f, 2));
    Ok(DescentInput::new(ext, rep, GroupGaloisAction::RationalPoints)?)
}

/// Copy of `x` in the prime field `fp`, when the denominator allows it.
fn reduce_scalar(src: &Field, x: &Scalar, fp: &Field) -> Option<Scalar> {
    if src == fp {
        return Some(x.clone());
    }
    match x {
        Scalar::Rat(r) => fp.from_rational(r).ok(),
        _ => None,
    }
}

/// The module over `GF(p)`, for modules over `ℚ` or `GF(p)` itself.
fn reduce_module(module: &NtModule, fp: &Field) -> Option<NtModule> {
    let src = module.field();
    let j = module.jmat();
    let entries: Option<Vec<Scalar>> = j.entries().iter().map(|x| reduce_scalar(src, x, fp)).collect();
    let jm = Matrix::new(fp, j.rows(), j.cols(), entries?).ok()?;
    NtModule::new(fp, module.weights().to_vec(), jm).ok()
}

/// For each `λ ∈ GF(p)^*`, the enumerated transporter from `v_λ` to `v′_λ`
/// contains an element acting as `J H(λ)`.
pub fn transporter_cross_check(module: &NtModule, family: &Family, p: u32) -> Result<Value, SuiteError> {
    let fp = Field::prime(p)?;
    let Some(reduced) = reduce_module(module, &fp) else {
        return Ok(json!({"field": fp.to_string(), "agree": false, "reason": "module does not reduce"}));
    };
    let rep = reduced.finite_representation()?;
    let src = module.field();
    let mut agree = true;
    let mut checked = 0usize;
    for lambda in fp.elements().expect("prime fields are finite").into_iter().filter(|x| !fp.is_zero(x)) {
        let eval = |polys: &[crate::field::laurent::LaurentPoly]| -> Option<Vec<Scalar>> {
            polys
                .iter()
                .map(|q| {
                    let coeffs: Option<Vec<Scalar>> = q.coeffs().iter().map(|c| reduce_scalar(src, c, &fp)).collect();
                    crate::field::laurent::LaurentPoly::new(&fp, q.low(), coeffs?).eval(&lambda).ok()
                })
                .collect()
        };
        let (Some(v), Some(w)) = (eval(&family.v), eval(&family.v_prime)) else {
            agree = false;
            break;
        };
        let g_lambda = reduced.jmat().mul(&reduced.h_matrix(&lambda)?)?;
        let found = transporter(&rep, &v, &w)?
            .iter()
            .map(|g| rep.image_of(g))
            .collect::<Result<Vec<_>, _>>()?
            .contains(&g_lambda);
        agree &= found;
        checked += 1;
    }
    Ok(json!({"field": fp.to_string(), "lambdas": checked, "agree": agree}))
}

/// Non-properness certificate for an N(T)-module, with the enumerative
/// cross-check over GF(7) when the module reduces there.
pub fn run_nt_witness(module: &NtModule, family: &[Subspace], seed: u64) -> Result<Run, SuiteError> {
    let outcome = certify(module, family, seed)?;
    let cross = match &outcome {
        Outcome::Certificate(c) => Some(transporter_cross_check(module, &c.family, 7)?),
        Outcome::Degenerate(_) => None,
    };
    let cross_ok = cross.as_ref().is_none_or(|c| c["agree"] == json!(true));
    let status = if outcome.passed() && cross_ok { CertStatus::Verified } else { CertStatus::Refuted };
    Ok(Run {
        claim: "the action on the complement of an invariant family is not proper".into(),
        status,
        seeds: vec![seed],
        inputs: json!({"module": module.to_json(), "subspaces": subspaces_to_json(family), "seed": seed}),
        payload: json!({"outcome": outcome.to_json(module.field()), "transporter_cross_check": cross}),
    })
}

/// W₁ over ℚ with `𝒮 = {0}`.
pub fn nt_w1() -> (NtModule, Vec<Subspace>) {
    let f = Field::rationals();
    let m = nt_module_from_blocks(&f, &BTreeMap::from([(1, 1)]), 0, 0).expect("W₁ is a valid module");
    let zero = Subspace::zero(&f, m.dim());
    (m, vec![zero])
}

/// A random module over ℚ of dimension at most 8 with weights at most 5,
/// and a random family of proper invariant subspaces built from blocks
/// and diagonal copies inside repeated blocks.
pub fn random_nt_case(seed: u64) -> (NtModule, Vec<Subspace>) {
    let f = Field::rationals();
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut pick = |n: u64| rng.next_u64() % n;
    let mut blocks: BTreeMap<i64, usize> = BTreeMap::new();
    let (mut m0, mut m0p, mut dim) = (0usize, 0usize, 0usize);
    let count = 1 + pick(4);
    for _ in 0..count {
        match pick(6) {
            0 if dim < 8 => {
                m0 += 1;
                dim += 1;
            }
            1 if dim < 8 => {
                m0p += 1;
                dim += 1;
            }
            _ if dim + 2 <= 8 => {
                *blocks.entry(1 + pick(5) as i64).or_insert(0) += 1;
                dim += 2;
            }
            _ => {}
        }
    }
    if dim == 0 {
        blocks.insert(1, 1);
    }
    let module = nt_module_from_blocks(&f, &blocks, m0, m0p).expect("positive weights");
    // Coordinate groups: one per W_i copy (x, y), then single W₀ and W₀′ lines.
    let mut units: Vec<(i64, Vec<usize>)> = Vec::new();
    let mut pos = 0;
    for (&w, &c) in &blocks {
        for _ in 0..c {
            units.push((w, vec![pos, pos + 1]));
            pos += 2;
        }
    }
    for _ in 0..m0 {
        units.push((0, vec![pos]));
        pos += 1;
    }
    for _ in 0..m0p {
        units.push((-1, vec![pos]));
        pos += 1;
    }
    let n = module.dim();
    let mut family = Vec::new();
    for _ in 0..pick(3) {
        let mut vectors = Vec::new();
        let diagonal = pick(3) == 0;
        let pair = (0..units.len())
            .flat_map(|a| ((a + 1)..units.len()).map(move |b| (a, b)))
            .find(|&(a, b)| units[a].0 == units[b].0);
        match (diagonal, pair) {
            (true, Some((a, b))) => {
                let c = f.from_i64(1 + pick(3) as i64);
                for (&ca, &cb) in units[a].1.iter().zip(&units[b].1) {
                    let mut v = vec![f.zero(); n];
                    v[ca] = f.one();
                    v[cb] = c.clone();
                    vectors.push(v);
                }
            }
            _ => {
                for (_, coords) in units.iter().filter(|_| pick(2) == 0) {
                    for &k in coords {
                        let mut v = vec![f.zero(); n];
                        v[k] = f.one();
                        vectors.push(v);
                    }
                }
            }
        }
        let s = Subspace::from_vectors(&f, n, &vectors).expect("vectors have the module length");
        if s.dim() < n {
            family.push(s);
        }
    }
    (module, family)
}

/// `count` random cases from consecutive seeds, summarized.
pub fn run_nt_random(count: u64, seed: u64) -> Result<Run, SuiteError> {
    let mut cases = Vec::new();
    let (mut curves, mut degenerate, mut failures) = (0, 0, 0);
    for k in 0..count {
        let case_seed = seed.wrapping_add(k);
        let (module, family) = random_nt_case(case_seed);
        let run = run_nt_witness(&module, &family, case_seed)?;
        let kind = run.payload["outcome"]["kind"].clone();
        if kind == json!("curve") {
            curves += 1;
        } else {
            degenerate += 1;
        }
        let ok = run.status == CertStatus::Verified;
        failures += usize::from(!ok);
        let checks = &run.payload["outcome"]["certificate"]["checks"];
        cases.push(json!({
            "seed": case_seed,
            "weights": module.weights(),
            "family_dims": dims(&family),
            "kind": kind,
            "passed": ok,
            "u": run.payload["outcome"]["certificate"]["u"],
            "checks": if checks.is_null() { Value::Null } else {
                json!([checks["action_identity"], checks["family_in_u"], checks["limit_in_u"], checks["limit_not_attained"]])
            },
            "transporter_cross_check": run.payload["transporter_cross_check"]["agree"],
        }));
    }
    Ok(Run {
        claim: "non-properness certificates for random N(T)-modules".into(),
        status: if failures == 0 { CertStatus::Verified } else { CertStatus::Refuted },
        seeds: vec![seed],
        inputs: json!({"count": count, "seed": seed}),
        payload: json!({"curves": curves, "degenerate": degenerate, "failures": failures, "cases": cases}),
    })
}

/// `L_{2p-2}` is invariant in characteristic `p` for each listed field,
/// and the control hyperplane without `xy` in `V₂` over GF(5) is not.
pub fn run_charp_invariance(fields: &[Field]) -> Result<Run, SuiteError> {
    let mut rows = Vec::new();
    let mut ok = true;
    for f in fields {
        let d = 2 * f.characteristic() as usize - 2;
        let rep = sym_power(f, d).rep;
        let l = char_p_subspace(f, d)?;
        let gens = is_invariant(&rep, &l)?;
        let oracle = invariant_by_enumeration(&rep, &l)?;
        ok &= gens && oracle;
        rows.push(json!({"field": f.to_string(), "degree": d, "invariant": gens, "oracle": oracle}));
    }
    let f5 = Field::prime(5)?;
    let rep = sym_power(&f5, 2).rep;
    let control = coefficient_hyperplane(&f5, 2, 1);
    let control_gens = is_invariant(&rep, &control)?;
    let control_oracle = invariant_by_enumeration(&rep, &control)?;
    ok &= !control_gens && !control_oracle;
    Ok(Run {
        claim: "the hyperplane without the middle monomial is invariant in characteristic p".into(),
        status: if ok { CertStatus::Verified } else { CertStatus::Refuted },
        seeds: Vec::new(),
        inputs: json!({"fields": fields.iter().map(Field::to_string).collect::<Vec<_>>()}),
        payload: json!({
            "cases": rows,
            "control": {
                "field": f5.to_string(),
                "degree": 2,
                "invariant": control_gens,
                "oracle": control_oracle,
                "witness": invariance_witness(&rep, &control)?,
            },
        }),
    })
}

/// `W_p = V_{2p-2} ⊕ V₁` with the family `L_{2p-2} ⊕ V₁`, `V_{2p-2} ⊕ 0`.
pub fn charp_module(field: &Field) -> Result<(Representation, Vec<Subspace>), SuiteError> {
    let d = 2 * field.characteristic() as usize - 2;
    let group = sl2_group(field);
    let big = sym_power_of(&group, d).rep;
    let small = sym_power_of(&group, 1).rep;
    let rep = big.direct_sum(&small)?;
    let l = char_p_subspace(field, d)?;
    let family = vec![
        l.direct_sum(&Subspace::full(field, 2))?,
        Subspace::full(field, d + 1).direct_sum(&Subspace::zero(field, 2))?,
    ];
    Ok((rep, family))
}

/// Exhaustive freeness of `W_p` over each field. With `expect_free` the
/// claim holds when every field verifies; otherwise the run is a
/// refutation as soon as one field yields a witness.
pub fn run_charp_freeness(fields: &[Field], mode: Mode, expect_free: bool) -> Result<Run, SuiteError> {
    let mut rows = Vec::new();
    let mut statuses = Vec::new();
    for f in fields {
        let (rep, family) = charp_module(f)?;
        let report = check_set_free(&GoodnessSpec::new(rep.clone(), family)?, mode)?;
        let stab = match &report.witness {
            Some(w) => Some(stabilizer(&rep, &w.u)?.len()),
            None => None,
        };
        rows.push(json!({
            "field": f.to_string(),
            "group_order": rep.group().order()?,
            "report": report.to_json(f),
            "witness_stabilizer_order": stab,
        }));
        statuses.push(report.status);
        if !expect_free && report.status == Status::Refuted {
            break;
        }
    }
    let status = if statuses.contains(&Status::Refuted) {
        CertStatus::Refuted
    } else if statuses.contains(&Status::Evidence) {
        CertStatus::Evidence
    } else {
        CertStatus::Verified
    };
    Ok(Run {
        claim: "trivial stabilizers on the complement for SL2 acting on forms of degree 2p-2 plus the standard module"
            .into(),
        status,
        seeds: mode_seeds(mode),
        inputs: json!({"fields": fields.iter().map(Field::to_string).collect::<Vec<_>>(), "mode": mode_json(mode)}),
        payload: json!({"cases": rows}),
    })
}

/// For each of `V₂`, `V₄`, `V₂ ⊕ V₄` over `field`, the submodule generated
/// by the fixed points of the swap is the whole space.
pub fn run_pgl2(field: &Field) -> Result<Run, SuiteError> {
    let group = sl2_group(field);
    let swap = MatrixGroup::new(field, 2, vec![pgl2_swap(field)?])?;
    let v2 = sym_power_of(&group, 2).rep;
    let v4 = sym_power_of(&group, 4).rep;
    let cases = [("V2", v2.clone()), ("V4", v4.clone()), ("V2+V4", v2.direct_sum(&v4)?)];
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, rep) in cases {
        let swap_image = rep.image_of(&swap.generators()[0])?;
        let swap_order = if swap_image.is_identity() {
            1
        } else if swap_image.mul(&swap_image)?.is_identity() {
            2
        } else {
            0
        };
        let fixed = fixed_subspace(&rep, &swap)?;
        let generated = generated_submodule(&rep, &fixed)?;
        let full = generated.dim() == rep.dim();
        ok &= full;
        rows.push(json!({
            "module": name,
            "dim": rep.dim(),
            "swap_image_order": swap_order,
            "fixed_dim": fixed.dim(),
            "fixed_basis": fixed.to_json(),
            "generated_dim": generated.dim(),
            "generates_everything": full,
        }));
    }
    Ok(Run {
        claim: "the fixed points of the swap generate the whole module".into(),
        status: if ok { CertStatus::Verified } else { CertStatus::Refuted },
        seeds: Vec::new(),
        inputs: json!({"field": field.to_string()}),
        payload: json!({"swap": pgl2_swap(field)?.to_json(), "cases": rows}),
    })
}

/// Inputs of a combined coinduction check.
#[derive(Clone, Debug)]
pub struct CoinduceInput {
    pub g: MatrixGroup,
    pub h: MatrixGroup,
    pub wrep: Representation,
    pub m_family: Vec<Subspace>,
    pub vrep: Representation,
    pub v_family: Vec<Subspace>,
}

impl CoinduceInput {
    pub fn running_example() -> Self {
        let ex = running_example();
        CoinduceInput { g: ex.g, h: ex.h, wrep: ex.wrep, m_family: ex.m_family, vrep: ex.vrep, v_family: ex.v_family }
    }
}

pub fn run_coinduce(input: &CoinduceInput, mode: Mode, seed: u64) -> Result<Run, SuiteError> {
    let cm = CoinducedModule::build(&input.g, &input.h, &input.wrep)?;
    let cg = CombinedGoodness::new(cm.clone(), input.vrep.clone(), input.v_family.clone(), input.m_family.clone())?;
    let hypothesis = cg.check_hypothesis()?;
    let report = cg.verify(mode)?;
    let lemma = lemma_check(&cg, 200, seed)?;
    let total = cg.total_rep()?;
    let mut seeds = vec![seed];
    seeds.extend(mode_seeds(mode));
    Ok(Run {
        claim: "goodness of V plus the coinduced module off the combined family".into(),
        status: report.status.into(),
        seeds,
        inputs: json!({
            "group": rep_to_json(&Representation::natural(&input.g)),
            "normal": rep_to_json(&Representation::natural(&input.h)),
            "wrep": rep_to_json(&input.wrep),
            "m_family": subspaces_to_json(&input.m_family),
            "vrep": rep_to_json(&input.vrep),
            "v_family": subspaces_to_json(&input.v_family),
            "mode": mode_json(mode),
        }),
        payload: json!({
            "coinduced": cm.to_json()?,
            "monomial_blocks": cm.monomial_block_check()?,
            "l_dims": dims(&cg.l_family),
            "hypothesis": hypothesis,
            "pairs": total.group().order()? as u64 * total.field().order().unwrap_or(0).pow(total.dim() as u32),
            "report": report.to_json(total.field()),
            "lemma": lemma,
        }),
    })
}

/// Settings shared by every scenario of a suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub mode: Mode,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, mode: Mode::Exhaustive }
    }
}

type Runner = fn(&SuiteConfig) -> Result<Run, SuiteError>;

pub struct Scenario {
    pub id: &'static str,
    pub expected: CertStatus,
    pub run: Runner,
}

fn gf(q: u64) -> Result<Field, SuiteError> {
    Ok(if q == 9 { gf9_conway() } else { Field::gf(q)? })
}

fn ut(q: u64, cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    let (rep, family) = upper_triangular_rep(2, &gf(q)?);
    run_freeness(&rep, &family, cfg.mode)
}

fn ut_without_l2(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    let (rep, family) = upper_triangular_rep(2, &gf(3)?);
    run_freeness(&rep, &family[..1], cfg.mode)
}

fn descent_gf9(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    run_descent(&b2_gf9_descent()?, 100, cfg.seed, cfg.mode)
}

fn descent_gf9_subspaces(_: &SuiteConfig) -> Result<Run, SuiteError> {
    run_descent_subspaces(&b2_gf9_descent()?)
}

fn nt_w1_run(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    let (m, fam) = nt_w1();
    run_nt_witness(&m, &fam, cfg.seed)
}

fn nt_random(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    run_nt_random(100, cfg.seed)
}

fn charp_inv(_: &SuiteConfig) -> Result<Run, SuiteError> {
    run_charp_invariance(&[gf(3)?, gf(9)?, gf(2)?, gf(5)?])
}

fn charp_free(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    run_charp_freeness(&[gf(3)?, gf(9)?], cfg.mode, true)
}

fn charp_char2(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    run_charp_freeness(&[gf(2)?, gf(4)?], cfg.mode, false)
}

fn pgl2_gf5(_: &SuiteConfig) -> Result<Run, SuiteError> {
    run_pgl2(&gf(5)?)
}

fn coinduce_running(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    run_coinduce(&CoinduceInput::running_example(), cfg.mode, cfg.seed)
}

fn coinduce_without_m(cfg: &SuiteConfig) -> Result<Run, SuiteError> {
    let mut input = CoinduceInput::running_example();
    input.m_family.clear();
    run_coinduce(&input, cfg.mode, cfg.seed)
}

const SUITES: &[&str] = &["upper-triangular", "descent-gf9", "nt-core", "charp-sl2", "pgl2", "coinduce"];

pub fn suite_names() -> Vec<&'static str> {
    let mut names = SUITES.to_vec();
    names.push("all");
    names
}

pub fn scenarios(name: &str) -> Result<Vec<Scenario>, SuiteError> {
    use CertStatus::{Refuted, Verified};
    let sc = |id, expected, run: Runner| Scenario { id, expected, run };
    Ok(match name {
        "upper-triangular" => vec![
            sc("ut-b2-gf3", Verified, |c| ut(3, c)),
            sc("ut-b2-gf5", Verified, |c| ut(5, c)),
            sc("ut-b2-gf3-without-l2", Refuted, ut_without_l2),
        ],
        "descent-gf9" => vec![
            sc("descent-b2-gf9", Verified, descent_gf9),
            sc("descent-b2-gf9-subspaces", Verified, descent_gf9_subspaces),
        ],
        "nt-core" => vec![sc("nt-w1", Verified, nt_w1_run), sc("nt-random", Verified, nt_random)],
        "charp-sl2" => vec![
            sc("charp-invariance", Verified, charp_inv),
            sc("charp-free-gf3-gf9", Verified, charp_free),
            sc("charp-char2", Refuted, charp_char2),
        ],
        "pgl2" => vec![sc("pgl2-gf5", Verified, pgl2_gf5)],
        "coinduce" => vec![
            sc("coinduce-running", Verified, coinduce_running),
            sc("coinduce-without-m", Refuted, coinduce_without_m),
        ],
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(scenarios(s)?);
            }
            all
        }
        other => return Err(SuiteError::UnknownSuite(other.into())),
    })
}

pub struct ScenarioOutcome {
    pub id: &'static str,
    pub expected: CertStatus,
    pub certificate: Certificate,
}

impl ScenarioOutcome {
    pub fn matched(&self) -> bool {
        self.certificate.status == self.expected
    }
}

pub fn run_scenario(sc: &Scenario, cfg: &SuiteConfig, command: &[String]) -> ScenarioOutcome {
    let start = std::time::Instant::now();
    let certificate = match (sc.run)(cfg) {
        Ok(run) => Certificate::from_run(command.to_vec(), run, start.elapsed()),
        Err(e) => Certificate::error(command.to_vec(), sc.id, &e, start.elapsed()),
    };
    ScenarioOutcome { id: sc.id, expected: sc.expected, certificate }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig, command: &[String]) -> Result<Vec<ScenarioOutcome>, SuiteError> {
    Ok(scenarios(name)?.iter().map(|sc| run_scenario(sc, cfg, command)).collect())
}
