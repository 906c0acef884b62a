//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! wall time against a fixed budget; the process fails if any criterion does.

use std::time::{Duration, Instant};

use goodrep::coinduce::{CoinducedModule, CombinedGoodness};
use goodrep::constructions::{
    char_p_subspace, pgl2_swap, sl2_group, sym_power, sym_power_matrix, upper_triangular_rep,
};
use goodrep::descent::{build_psi, tuple_subspace, tuples};
use goodrep::field::{Field, Scalar};
use goodrep::grouprep::{is_invariant, Mode, Representation};
use goodrep::linalg::{Matrix, MatrixJson, Subspace};
use goodrep::suite::{
    b2_gf9_descent, charp_module, nt_w1, run_charp_freeness, run_coinduce, run_descent, run_descent_subspaces,
    run_freeness, run_nt_random, run_nt_witness, run_pgl2, run_suite, suite_names, CertStatus, CoinduceInput,
    SuiteConfig,
};
use serde_json::{json, Value};

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn budget_line(id: usize, name: &str, budget: Duration, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget")),
        Err(e) => (false, e),
    };
    println!(
        "{} criterion {id}: {name:<34} {:>8.3}s (budget {}s)  {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

/// Fixed points of every nonidentity element lie in the union of the family.
fn kernel_oracle(rep: &Representation, family: &[Subspace]) -> Result<bool, String> {
    let f = rep.field();
    let els = f.elements().ok_or("infinite field")?;
    for m in rep.table().map_err(err)?.iter() {
        if m.is_identity() {
            continue;
        }
        let fixed = m.sub(&Matrix::identity(f, rep.dim())).map_err(err)?.kernel();
        let basis = fixed.basis_vectors();
        let mut coeffs = vec![0usize; basis.len()];
        loop {
            let mut v = vec![f.zero(); rep.dim()];
            for (c, b) in coeffs.iter().zip(&basis) {
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk = f.add(vk, &f.mul(&els[*c], bk));
                }
            }
            let inside = family.iter().map(|s| s.contains(&v)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            if !inside.into_iter().any(|x| x) {
                return Ok(false);
            }
            let Some(k) = coeffs.iter().position(|&c| c + 1 < els.len()) else { break };
            coeffs[k] += 1;
            coeffs[..k].iter_mut().for_each(|c| *c = 0);
        }
    }
    Ok(true)
}

fn invariant_by_table(rep: &Representation, s: &Subspace) -> Result<bool, String> {
    for m in rep.table().map_err(err)?.iter() {
        for b in s.basis_vectors() {
            if !s.contains(&m.mat_vec(&b).map_err(err)?).map_err(err)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn status_of(run: &goodrep::suite::Run) -> CertStatus {
    run.status
}

fn criterion_1() -> Check {
    let mut parts = Vec::new();
    for q in [3, 5] {
        let f = Field::prime(q).map_err(err)?;
        let (rep, family) = upper_triangular_rep(2, &f);
        let t = Instant::now();
        let run = run_freeness(&rep, &family, Mode::Exhaustive).map_err(err)?;
        let took = t.elapsed();
        ensure(status_of(&run) == CertStatus::Verified, format!("GF({q}) not verified"))?;
        ensure(took < Duration::from_secs(1), format!("GF({q}) took {took:?}"))?;
        ensure(kernel_oracle(&rep, &family)?, format!("kernel oracle disagrees over GF({q})"))?;
        parts.push(format!("GF({q}) verified in {:.3}s", took.as_secs_f64()));
    }
    Ok(parts.join(", "))
}

/// GF(9) by hand with `α² = α + 1`, as `(c0, c1)`.
fn gf9_mul(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    ((a.0 * b.0 + a.1 * b.1).rem_euclid(3), (a.0 * b.1 + a.1 * b.0 + a.1 * b.1).rem_euclid(3))
}

fn gf9_det_a() -> String {
    let alpha = (0, 1);
    let pow = |e: u32| (0..e).fold((1, 0), |acc, _| gf9_mul(acc, alpha));
    // A = [[α, α³], [α², α⁶]].
    let (d1, d2) = (gf9_mul(alpha, pow(6)), gf9_mul(pow(3), pow(2)));
    format!("[{},{}]", (d1.0 - d2.0).rem_euclid(3), (d1.1 - d2.1).rem_euclid(3))
}

fn criterion_2() -> Check {
    let input = b2_gf9_descent().map_err(err)?;
    let run = run_descent(&input, 100, 1, Mode::Exhaustive).map_err(err)?;
    let p = &run.payload;
    let det = gf9_det_a();
    ensure(det == "[2,2]", format!("oracle det A = {det}"))?;
    ensure(p["det_A"]["direct"] == json!(det), format!("det A = {}", p["det_A"]["direct"]))?;
    ensure(p["det_nonzero"] == json!(true), "det A is zero")?;
    let rational = p["rationality"].as_array().ok_or("no rationality")?;
    ensure(rational.len() == 4 && rational.iter().all(|x| x == &json!(true)), "irrational generator image")?;
    for img in p["psi_base_images"].as_array().ok_or("no base images")? {
        let m: MatrixJson = serde_json::from_value(img.clone()).map_err(err)?;
        ensure(
            m.field == "GF(3)" && m.rows.iter().flatten().all(|x| ["0", "1", "2"].contains(&x.as_str())),
            "Ψ entry outside GF(3)",
        )?;
    }
    let pw = &p["pointwise"];
    ensure(
        pw["elements"] == json!(576) && pw["rational_entries"] == json!(true) && pw["galois_fixed"] == json!(true),
        format!("pointwise rationality {pw}"),
    )?;
    // Points of U₂: pairs of upper-triangular 2×2 matrices over GF(9) with
    // an invertible component, 9³ each with 8·8·9 invertible.
    let u2 = 729u64 * 729 - (729 - 576) * (729 - 576);
    ensure(p["complement"]["in_complement"] == json!(u2), "complement size")?;
    ensure(
        p["phi_freeness"]["status"] == json!("verified") && p["phi_freeness"]["tested"] == json!(u2),
        format!("Φ freeness {}", p["phi_freeness"]),
    )?;
    let eq = &p["equations"];
    ensure(
        eq["samples"] == json!(100) && eq["equation_failures"] == json!(0) && eq["reconstruction_failures"] == json!(0),
        format!("equations {eq}"),
    )?;
    ensure(p["corrupted_control_detected"] == json!(true), "corrupted control passed")?;
    ensure(status_of(&run) == CertStatus::Verified, "descent not verified")?;
    Ok(format!("det A = 2α+2, 576 elements rational, {u2} points free, {} equations hold", eq["equations_checked"]))
}

fn criterion_3() -> Check {
    let input = b2_gf9_descent().map_err(err)?;
    let run = run_descent_subspaces(&input).map_err(err)?;
    let res = build_psi(&input).map_err(err)?;
    let rows = run.payload["subspace_report"].as_array().ok_or("no subspace report")?;
    let all = tuples(input.n(), input.degree());
    ensure(rows.len() == all.len() && all.len() == 4, "expected four tuples")?;
    let mut mixed = Vec::new();
    for (row, tuple) in rows.iter().zip(&all) {
        ensure(row["tuple"] == json!(tuple), "tuple order")?;
        let l = tuple_subspace(&input, tuple).map_err(err)?;
        let direct = invariant_by_table(&res.psi, &l)?;
        let transported = invariant_by_table(&res.psi, &l.image(&res.a_blown).map_err(err)?)?;
        ensure(row["psi_invariant"] == json!(direct), format!("{tuple:?}: report disagrees with oracle"))?;
        ensure(row["transported_psi_invariant"] == json!(transported), format!("{tuple:?}: transported disagrees"))?;
        ensure(transported, format!("{tuple:?}: transported not invariant"))?;
        if tuple[0] == tuple[1] {
            ensure(direct, format!("{tuple:?}: constant tuple not invariant"))?;
        } else {
            mixed.push(format!("{tuple:?}={direct}"));
        }
    }
    ensure(status_of(&run) == CertStatus::Verified, "subspace run not verified")?;
    Ok(format!("constant and transported invariant, oracle agrees on 4 tuples, mixed found: {}", mixed.join(" ")))
}

fn criterion_4() -> Check {
    let (m, fam) = nt_w1();
    let run = run_nt_witness(&m, &fam, 1).map_err(err)?;
    let cert = &run.payload["outcome"]["certificate"];
    let fam_json = &cert["family"];
    // v_λ = −x + λ⁻¹y and v′_λ = −x − λ⁻¹y as Laurent coefficient lists.
    ensure(
        fam_json["v_lambda"] == json!([{"coeffs": ["-1"], "low": 0}, {"coeffs": ["1"], "low": -1}]),
        format!("v_λ = {}", fam_json["v_lambda"]),
    )?;
    ensure(
        fam_json["v_prime_lambda"] == json!([{"coeffs": ["-1"], "low": 0}, {"coeffs": ["-1"], "low": -1}]),
        format!("v′_λ = {}", fam_json["v_prime_lambda"]),
    )?;
    ensure(fam_json["limit"] == json!([["-1", "0"], ["-1", "0"]]), "limit")?;
    // Recompute g_λ v_λ = v′_λ with g_λ = J·diag(λ⁻¹, λ) at sample λ.
    let f = m.field();
    for l in [2i64, -3, 5, 11] {
        let lam = f.from_i64(l);
        let inv = f.inv(&lam).map_err(err)?;
        let v = [f.from_i64(-1), inv.clone()];
        let hv = [f.mul(&inv, &v[0]), f.mul(&lam, &v[1])];
        let gv = [f.neg(&hv[1]), hv[0].clone()];
        ensure(gv == [f.from_i64(-1), f.neg(&inv)], format!("action identity fails at λ={l}"))?;
    }
    let checks = &cert["checks"];
    for c in ["action_identity", "family_in_u", "limit_in_u", "limit_not_attained"] {
        ensure(checks[c] == json!(true), format!("W₁ check {c} failed"))?;
    }
    ensure(run.payload["transporter_cross_check"]["agree"] == json!(true), "W₁ GF(7) cross-check")?;

    let random = run_nt_random(100, 1).map_err(err)?;
    let p = &random.payload;
    ensure(p["failures"] == json!(0), format!("{} random failures", p["failures"]))?;
    let cases = p["cases"].as_array().ok_or("no cases")?;
    ensure(cases.len() == 100, "expected 100 cases")?;
    for c in cases {
        ensure(c["passed"] == json!(true), format!("case {} failed", c["seed"]))?;
        if c["kind"] == json!("curve") {
            ensure(c["transporter_cross_check"] == json!(true), format!("case {} cross-check", c["seed"]))?;
        }
    }
    ensure(status_of(&run) == CertStatus::Verified && status_of(&random) == CertStatus::Verified, "not verified")?;
    Ok(format!("W₁ exact; random: {} curves, {} degenerate, 0 failures", p["curves"], p["degenerate"]))
}

fn criterion_5() -> Check {
    let mut notes = Vec::new();
    for f in [Field::prime(3).map_err(err)?, Field::extension(3, 2, Some(vec![2, 2, 1])).map_err(err)?] {
        let rep = sym_power(&f, 4).rep;
        let l4 = char_p_subspace(&f, 4).map_err(err)?;
        ensure(is_invariant(&rep, &l4).map_err(err)? && invariant_by_table(&rep, &l4)?, format!("L₄ over {f}"))?;
    }
    notes.push("L₄ invariant over GF(3), GF(9)".to_string());

    let gf3 = Field::prime(3).map_err(err)?;
    let gf9 = Field::extension(3, 2, Some(vec![2, 2, 1])).map_err(err)?;
    let free = run_charp_freeness(&[gf3.clone(), gf9.clone()], Mode::Exhaustive, true).map_err(err)?;
    ensure(status_of(&free) == CertStatus::Verified, "W₃ not verified")?;
    for f in [&gf3, &gf9] {
        let (rep, family) = charp_module(f).map_err(err)?;
        ensure(kernel_oracle(&rep, &family)?, format!("kernel oracle disagrees over {f}"))?;
    }
    notes.push("W₃ free for q=3,9".into());

    let gf2 = Field::prime(2).map_err(err)?;
    let gf4 = Field::gf(4).map_err(err)?;
    let char2 = run_charp_freeness(&[gf2, gf4], Mode::Exhaustive, false).map_err(err)?;
    ensure(status_of(&char2) == CertStatus::Refuted, "char 2 not refuted")?;
    let case = char2.payload["cases"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["report"]["status"] == json!("refuted")))
        .ok_or("no refuted case")?;
    let f = Field::parse(case["field"].as_str().ok_or("field")?).map_err(err)?;
    let w = &case["report"]["witness"];
    let g = Matrix::from_json(&serde_json::from_value(w["g"].clone()).map_err(err)?, None).map_err(err)?;
    let u: Vec<Scalar> = w["u"]
        .as_array()
        .ok_or("u")?
        .iter()
        .map(|x| f.parse_scalar(x.as_str().unwrap_or("")))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    // Act on forms of degree 2 and degree 1 by substitution.
    ensure(!g.is_identity(), "witness element is the identity")?;
    let moved = [
        sym_power_matrix(&g, 2).mat_vec(&u[..3]).map_err(err)?,
        sym_power_matrix(&g, 1).mat_vec(&u[3..]).map_err(err)?,
    ]
    .concat();
    ensure(moved == u, "witness is not fixed")?;
    let (_, family) = charp_module(&f).map_err(err)?;
    for s in &family {
        ensure(!s.contains(&u).map_err(err)?, "witness lies in the family")?;
    }
    notes.push(format!("{f} witness u={} fixed by g≠1", w["u"]));
    Ok(notes.join("; "))
}

fn criterion_6() -> Check {
    let f = Field::prime(5).map_err(err)?;
    let run = run_pgl2(&f).map_err(err)?;
    ensure(status_of(&run) == CertStatus::Verified, "pgl2 not verified")?;
    let swap = pgl2_swap(&f).map_err(err)?;
    let group = sl2_group(&f);
    let v2 = goodrep::constructions::sym_power_of(&group, 2).rep;
    let v4 = goodrep::constructions::sym_power_of(&group, 4).rep;
    let mods = [("V2", v2.clone()), ("V4", v4.clone()), ("V2+V4", v2.direct_sum(&v4).map_err(err)?)];
    let cases = run.payload["cases"].as_array().ok_or("no cases")?;
    let mut dims = Vec::new();
    for ((name, rep), case) in mods.iter().zip(cases) {
        ensure(case["module"] == json!(name), "case order")?;
        // Fixed space of the swap, then closure under the whole group.
        let s = rep.image_of(&swap).map_err(err)?;
        let mut span = s.sub(&Matrix::identity(&f, rep.dim())).map_err(err)?.kernel();
        let fixed_dim = span.dim();
        loop {
            let mut vecs = span.basis_vectors();
            for m in rep.table().map_err(err)?.iter() {
                for b in span.basis_vectors() {
                    vecs.push(m.mat_vec(&b).map_err(err)?);
                }
            }
            let next = Subspace::from_vectors(&f, rep.dim(), &vecs).map_err(err)?;
            if next.dim() == span.dim() {
                break;
            }
            span = next;
        }
        ensure(span.dim() == rep.dim(), format!("{name}: generated {} of {}", span.dim(), rep.dim()))?;
        ensure(
            case["generated_dim"] == json!(span.dim()) && case["fixed_dim"] == json!(fixed_dim),
            format!("{name}: report"),
        )?;
        dims.push(format!("{name}: fixed {fixed_dim} generates {}", rep.dim()));
    }
    Ok(dims.join(", "))
}

fn criterion_7() -> Check {
    let input = CoinduceInput::running_example();
    let run = run_coinduce(&input, Mode::Exhaustive, 1).map_err(err)?;
    ensure(status_of(&run) == CertStatus::Verified, "running example not verified")?;
    let pairs = run.payload["pairs"].as_u64().ok_or("pairs")?;
    ensure(pairs <= 3u64.pow(10) * 12, format!("{pairs} pairs"))?;

    let mut without = input.clone();
    without.m_family.clear();
    let refuted = run_coinduce(&without, Mode::Exhaustive, 1).map_err(err)?;
    ensure(status_of(&refuted) == CertStatus::Refuted, "removing M₁ did not refute")?;
    let w = &refuted.payload["report"]["witness"];
    let f = input.g.field().clone();
    let g = Matrix::from_json(&serde_json::from_value(w["g"].clone()).map_err(err)?, None).map_err(err)?;
    let u: Vec<Scalar> = w["u"]
        .as_array()
        .ok_or("u")?
        .iter()
        .map(|x| f.parse_scalar(x.as_str().unwrap_or("")))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let cm = CoinducedModule::build(&without.g, &without.h, &without.wrep).map_err(err)?;
    let cg =
        CombinedGoodness::new(cm.clone(), without.vrep.clone(), without.v_family.clone(), Vec::new()).map_err(err)?;
    ensure(!g.is_identity(), "witness element is the identity")?;
    // V part acts by the diagonal; the Γ part by (g·γ)(x) = γ(xg).
    let v = &u[..2];
    ensure(f.mul(g.get(0, 0), &v[0]) == v[0] && f.mul(g.get(1, 1), &v[1]) == v[1], "V part not fixed")?;
    let gamma = &u[2..];
    let moved = cm.representation().image_of(&g).map_err(err)?.mat_vec(gamma).map_err(err)?;
    for x in input.g.enumerate().map_err(err)?.elements() {
        let lhs = cm.evaluate(&moved, x).map_err(err)?;
        let rhs = cm.evaluate(gamma, &x.mul(&g).map_err(err)?).map_err(err)?;
        ensure(lhs == rhs, "coinduced action formula")?;
        ensure(lhs == cm.evaluate(gamma, x).map_err(err)?, "Γ part not fixed")?;
    }
    for s in cg.family().map_err(err)? {
        ensure(!s.contains(&u).map_err(err)?, "witness lies in the family")?;
    }
    Ok(format!("verified over {pairs} pairs; without M₁ refuted by u={}", w["u"]))
}

fn criterion_8() -> Check {
    let cfg = SuiteConfig::default();
    let mut count = 0;
    for name in suite_names().into_iter().filter(|n| *n != "all") {
        let first = run_suite(name, &cfg, &[]).map_err(err)?;
        let second = run_suite(name, &cfg, &[]).map_err(err)?;
        for (a, b) in first.iter().zip(&second) {
            ensure(a.matched(), format!("{} did not match its expected status", a.id))?;
            ensure(a.certificate.payload_bytes() == b.certificate.payload_bytes(), format!("{} differs", a.id))?;
            ensure(a.certificate.inputs_digest == b.certificate.inputs_digest, format!("{} digest differs", a.id))?;
            ensure(a.certificate.payload != Value::Null, format!("{} has no payload", a.id))?;
            count += 1;
        }
    }
    Ok(format!("{count} scenario payloads byte-identical across two runs"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("upper-triangular freeness", 1, criterion_1),
        ("Galois descent over GF(9)", 60, criterion_2),
        ("descent subspace report", 60, criterion_3),
        ("N(T) witness", 30, criterion_4),
        ("char-p example", 120, criterion_5),
        ("PGL2 obstruction", 5, criterion_6),
        ("coinduction", 600, criterion_7),
        ("determinism", 600, criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, secs, check)) in criteria.into_iter().enumerate() {
        if !budget_line(i + 1, name, Duration::from_secs(secs), check) {
            failed += 1;
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
