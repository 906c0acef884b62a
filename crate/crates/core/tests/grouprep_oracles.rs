use goodrep::constructions::{char_p_subspace, sym_power, upper_triangular_rep};
use goodrep::field::{Field, Scalar};
use goodrep::grouprep::{
    check_set_free, is_invariant, stabilizer, transporter, GoodnessSpec, Mode, Representation, Status,
};
use goodrep::linalg::{Matrix, Subspace};
use proptest::prelude::*;

fn all_vectors(f: &Field, dim: usize) -> Vec<Vec<Scalar>> {
    let els = f.elements().unwrap();
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|v| els.iter().map(move |x| [v.clone(), vec![x.clone()]].concat())).collect();
    }
    out
}

/// Points of a subspace, by enumerating coefficient vectors on its basis.
fn points(s: &Subspace) -> Vec<Vec<Scalar>> {
    let f = s.field();
    let basis = s.basis_vectors();
    all_vectors(f, basis.len())
        .into_iter()
        .map(|c| {
            let mut v = vec![f.zero(); s.ambient()];
            for (ci, b) in c.iter().zip(&basis) {
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk = f.add(vk, &f.mul(ci, bk));
                }
            }
            v
        })
        .collect()
}

fn packed_index(f: &Field, v: &[Scalar]) -> u64 {
    let q = f.order().unwrap();
    v.iter().rev().fold(0, |acc, x| match x {
        Scalar::Fin(c) => acc * q + *c as u64,
        _ => unreachable!(),
    })
}

/// Kernel-based oracle: fixed points of each `g ≠ 1` lying outside the
/// union. Returns the first such point in packed order.
fn kernel_oracle(rep: &Representation, family: &[Subspace]) -> Option<Vec<Scalar>> {
    let f = rep.field();
    let gt = rep.group().enumerate().unwrap();
    let table = rep.table().unwrap();
    let mut best: Option<Vec<Scalar>> = None;
    for (i, m) in table.iter().enumerate() {
        if gt.element(i).is_identity() {
            continue;
        }
        let fixed = m.sub(&Matrix::identity(f, rep.dim())).unwrap().kernel();
        for p in points(&fixed) {
            if family.iter().any(|s| s.contains(&p).unwrap()) {
                continue;
            }
            if best.as_ref().is_none_or(|b| packed_index(f, &p) < packed_index(f, b)) {
                best = Some(p);
            }
        }
    }
    best
}

fn compare(rep: &Representation, family: Vec<Subspace>) {
    let oracle = kernel_oracle(rep, &family);
    let report = check_set_free(&GoodnessSpec::new(rep.clone(), family).unwrap(), Mode::Exhaustive).unwrap();
    match oracle {
        None => assert_eq!(report.status, Status::Verified),
        Some(u) => {
            assert_eq!(report.status, Status::Refuted);
            let w = report.witness.unwrap();
            assert_eq!(w.u, u);
            assert!(!w.g.is_identity());
            assert_eq!(rep.image_of(&w.g).unwrap().mat_vec(&u).unwrap(), u);
        }
    }
}

#[test]
fn freeness_matches_kernel_oracle_on_examples() {
    for q in [2, 3, 4, 5] {
        let f = Field::gf(q).unwrap();
        let (rep, family) = upper_triangular_rep(2, &f);
        compare(&rep, family.clone());
        compare(&rep, family[..1].to_vec());
        compare(&rep, family[1..].to_vec());
        compare(&rep, Vec::new());
    }
    for q in [2, 3] {
        let f = Field::gf(q).unwrap();
        let rep = sym_power(&f, 2).rep;
        compare(&rep, vec![Subspace::coordinate(&f, 3, &[0, 2])]);
        compare(&rep, Vec::new());
    }
    let f = Field::prime(3).unwrap();
    compare(&sym_power(&f, 4).rep, vec![char_p_subspace(&f, 4).unwrap()]);
}

fn invariant_by_brute_force(rep: &Representation, s: &Subspace) -> bool {
    rep.table().unwrap().iter().all(|m| s.basis_vectors().iter().all(|b| s.contains(&m.mat_vec(b).unwrap()).unwrap()))
}

fn random_subspace(f: &Field, dim: usize, codes: &[u32], rows: usize) -> Subspace {
    let q = f.order().unwrap() as u32;
    let data: Vec<Scalar> = codes.iter().take(rows * dim).map(|c| Scalar::Fin(c % q)).collect();
    Subspace::row_span(&Matrix::new(f, rows, dim, data).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariance_matches_brute_force(rows in 0usize..3, codes in proptest::collection::vec(0u32..100, 6)) {
        let f = Field::prime(3).unwrap();
        let (rep, _) = upper_triangular_rep(2, &f);
        let s = random_subspace(&f, 3, &codes, rows);
        prop_assert_eq!(is_invariant(&rep, &s).unwrap(), invariant_by_brute_force(&rep, &s));
        let v3 = sym_power(&f, 3).rep;
        let mut long = codes.clone();
        long.extend(codes.iter().map(|c| c + 1));
        let t = random_subspace(&f, 4, &long, rows);
        prop_assert_eq!(is_invariant(&v3, &t).unwrap(), invariant_by_brute_force(&v3, &t));
    }

    #[test]
    fn random_families_match_kernel_oracle(k in 0usize..3, codes in proptest::collection::vec(0u32..100, 12)) {
        let f = Field::prime(3).unwrap();
        let (rep, _) = upper_triangular_rep(2, &f);
        let family: Vec<Subspace> = (0..k).map(|i| random_subspace(&f, 3, &codes[i * 6..], 2)).filter(|s| s.dim() < 3).collect();
        compare(&rep, family);
    }

    #[test]
    fn transporter_is_a_stabilizer_coset(v in proptest::collection::vec(0u32..3, 3), w in proptest::collection::vec(0u32..3, 3)) {
        let f = Field::prime(3).unwrap();
        let (rep, _) = upper_triangular_rep(2, &f);
        let v: Vec<Scalar> = v.into_iter().map(Scalar::Fin).collect();
        let w: Vec<Scalar> = w.into_iter().map(Scalar::Fin).collect();
        let stab = stabilizer(&rep, &v).unwrap();
        prop_assert!(stab.iter().any(Matrix::is_identity));
        for a in &stab {
            for b in &stab {
                prop_assert!(stab.contains(&a.mul(b).unwrap()));
            }
        }
        let tr = transporter(&rep, &v, &w).unwrap();
        if let Some(t) = tr.first() {
            prop_assert_eq!(tr.len(), stab.len());
            for s in &stab {
                prop_assert!(tr.contains(&t.mul(s).unwrap()));
            }
        }
    }
}
