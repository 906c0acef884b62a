use std::collections::BTreeMap;

use goodrep::constructions::nt_module_from_blocks;
use goodrep::field::{Field, Scalar};
use goodrep::linalg::Subspace;
use goodrep::ntwitness::{certify, nt_transporter, NtModule, Outcome};
use goodrep::suite::{nt_w1, random_nt_case};
use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;

fn random_module(f: &Field, rng: &mut Pcg64) -> NtModule {
    let mut blocks = BTreeMap::new();
    for _ in 0..1 + rng.next_u64() % 3 {
        *blocks.entry(1 + (rng.next_u64() % 5) as i64).or_insert(0) += 1;
    }
    let m0 = (rng.next_u64() % 2) as usize;
    let m0p = (rng.next_u64() % 2) as usize;
    nt_module_from_blocks(f, &blocks, m0, m0p).unwrap()
}

fn random_vector(f: &Field, n: usize, rng: &mut Pcg64) -> Vec<Scalar> {
    let q = f.order().unwrap();
    // Bias towards zeros so that supports vary.
    (0..n)
        .map(|_| if rng.next_u64().is_multiple_of(3) { f.zero() } else { Scalar::Fin((rng.next_u64() % q) as u32) })
        .collect()
}

#[test]
fn transporter_matches_enumeration_over_small_fields() {
    let mut rng = Pcg64::seed_from_u64(2024);
    let mut nonempty = 0;
    for instance in 0..200 {
        let q = [3u64, 4, 5, 7, 8, 9, 11][instance % 7];
        let f = Field::gf(q).unwrap();
        let m = random_module(&f, &mut rng);
        let units: Vec<Scalar> = f.elements().unwrap().into_iter().filter(|x| !f.is_zero(x)).collect();
        let v = random_vector(&f, m.dim(), &mut rng);
        // Half the time w is an image of v, otherwise unrelated.
        let w = if instance % 2 == 0 {
            let t = &units[(rng.next_u64() as usize) % units.len()];
            let g = if rng.next_u64() % 2 == 0 {
                m.h_matrix(t).unwrap()
            } else {
                m.jmat().mul(&m.h_matrix(t).unwrap()).unwrap()
            };
            g.mat_vec(&v).unwrap()
        } else {
            random_vector(&f, m.dim(), &mut rng)
        };
        let report = nt_transporter(&m, &v, &w).unwrap();
        for t in &units {
            let h = m.h_matrix(t).unwrap();
            let in_t = h.mat_vec(&v).unwrap() == w;
            let in_jt = m.jmat().mul(&h).unwrap().mat_vec(&v).unwrap() == w;
            assert_eq!(report.torus.solution.contains(&f, t).unwrap(), in_t, "instance {instance}");
            assert_eq!(report.j_coset.solution.contains(&f, t).unwrap(), in_jt, "instance {instance}");
            if in_t || in_jt {
                nonempty += 1;
            }
        }
    }
    assert!(nonempty > 100);
}

#[test]
fn w1_family_is_explicit() {
    let (m, fam) = nt_w1();
    let f = m.field().clone();
    let Outcome::Certificate(c) = certify(&m, &fam, 1).unwrap() else { panic!("expected a curve") };
    assert!(c.checks.all_passed());
    let neg1 = f.from_i64(-1);
    assert_eq!(c.family.limit, (vec![neg1.clone(), f.zero()], vec![neg1.clone(), f.zero()]));
    for l in [2i64, 3, -5, 7] {
        let lambda = f.from_i64(l);
        let inv = f.inv(&lambda).unwrap();
        let v: Vec<Scalar> = c.family.v.iter().map(|p| p.eval(&lambda).unwrap()).collect();
        let vp: Vec<Scalar> = c.family.v_prime.iter().map(|p| p.eval(&lambda).unwrap()).collect();
        assert_eq!(v, vec![neg1.clone(), inv.clone()]);
        assert_eq!(vp, vec![neg1.clone(), f.neg(&inv)]);
        let g = m.jmat().mul(&m.h_matrix(&lambda).unwrap()).unwrap();
        assert_eq!(g.mat_vec(&v).unwrap(), vp);
    }
}

#[test]
fn random_modules_are_not_proper() {
    let mut curves = 0;
    for seed in 0..60 {
        let (m, fam) = random_nt_case(seed);
        let outcome = certify(&m, &fam, seed).unwrap();
        assert!(outcome.passed(), "seed {seed}");
        if let Outcome::Certificate(c) = &outcome {
            curves += 1;
            assert!(!fam.iter().any(|s| s.contains(&c.u).unwrap()));
            // u is J-symmetric across opposite weights.
            for j in m.positive_weights() {
                assert_eq!(m.apply_j(&m.project(&c.u, j)).unwrap(), m.project(&c.u, -j));
            }
        }
    }
    assert!(curves > 30);
}

#[test]
fn degenerate_module_reports_infinite_stabilizer() {
    let f = Field::rationals();
    let m = nt_module_from_blocks(&f, &BTreeMap::new(), 1, 1).unwrap();
    let outcome = certify(&m, &[Subspace::zero(&f, 2)], 1).unwrap();
    assert!(matches!(outcome, Outcome::Degenerate(ref d) if d.torus_fixes_u));
}
