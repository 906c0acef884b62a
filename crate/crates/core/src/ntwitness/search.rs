use rand_core::SeedableRng;
use rand_pcg::Pcg64;
use serde::Serialize;

use super::{NtError, NtModule};
use crate::field::{Field, Scalar};
use crate::grouprep::compact::Packed;
use crate::grouprep::random_vector;
use crate::linalg::Subspace;

const SWEEP_BITS: usize = 20;
const SAMPLES: u64 = 256;
const EXHAUSTIVE_LIMIT: u64 = 1 << 24;

/// Where a search found its point: phase `sweep` (0/1 coefficient vectors
/// as a binary counter, first coordinate lowest), `sample` (seeded random
/// coefficients), `exhaustive` (all rational points in packed order), or
/// `u_j` (the existing weight component, for symmetrization).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SearchPath {
    pub phase: String,
    pub step: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Searched {
    pub u: Vec<Scalar>,
    pub path: SearchPath,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AdjustStep {
    pub weight: i64,
    pub path: SearchPath,
}

fn path(phase: &str, step: u64, seed: u64) -> SearchPath {
    SearchPath { phase: phase.to_string(), step, seed }
}

/// Runs the three search phases over nonzero coefficient vectors of length `k`.
fn search(
    field: &Field,
    k: usize,
    seed: u64,
    mut accept: impl FnMut(&[Scalar]) -> Result<bool, NtError>,
) -> Result<Option<(Vec<Scalar>, SearchPath)>, NtError> {
    if k == 0 {
        return Ok(None);
    }
    let bits = k.min(SWEEP_BITS);
    for code in 1u64..(1 << bits) {
        let c: Vec<Scalar> =
            (0..k).map(|i| if i < bits && code >> i & 1 == 1 { field.one() } else { field.zero() }).collect();
        if accept(&c)? {
            return Ok(Some((c, path("sweep", code, seed))));
        }
    }
    let mut rng = Pcg64::seed_from_u64(seed);
    for step in 0..SAMPLES {
        let c = random_vector(field, k, &mut rng);
        if c.iter().any(|x| !field.is_zero(x)) && accept(&c)? {
            return Ok(Some((c, path("sample", step, seed))));
        }
    }
    if let Some(packed) = Packed::new(field, k, EXHAUSTIVE_LIMIT) {
        let mut codes = vec![0u32; k];
        for idx in 1..packed.total() {
            packed.decode(idx, &mut codes);
            let c = Packed::to_scalars(&codes);
            if accept(&c)? {
                return Ok(Some((c, path("exhaustive", idx, seed))));
            }
        }
    }
    Ok(None)
}

fn in_union(family: &[Subspace], v: &[Scalar]) -> Result<bool, NtError> {
    for s in family {
        if s.contains(v)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn check_family(module: &NtModule, family: &[Subspace]) -> Result<(), NtError> {
    for (i, s) in family.iter().enumerate() {
        if s.field() != module.field() {
            return Err(crate::linalg::LinalgError::MixedContext.into());
        }
        if !module.is_invariant(s)? {
            return Err(NtError::NotInvariant(i));
        }
    }
    Ok(())
}

/// A point outside every member of the family. Points with support in
/// some nonzero weight are preferred, since the witness curve needs them.
pub fn find_u(module: &NtModule, family: &[Subspace], seed: u64) -> Result<Searched, NtError> {
    check_family(module, family)?;
    let f = module.field();
    let has_weights = module.weights().iter().any(|&w| w != 0);
    let weighted = |v: &[Scalar]| v.iter().zip(module.weights()).any(|(x, &w)| w != 0 && !f.is_zero(x));
    let strict = search(f, module.dim(), seed, |v| Ok((!has_weights || weighted(v)) && !in_union(family, v)?))?;
    let found = match strict {
        Some(x) => Some(x),
        None if has_weights => search(f, module.dim(), seed, |v| Ok(!in_union(family, v)?))?,
        None => None,
    };
    let (u, path) = found.ok_or_else(|| NtError::FieldTooSmall(format!("{f}^{}", module.dim())))?;
    Ok(Searched { u, path })
}

/// Replaces, for each positive weight `j` with `J u_j ≠ u_{-j}`, the pair
/// `(u_j, u_{-j})` by `(v, Jv)` for some `v ∈ V_j` keeping the point off
/// the family. Other weight components are never touched.
pub fn adjust_j_symmetric(
    module: &NtModule,
    family: &[Subspace],
    u: &[Scalar],
    seed: u64,
) -> Result<(Vec<Scalar>, Vec<AdjustStep>), NtError> {
    check_family(module, family)?;
    let f = module.field();
    if u.len() != module.dim() {
        return Err(NtError::InvalidInput("u has the wrong length".into()));
    }
    if in_union(family, u)? {
        return Err(NtError::InvalidInput("u lies in the family".into()));
    }
    let mut u = u.to_vec();
    let mut steps = Vec::new();
    for j in module.positive_weights() {
        let uj = module.project(&u, j);
        let umj = module.project(&u, -j);
        if module.apply_j(&uj)? == umj {
            continue;
        }
        let base: Vec<Scalar> = u.iter().zip(uj.iter().zip(&umj)).map(|(x, (a, b))| f.sub(&f.sub(x, a), b)).collect();
        let point = |v: &[Scalar]| -> Result<Vec<Scalar>, NtError> {
            let jv = module.apply_j(v)?;
            Ok(base.iter().zip(v.iter().zip(&jv)).map(|(x, (a, b))| f.add(&f.add(x, a), b)).collect())
        };
        let step_seed = seed ^ (j as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let mut chosen = None;
        if uj.iter().any(|x| !f.is_zero(x)) {
            let p = point(&uj)?;
            if !in_union(family, &p)? {
                chosen = Some((p, path("u_j", 0, step_seed)));
            }
        }
        if chosen.is_none() {
            let coords = module.coords_of_weight(j);
            let embed = |c: &[Scalar]| -> Vec<Scalar> {
                let mut v = vec![f.zero(); module.dim()];
                for (&k, x) in coords.iter().zip(c) {
                    v[k] = x.clone();
                }
                v
            };
            let found = search(f, coords.len(), step_seed, |c| Ok(!in_union(family, &point(&embed(c))?)?))?;
            if let Some((c, p)) = found {
                chosen = Some((point(&embed(&c))?, p));
            }
        }
        let (p, sp) =
            chosen.ok_or_else(|| NtError::FieldTooSmall(format!("the affine set for weight {j} over {f}")))?;
        u = p;
        steps.push(AdjustStep { weight: j, path: sp });
    }
    Ok((u, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::nt_module_from_blocks;
    use std::collections::BTreeMap;

    fn w1(f: &Field) -> NtModule {
        nt_module_from_blocks(f, &BTreeMap::from([(1, 1)]), 0, 0).unwrap()
    }

    #[test]
    fn first_sweep_candidate() {
        let f = Field::rationals();
        let m = w1(&f);
        let s = find_u(&m, &[Subspace::zero(&f, 2)], 0).unwrap();
        assert_eq!(s.u, vec![f.one(), f.zero()]);
        assert_eq!(s.path.phase, "sweep");
    }

    #[test]
    fn avoids_coordinate_lines() {
        let f = Field::rationals();
        let m = nt_module_from_blocks(&f, &BTreeMap::new(), 1, 1).unwrap();
        let fam = [Subspace::coordinate(&f, 2, &[0]), Subspace::coordinate(&f, 2, &[1])];
        let s = find_u(&m, &fam, 0).unwrap();
        assert_eq!(s.u, vec![f.one(), f.one()]);
    }

    #[test]
    fn gf2_line() {
        let f = Field::prime(2).unwrap();
        let m = nt_module_from_blocks(&f, &BTreeMap::new(), 1, 0).unwrap();
        assert_eq!(find_u(&m, &[Subspace::zero(&f, 1)], 0).unwrap().u, vec![f.one()]);
    }

    #[test]
    fn field_too_small() {
        let f = Field::prime(2).unwrap();
        let m = nt_module_from_blocks(&f, &BTreeMap::new(), 2, 0).unwrap();
        let fam: Vec<Subspace> = vec![
            Subspace::coordinate(&f, 2, &[0]),
            Subspace::coordinate(&f, 2, &[1]),
            Subspace::from_vectors(&f, 2, &[vec![f.one(), f.one()]]).unwrap(),
        ];
        assert!(matches!(find_u(&m, &fam, 0), Err(NtError::FieldTooSmall(_))));
    }

    #[test]
    fn symmetrizes_w1() {
        let f = Field::rationals();
        let m = w1(&f);
        let fam = [Subspace::zero(&f, 2)];
        // u = y: u_1 = y, u_{-1} = 0.
        let (u, steps) = adjust_j_symmetric(&m, &fam, &[f.zero(), f.one()], 0).unwrap();
        assert_eq!(u, vec![f.from_i64(-1), f.one()]);
        assert_eq!(steps[0].path.phase, "u_j");
        // u = x: sweep over V_1 picks y.
        let (u, steps) = adjust_j_symmetric(&m, &fam, &[f.one(), f.zero()], 0).unwrap();
        assert_eq!(u, vec![f.from_i64(-1), f.one()]);
        assert_eq!(steps[0].path.phase, "sweep");
        // Already symmetric or weight-zero only: unchanged.
        let (u, steps) = adjust_j_symmetric(&m, &fam, &[f.from_i64(-1), f.one()], 0).unwrap();
        assert_eq!(u, vec![f.from_i64(-1), f.one()]);
        assert!(steps.is_empty());
        let triv = nt_module_from_blocks(&f, &BTreeMap::new(), 1, 0).unwrap();
        let (u, _) = adjust_j_symmetric(&triv, &[Subspace::zero(&f, 1)], &[f.from_i64(3)], 0).unwrap();
        assert_eq!(u, vec![f.from_i64(3)]);
    }

    #[test]
    fn rejects_non_invariant_family() {
        let f = Field::rationals();
        let m = w1(&f);
        let fam = [Subspace::coordinate(&f, 2, &[0])];
        assert_eq!(find_u(&m, &fam, 0).unwrap_err(), NtError::NotInvariant(0));
    }
}
