use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use super::compact::Packed;
use super::{dim_err, is_invariant, GroupError, Representation};
use crate::field::{Field, FieldKind, Scalar};
use crate::linalg::{Matrix, MatrixJson, Subspace};

/// Largest ambient point count the exhaustive mode accepts.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 28;

/// A representation with a family of subspaces; `U` is the complement of
/// their union.
#[derive(Clone, Debug)]
pub struct GoodnessSpec {
    pub rep: Representation,
    pub subspaces: Vec<Subspace>,
}

impl GoodnessSpec {
    pub fn new(rep: Representation, subspaces: Vec<Subspace>) -> Result<Self, GroupError> {
        for s in &subspaces {
            if s.field() != rep.field() {
                return Err(crate::linalg::LinalgError::MixedContext.into());
            }
            if s.ambient() != rep.dim() {
                return dim_err(format!("subspace ambient {} vs representation dim {}", s.ambient(), rep.dim()));
            }
        }
        Ok(GoodnessSpec { rep, subspaces })
    }

    pub fn in_union(&self, v: &[Scalar]) -> Result<bool, GroupError> {
        for s in &self.subspaces {
            if s.contains(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sample { seed: u64, count: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Refuted,
    Evidence,
}

/// A group element `g ≠ 1` fixing a point `u` of `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub g: Matrix,
    pub u: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub status: Status,
    /// Points of `U` examined (in vector order for exhaustive mode, up to
    /// and including the witness when refuted).
    pub tested: u64,
    pub witness: Option<Witness>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub g: MatrixJson,
    pub u: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FreenessReportJson {
    pub status: Status,
    pub tested: u64,
    pub witness: Option<WitnessJson>,
    pub seed: Option<u64>,
}

impl FreenessReport {
    /// `rep_field` formats the witness point, which lives in the
    /// representation space.
    pub fn to_json(&self, rep_field: &Field) -> FreenessReportJson {
        FreenessReportJson {
            status: self.status,
            tested: self.tested,
            witness: self
                .witness
                .as_ref()
                .map(|w| WitnessJson { g: w.g.to_json(), u: w.u.iter().map(|x| rep_field.format(x)).collect() }),
            seed: self.seed,
        }
    }
}

/// Checks that every tested point outside the union of the family has
/// trivial stabilizer.
///
/// Exhaustive mode walks all rational points in packed order (coordinate 0
/// fastest) and reports the first point with a nontrivial stabilizer,
/// paired with the first such group element in enumeration order. When
/// every member of the family is invariant, `U` is a union of orbits and
/// each orbit is traced once from its first point; otherwise each point is
/// tested against every group element.
pub fn check_set_free(spec: &GoodnessSpec, mode: Mode) -> Result<FreenessReport, GroupError> {
    let rep = &spec.rep;
    let dim = rep.dim();
    if spec.subspaces.iter().any(|s| s.dim() == dim) {
        return Err(GroupError::EmptyU);
    }
    let gt = rep.group().enumerate()?;
    let imgs = rep.table()?;
    let field = rep.field();
    match mode {
        Mode::Exhaustive => {
            let Some(packed) = Packed::new(field, dim, EXHAUSTIVE_LIMIT) else {
                return Err(if field.is_finite() {
                    GroupError::SearchTooLarge(format!("{}^{dim}", field.order().unwrap()))
                } else {
                    GroupError::InfiniteField
                });
            };
            let mats: Vec<Vec<u32>> = imgs.iter().map(Packed::codes).collect();
            let anns: Vec<Vec<u32>> = spec.subspaces.iter().map(|s| Packed::codes(&s.annihilator())).collect();
            let mut invariant = true;
            for s in &spec.subspaces {
                invariant &= is_invariant(rep, s)?;
            }
            let found = if invariant {
                exhaustive_orbits(&packed, &mats, &anns)
            } else {
                exhaustive_direct(&packed, &mats, &anns)
            };
            Ok(match found {
                Ok(tested) => {
                    if tested == 0 {
                        return Err(GroupError::EmptyU);
                    }
                    FreenessReport { status: Status::Verified, tested, witness: None, seed: None }
                }
                Err((tested, g, u)) => FreenessReport {
                    status: Status::Refuted,
                    tested,
                    witness: Some(Witness { g: gt.element(g).clone(), u: Packed::to_scalars(&u) }),
                    seed: None,
                },
            })
        }
        Mode::Sample { seed, count } => {
            let mut rng = Pcg64::seed_from_u64(seed);
            let mut tested = 0;
            for _ in 0..count {
                let v = random_vector(field, dim, &mut rng);
                if spec.in_union(&v)? {
                    continue;
                }
                tested += 1;
                for (k, m) in imgs.iter().enumerate().skip(1) {
                    if m.mat_vec(&v)? == v {
                        return Ok(FreenessReport {
                            status: Status::Refuted,
                            tested,
                            witness: Some(Witness { g: gt.element(k).clone(), u: v }),
                            seed: Some(seed),
                        });
                    }
                }
            }
            Ok(FreenessReport { status: Status::Evidence, tested, witness: None, seed: Some(seed) })
        }
    }
}

type Found = Result<u64, (u64, usize, Vec<u32>)>;

fn in_union(packed: &Packed, anns: &[Vec<u32>], v: &[u32]) -> bool {
    anns.iter().any(|a| packed.annihilated(a, v))
}

fn first_fixing(packed: &Packed, mats: &[Vec<u32>], v: &[u32], w: &mut [u32]) -> Option<usize> {
    (1..mats.len()).find(|&k| {
        packed.apply(&mats[k], v, w);
        w == v
    })
}

fn exhaustive_orbits(packed: &Packed, mats: &[Vec<u32>], anns: &[Vec<u32>]) -> Found {
    let total = packed.total();
    let mut visited = vec![0u64; (total as usize).div_ceil(64)];
    let mut v = vec![0u32; packed.dim];
    let mut w = vec![0u32; packed.dim];
    let mut tested = 0;
    for idx in 0..total {
        let (word, bit) = ((idx / 64) as usize, idx % 64);
        if visited[word] >> bit & 1 == 1 {
            tested += 1;
            continue;
        }
        packed.decode(idx, &mut v);
        if in_union(packed, anns, &v) {
            continue;
        }
        tested += 1;
        let mut fresh = 0;
        for m in mats {
            packed.apply(m, &v, &mut w);
            let j = packed.encode(&w);
            let (jw, jb) = ((j / 64) as usize, j % 64);
            if visited[jw] >> jb & 1 == 0 {
                visited[jw] |= 1 << jb;
                fresh += 1;
            }
        }
        if fresh < mats.len() {
            let g = first_fixing(packed, mats, &v, &mut w).expect("short orbit implies a nontrivial stabilizer");
            return Err((tested, g, v));
        }
    }
    Ok(tested)
}

fn exhaustive_direct(packed: &Packed, mats: &[Vec<u32>], anns: &[Vec<u32>]) -> Found {
    let mut v = vec![0u32; packed.dim];
    let mut w = vec![0u32; packed.dim];
    let mut tested = 0;
    for idx in 0..packed.total() {
        packed.decode(idx, &mut v);
        if in_union(packed, anns, &v) {
            continue;
        }
        tested += 1;
        if let Some(g) = first_fixing(packed, mats, &v, &mut w) {
            return Err((tested, g, v));
        }
    }
    Ok(tested)
}

/// Seeded random vector: uniform over finite fields, small integers (and
/// small `a + b√d`) otherwise.
pub(crate) fn random_vector(field: &Field, dim: usize, rng: &mut Pcg64) -> Vec<Scalar> {
    (0..dim).map(|_| random_scalar(field, rng)).collect()
}

pub(crate) fn random_scalar(field: &Field, rng: &mut Pcg64) -> Scalar {
    let small = |rng: &mut Pcg64| (rng.next_u64() % 21) as i64 - 10;
    match field.kind() {
        FieldKind::Finite { .. } => Scalar::Fin((rng.next_u64() % field.order().unwrap()) as u32),
        FieldKind::Rationals => field.from_i64(small(rng)),
        FieldKind::Quadratic { .. } => {
            let a = field.from_i64(small(rng));
            let b = field.from_i64(small(rng));
            field.add(&a, &field.mul(&b, &field.adjoined()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::MatrixGroup;

    #[test]
    fn trivial_group_is_vacuously_free() {
        let f = Field::prime(3).unwrap();
        let g = MatrixGroup::trivial(&f, 2);
        let rep = Representation::natural(&g);
        let spec = GoodnessSpec::new(rep, vec![Subspace::zero(&f, 2)]).unwrap();
        let r = check_set_free(&spec, Mode::Exhaustive).unwrap();
        assert_eq!(r.status, Status::Verified);
        assert_eq!(r.tested, 8);
    }

    #[test]
    fn full_member_means_empty_u() {
        let f = Field::prime(3).unwrap();
        let rep = Representation::natural(&MatrixGroup::trivial(&f, 2));
        let spec = GoodnessSpec::new(rep, vec![Subspace::full(&f, 2)]).unwrap();
        assert_eq!(check_set_free(&spec, Mode::Exhaustive), Err(GroupError::EmptyU));
    }

    #[test]
    fn swap_fixes_the_diagonal() {
        let f = Field::prime(3).unwrap();
        let g = MatrixGroup::new(&f, 2, vec![Matrix::from_i64(&f, &[&[0, 1], &[1, 0]])]).unwrap();
        let spec = GoodnessSpec::new(Representation::natural(&g), vec![Subspace::zero(&f, 2)]).unwrap();
        let r = check_set_free(&spec, Mode::Exhaustive).unwrap();
        assert_eq!(r.status, Status::Refuted);
        let w = r.witness.unwrap();
        assert_eq!(w.u, vec![f.one(), f.one()]);
        // Points before (1,1) in packed order: (1,0), (2,0), (0,1).
        assert_eq!(r.tested, 4);
        let sample = check_set_free(&spec, Mode::Sample { seed: 3, count: 200 }).unwrap();
        assert_eq!(sample.status, Status::Refuted);
        assert_eq!(sample.seed, Some(3));
    }

    #[test]
    fn sample_mode_over_rationals_reports_evidence() {
        let q = Field::rationals();
        let g = MatrixGroup::new(&q, 1, vec![Matrix::from_i64(&q, &[&[-1]])]).unwrap();
        let spec = GoodnessSpec::new(Representation::natural(&g), vec![Subspace::zero(&q, 1)]).unwrap();
        let r = check_set_free(&spec, Mode::Sample { seed: 0, count: 50 }).unwrap();
        assert_eq!(r.status, Status::Evidence);
        assert!(r.tested > 0);
        assert_eq!(check_set_free(&spec, Mode::Exhaustive), Err(GroupError::InfiniteField));
    }
}
