use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::Serialize;

use super::{galois_matrix, tuple_subspace, tuples, DescentError, DescentInput, DescentResult};
use crate::constructions::upper_coords;
use crate::grouprep::compact::Packed;
use crate::grouprep::{
    check_set_free, random_scalar, FreenessReport, GoodnessSpec, Mode, Representation, EXHAUSTIVE_LIMIT,
};
use crate::linalg::{Matrix, Subspace};

/// Exhaustive check over every group element that `Ψ(g)` has base-field
/// entries and satisfies `σ(Ψ(σ^{-1}·g)) = Ψ(g)` for every `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointwiseReport {
    pub elements: usize,
    pub rational_entries: bool,
    pub galois_fixed: bool,
    /// `A[N] Φ(g) A[N]^{-1}` agrees with `Ψ` built from generator images.
    pub consistent: bool,
    pub first_failure: Option<usize>,
}

pub fn pointwise_rationality(res: &DescentResult) -> Result<PointwiseReport, DescentError> {
    let ext = &res.input.ext;
    let gt = res.psi.group().enumerate()?;
    let phi = res.phi.table()?;
    let psi = res.psi.table()?;
    let a_inv = res.a_blown.inverse()?;
    let direct: Vec<Matrix> = phi.iter().map(|m| res.a_blown.mul(m)?.mul(&a_inv)).collect::<Result<Vec<_>, _>>()?;
    let mut report = PointwiseReport {
        elements: gt.order(),
        rational_entries: true,
        galois_fixed: true,
        consistent: true,
        first_failure: None,
    };
    for (i, m) in direct.iter().enumerate() {
        let mut ok = true;
        if *m != psi[i] {
            report.consistent = false;
            ok = false;
        }
        if m.entries().iter().any(|x| ext.to_base(x).is_none()) {
            report.rational_entries = false;
            ok = false;
        }
        for k in 1..ext.degree() {
            let h = super::twist_element(ext, res.input.action, k, gt.element(i))?;
            let hi = gt.index_of(&h).ok_or(DescentError::TwistedGeneratorNotInGroup(i))?;
            if galois_matrix(ext, k, &direct[hi])? != *m {
                report.galois_fixed = false;
                ok = false;
            }
        }
        if !ok && report.first_failure.is_none() {
            report.first_failure = Some(i);
        }
    }
    Ok(report)
}

/// Invariance statuses recomputed by applying every group element to every
/// basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleStatus {
    pub tuple: Vec<usize>,
    pub phi_invariant: bool,
    pub psi_invariant: bool,
    pub transported_psi_invariant: bool,
}

fn invariant_under_all(s: &Subspace, images: &[Matrix]) -> Result<bool, DescentError> {
    let basis = s.basis_vectors();
    for m in images {
        for b in &basis {
            if !s.contains(&m.mat_vec(b)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn subspace_oracle(res: &DescentResult) -> Result<Vec<OracleStatus>, DescentError> {
    let phi = res.phi.table()?;
    let a_inv = res.a_blown.inverse()?;
    let psi: Vec<Matrix> = phi.iter().map(|m| res.a_blown.mul(m)?.mul(&a_inv)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for tuple in tuples(res.input.n(), res.input.degree()) {
        let l = tuple_subspace(&res.input, &tuple)?;
        let moved = l.image(&res.a_blown)?;
        out.push(OracleStatus {
            phi_invariant: invariant_under_all(&l, &phi)?,
            psi_invariant: invariant_under_all(&l, &psi)?,
            transported_psi_invariant: invariant_under_all(&moved, &psi)?,
            tuple,
        });
    }
    Ok(out)
}

/// Exhaustive comparison of "avoids every `L`-tuple" with "some component
/// is invertible" over all points of `V^{⊕d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub points: u64,
    pub in_complement: u64,
    pub agree: bool,
    pub first_disagreement: Option<u64>,
}

pub fn complement_check(input: &DescentInput) -> Result<ComplementReport, DescentError> {
    let top = input.ext.top();
    let dim = input.degree() * input.block_dim();
    let packed = Packed::new(top, dim, EXHAUSTIVE_LIMIT).ok_or_else(|| {
        DescentError::InvalidInput(format!("{top}^{dim} is too large (or infinite) for an exhaustive check"))
    })?;
    let anns: Vec<Vec<u32>> = tuples(input.n(), input.degree())
        .iter()
        .map(|t| Ok(Packed::codes(&tuple_subspace(input, t)?.annihilator())))
        .collect::<Result<_, DescentError>>()?;
    let coords = upper_coords(input.n());
    let diag: Vec<usize> = (0..coords.len()).filter(|&k| coords[k].0 == coords[k].1).collect();
    let big_n = input.block_dim();
    let mut v = vec![0u32; dim];
    let mut report =
        ComplementReport { points: packed.total(), in_complement: 0, agree: true, first_disagreement: None };
    for idx in 0..packed.total() {
        packed.decode(idx, &mut v);
        let avoids = !anns.iter().any(|a| packed.annihilated(a, &v));
        let invertible = (0..input.degree()).any(|c| diag.iter().all(|&k| v[c * big_n + k] != 0));
        if avoids {
            report.in_complement += 1;
        }
        if avoids != invertible {
            report.agree = false;
            report.first_disagreement.get_or_insert(idx);
        }
    }
    Ok(report)
}

/// Set-theoretic freeness of `Φ` on the complement of the `L`-tuples.
pub fn phi_freeness(res: &DescentResult, mode: Mode) -> Result<FreenessReport, DescentError> {
    let family = tuples(res.input.n(), res.input.degree())
        .iter()
        .map(|t| tuple_subspace(&res.input, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(check_set_free(&GoodnessSpec::new(res.phi.clone(), family)?, mode)?)
}

/// A group element with a point `(A_1, …, A_d)` of `U_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSample {
    pub g: Matrix,
    pub point: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationReport {
    pub seed: Option<u64>,
    pub samples: usize,
    /// Samples where some equation `σ_jσ_i^{-1}(det A_i) C_j = σ_jσ_i^{-1}(C_i Adj A_i) A_j` fails.
    pub equation_failures: usize,
    /// Samples where `σ_i^{-1}(C_i A_i^{-1})` differs from `ρ(g)` for some invertible `A_i`.
    pub reconstruction_failures: usize,
    pub equations_checked: usize,
}

impl EquationReport {
    pub fn passed(&self) -> bool {
        self.equation_failures == 0 && self.reconstruction_failures == 0
    }
}

/// `C_l = ^{σ_l}ρ(g) · A_l`.
pub fn image_tuple(input: &DescentInput, g: &Matrix, point: &[Matrix]) -> Result<Vec<Matrix>, DescentError> {
    if point.len() != input.degree() {
        return Err(DescentError::InvalidInput(format!("expected {} components", input.degree())));
    }
    let ext = &input.ext;
    point
        .iter()
        .enumerate()
        .map(|(l, al)| {
            let h = super::twist_element(ext, input.action, l, g)?;
            galois_matrix(ext, l, &input.rep.image_of(&h)?)?.mul(al).map_err(DescentError::from)
        })
        .collect()
}

/// `(equations hold, number checked, reconstruction matches ρ(g))`.
fn check_one(
    input: &DescentInput,
    rho_g: &Matrix,
    a: &[Matrix],
    c: &[Matrix],
) -> Result<(bool, usize, bool), DescentError> {
    let ext = &input.ext;
    let top = ext.top();
    let d = input.degree();
    let mut eq_ok = true;
    let mut checked = 0;
    let mut rec_ok = true;
    for i in 0..d {
        let (det_i, adj_i) = a[i].det_adj()?;
        let ci_adj = c[i].mul(&adj_i)?;
        for j in 0..d {
            let s = ext.compose(j, ext.inverse(i));
            let lhs = c[j].scale(&ext.apply(s, &det_i)?);
            let rhs = galois_matrix(ext, s, &ci_adj)?.mul(&a[j])?;
            checked += 1;
            if lhs != rhs {
                eq_ok = false;
            }
        }
        if !top.is_zero(&det_i) {
            let rec = galois_matrix(ext, ext.inverse(i), &c[i].mul(&a[i].inverse()?)?)?;
            if rec != *rho_g {
                rec_ok = false;
            }
        }
    }
    Ok((eq_ok, checked, rec_ok))
}

fn has_invertible(input: &DescentInput, point: &[Matrix]) -> Result<bool, DescentError> {
    let top = input.ext.top();
    for a in point {
        if !top.is_zero(&a.det()?) {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn check_closed_image_equations(
    input: &DescentInput,
    samples: &[EquationSample],
) -> Result<EquationReport, DescentError> {
    let mut report = EquationReport {
        seed: None,
        samples: samples.len(),
        equation_failures: 0,
        reconstruction_failures: 0,
        equations_checked: 0,
    };
    for (k, s) in samples.iter().enumerate() {
        if !has_invertible(input, &s.point)? {
            return Err(DescentError::NoInvertibleComponent(k));
        }
        let c = image_tuple(input, &s.g, &s.point)?;
        let rho_g = input.rep.image_of(&s.g)?;
        let (eq, n, rec) = check_one(input, &rho_g, &s.point, &c)?;
        report.equations_checked += n;
        report.equation_failures += usize::from(!eq);
        report.reconstruction_failures += usize::from(!rec);
    }
    Ok(report)
}

/// Seeded samples: a uniformly chosen group element and a random point of
/// `U_d` (components upper triangular, redrawn until one is invertible).
pub fn sample_equations(input: &DescentInput, count: usize, seed: u64) -> Result<Vec<EquationSample>, DescentError> {
    let gt = input.rep.group().enumerate()?;
    let top = input.ext.top();
    let n = input.n();
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = gt.element((rng.next_u64() % gt.order() as u64) as usize).clone();
        let point: Vec<Matrix> = (0..input.degree())
            .map(|_| {
                let mut m = Matrix::zeros(top, n, n);
                for (i, j) in upper_coords(n) {
                    m.set(i, j, random_scalar(top, &mut rng));
                }
                m
            })
            .collect();
        if has_invertible(input, &point)? {
            out.push(EquationSample { g, point });
        }
    }
    Ok(out)
}

/// Soundness control: perturbs `C_1` by adding 1 to its corner entry and
/// reports whether the equations or the reconstruction catch it.
pub fn corrupted_control(input: &DescentInput, sample: &EquationSample) -> Result<bool, DescentError> {
    let top = input.ext.top();
    let mut c = image_tuple(input, &sample.g, &sample.point)?;
    let corner = top.add(c[0].get(0, 0), &top.one());
    c[0].set(0, 0, corner);
    let rho_g = input.rep.image_of(&sample.g)?;
    let (eq, _, rec) = check_one(input, &rho_g, &sample.point, &c)?;
    Ok(!eq || !rec)
}

/// Generator images raised entrywise to the `p^m` power, with the size of
/// the kernel when the group can be enumerated.
#[derive(Clone, Debug)]
pub struct FrobeniusReduction {
    pub rep: Representation,
    pub kernel_size: Option<usize>,
    pub distinct_images: Option<usize>,
}

impl FrobeniusReduction {
    pub fn faithful(&self) -> Option<bool> {
        self.kernel_size.map(|k| k == 1)
    }
}

pub fn frobenius_reduce(rep: &Representation, m: u32) -> Result<FrobeniusReduction, DescentError> {
    let f = rep.field();
    if !f.is_finite() {
        return Err(DescentError::CharacteristicZero);
    }
    let images = rep.images().iter().map(|g| g.map_into(f, |x| f.frobenius(m, x))).collect::<Result<Vec<_>, _>>()?;
    let reduced = Representation::new(rep.group(), f, rep.dim(), images)?;
    let (kernel_size, distinct_images) = match reduced.table() {
        Ok(t) => {
            let mut seen = std::collections::HashSet::new();
            let kernel = t.iter().filter(|x| x.is_identity()).count();
            for x in t.iter() {
                seen.insert(x.entries().to_vec());
            }
            (Some(kernel), Some(seen.len()))
        }
        Err(_) => (None, None),
    };
    Ok(FrobeniusReduction { rep: reduced, kernel_size, distinct_images })
}

#[cfg(test)]
mod tests {
    use super::super::{build_psi, GroupGaloisAction};
    use super::*;
    use crate::constructions::borel_group;
    use crate::field::galois::GaloisExtension;
    use crate::field::Field;
    use crate::grouprep::{MatrixGroup, Status};

    fn gf9() -> Field {
        Field::extension(3, 2, Some(vec![2, 2, 1])).unwrap()
    }

    fn input(f: &Field) -> DescentInput {
        let ext = GaloisExtension::of(f).unwrap();
        DescentInput::new(ext, Representation::natural(&borel_group(f, 2)), GroupGaloisAction::RationalPoints).unwrap()
    }

    #[test]
    fn identity_sample_and_corruption() {
        let f = gf9();
        let inp = input(&f);
        let point = vec![Matrix::identity(&f, 2), Matrix::zeros(&f, 2, 2)];
        let s = EquationSample { g: Matrix::identity(&f, 2), point };
        assert!(check_closed_image_equations(&inp, std::slice::from_ref(&s)).unwrap().passed());
        assert!(corrupted_control(&inp, &s).unwrap());
        let bad = EquationSample { g: Matrix::identity(&f, 2), point: vec![Matrix::zeros(&f, 2, 2); 2] };
        assert_eq!(check_closed_image_equations(&inp, &[bad]).unwrap_err(), DescentError::NoInvertibleComponent(0));
    }

    #[test]
    fn seeded_samples_pass() {
        let f = gf9();
        let inp = input(&f);
        let samples = sample_equations(&inp, 20, 7).unwrap();
        assert_eq!(samples, sample_equations(&inp, 20, 7).unwrap());
        let r = check_closed_image_equations(&inp, &samples).unwrap();
        assert!(r.passed());
        assert_eq!(r.equations_checked, 80);
    }

    #[test]
    fn complement_over_gf3() {
        let inp = input(&Field::prime(3).unwrap());
        let r = complement_check(&inp).unwrap();
        assert!(r.agree);
        assert_eq!((r.points, r.in_complement), (27, 12));
    }

    #[test]
    fn pointwise_for_units() {
        let f = gf9();
        let ext = GaloisExtension::of(&f).unwrap();
        let z = f.multiplicative_generator().unwrap();
        let g = MatrixGroup::new(&f, 1, vec![Matrix::diagonal(&f, &[z])]).unwrap();
        let inp = DescentInput::new(ext, Representation::natural(&g), GroupGaloisAction::RationalPoints).unwrap();
        let res = build_psi(&inp).unwrap();
        let r = pointwise_rationality(&res).unwrap();
        assert_eq!(r.elements, 8);
        assert!(r.rational_entries && r.galois_fixed && r.consistent);
        let fr = phi_freeness(&res, Mode::Exhaustive).unwrap();
        assert_eq!(fr.status, Status::Verified);
        let oracle = subspace_oracle(&res).unwrap();
        for (o, s) in oracle.iter().zip(&res.subspaces) {
            assert_eq!(
                (o.phi_invariant, o.psi_invariant, o.transported_psi_invariant),
                (s.phi_invariant, s.psi_invariant, s.transported_psi_invariant)
            );
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = Field::gf(4).unwrap();
        let z = f.multiplicative_generator().unwrap();
        let g = MatrixGroup::new(&f, 1, vec![Matrix::diagonal(&f, std::slice::from_ref(&z))]).unwrap();
        let rep = Representation::natural(&g);
        assert_eq!(frobenius_reduce(&rep, 0).unwrap().rep.images(), rep.images());
        assert_eq!(frobenius_reduce(&rep, 2).unwrap().rep.images(), rep.images());
        let once = frobenius_reduce(&rep, 1).unwrap();
        assert_eq!(once.rep.images()[0], Matrix::diagonal(&f, &[f.pow(&z, 2).unwrap()]));
        assert_eq!(once.faithful(), Some(true));
        let b = Representation::natural(&borel_group(&Field::prime(2).unwrap(), 2));
        assert_eq!(frobenius_reduce(&b, 1).unwrap().rep.images(), b.images());
        let q = Field::rationals();
        let trivial = Representation::natural(&MatrixGroup::trivial(&q, 1));
        assert_eq!(frobenius_reduce(&trivial, 1).unwrap_err(), DescentError::CharacteristicZero);
    }
}
