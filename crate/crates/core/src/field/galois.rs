//! Finite Galois extensions with explicit automorphism lists.

use num_rational::BigRational;
use num_traits::Zero;

use super::{Field, FieldError, FieldKind, Scalar};

/// A Galois extension `top / base` together with its automorphisms
/// `σ_0 = id, σ_1, …, σ_{d-1}`, each stored by the image of the primitive
/// element `α`.
///
/// Supported bases are prime fields (top = GF(p^n)) and ℚ (top = ℚ(√d)).
#[derive(Clone, Debug)]
pub struct GaloisExtension {
    base: Field,
    top: Field,
    alpha: Scalar,
    images: Vec<Scalar>,
    /// `image_powers[j][i] = σ_j(α)^i`.
    image_powers: Vec<Vec<Scalar>>,
    compose: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl GaloisExtension {
    /// The natural extension of `top` over its prime field (or over ℚ for
    /// quadratic fields). Finite automorphisms are the Frobenius powers.
    pub fn of(top: &Field) -> Result<Self, FieldError> {
        match top.kind() {
            FieldKind::Finite { p, degree, .. } => {
                let base = Field::prime(*p)?;
                let alpha = top.adjoined();
                let images = (0..*degree).map(|j| top.frobenius(j, &alpha)).collect::<Result<Vec<_>, _>>()?;
                Self::new(&base, top, images)
            }
            FieldKind::Quadratic { .. } => {
                let alpha = top.adjoined();
                let images = vec![alpha.clone(), top.neg(&alpha)];
                Self::new(&Field::rationals(), top, images)
            }
            FieldKind::Rationals => Self::new(&Field::rationals(), top, vec![top.one()]),
        }
    }

    /// Builds an extension from explicit automorphism images of `α`,
    /// verifying that they are roots of the minimal polynomial, pairwise
    /// distinct, and closed under composition with `images[0] = α`.
    pub fn new(base: &Field, top: &Field, images: Vec<Scalar>) -> Result<Self, FieldError> {
        let bad = |m: &str| Err(FieldError::InvalidGalois(m.to_string()));
        let degree = match (base.kind(), top.kind()) {
            (FieldKind::Finite { p: bp, degree: 1, .. }, FieldKind::Finite { p, degree, .. }) if bp == p => *degree,
            (FieldKind::Rationals, FieldKind::Quadratic { .. }) => 2,
            (FieldKind::Rationals, FieldKind::Rationals) => 1,
            _ => return bad("base must be the prime field of top (or Q below Q(sqrt(d)))"),
        } as usize;
        let alpha = top.adjoined();
        if images.len() != degree {
            return bad("need exactly one automorphism per unit of degree");
        }
        if images[0] != alpha {
            return bad("first automorphism must be the identity");
        }
        let mut ext = GaloisExtension {
            base: base.clone(),
            top: top.clone(),
            alpha: alpha.clone(),
            images: images.clone(),
            image_powers: Vec::new(),
            compose: Vec::new(),
            inverse: Vec::new(),
        };
        let min_poly = ext.minimal_polynomial();
        for (j, beta) in images.iter().enumerate() {
            if !top.contains(beta) {
                return bad("image outside the top field");
            }
            let mut acc = top.zero();
            for c in min_poly.iter().rev() {
                acc = top.add(&top.mul(&acc, beta), c);
            }
            if !top.is_zero(&acc) {
                return Err(FieldError::InvalidGalois(format!("image {j} is not a conjugate of alpha")));
            }
            if images[..j].contains(beta) {
                return bad("conjugates must be pairwise distinct");
            }
        }
        ext.image_powers = images
            .iter()
            .map(|beta| {
                let mut pw = Vec::with_capacity(degree);
                let mut cur = top.one();
                for _ in 0..degree {
                    pw.push(cur.clone());
                    cur = top.mul(&cur, beta);
                }
                pw
            })
            .collect();
        let mut compose = vec![vec![0; degree]; degree];
        for (a, row) in compose.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                let img = ext.apply_unchecked(a, &images[b]);
                *slot = images
                    .iter()
                    .position(|x| *x == img)
                    .ok_or_else(|| FieldError::InvalidGalois("automorphisms not closed under composition".into()))?;
            }
        }
        let inverse = (0..degree).map(|a| (0..degree).find(|&b| compose[a][b] == 0).unwrap()).collect();
        ext.compose = compose;
        ext.inverse = inverse;
        Ok(ext)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    /// `σ_j(α)`.
    pub fn image(&self, j: usize) -> Result<&Scalar, FieldError> {
        self.images.get(j).ok_or(FieldError::IndexOutOfRange(j))
    }

    /// Index of `σ_a ∘ σ_b`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.compose[a][b]
    }

    /// Index of `σ_a^{-1}`.
    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Minimal polynomial of `α` over the base, ascending, as top scalars.
    pub fn minimal_polynomial(&self) -> Vec<Scalar> {
        match self.top.kind() {
            FieldKind::Finite { degree: 1, .. } => vec![self.top.from_i64(-1), self.top.one()],
            FieldKind::Finite { modulus, .. } => modulus.iter().map(|&c| Scalar::Fin(c)).collect(),
            FieldKind::Quadratic { d } => {
                let q = &self.top;
                vec![q.neg(&q.from_rational(&BigRational::from_integer(d.clone())).unwrap()), q.zero(), q.one()]
            }
            FieldKind::Rationals => vec![self.top.from_i64(-1), self.top.one()],
        }
    }

    fn apply_unchecked(&self, j: usize, a: &Scalar) -> Scalar {
        let top = &self.top;
        let coords = top.coordinates(a);
        let mut acc = top.zero();
        for (c, pw) in coords.iter().zip(&self.image_powers[j]) {
            acc = top.add(&acc, &top.mul(&self.embed_coordinate(c), pw));
        }
        acc
    }

    fn embed_coordinate(&self, c: &Scalar) -> Scalar {
        match c {
            Scalar::Rat(r) => self.top.from_rational(r).unwrap(),
            other => other.clone(),
        }
    }

    /// `σ_j(a)` for `a` in the top field.
    pub fn apply(&self, j: usize, a: &Scalar) -> Result<Scalar, FieldError> {
        if j >= self.degree() {
            return Err(FieldError::IndexOutOfRange(j));
        }
        if !self.top.contains(a) {
            return Err(FieldError::MixedContext);
        }
        Ok(self.apply_unchecked(j, a))
    }

    /// Embeds a base-field scalar into the top field.
    pub fn embed(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(r) => self.top.from_rational(r).unwrap(),
            other => other.clone(),
        }
    }

    /// Returns the base-field scalar equal to `a`, if `a` lies in the base.
    pub fn to_base(&self, a: &Scalar) -> Option<Scalar> {
        match a {
            Scalar::Fin(c) if *c < self.base.characteristic() || self.degree() == 1 => Some(Scalar::Fin(*c)),
            Scalar::Quad(x, y) if y.is_zero() => Some(Scalar::Rat(x.clone())),
            Scalar::Rat(r) => Some(Scalar::Rat(r.clone())),
            _ => None,
        }
    }

    /// Frobenius generator for finite extensions.
    pub fn is_cyclic_frobenius(&self) -> bool {
        self.top.is_finite()
            && (0..self.degree()).all(|j| self.compose(1 % self.degree(), j) == (j + 1) % self.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::extension(3, 2, Some(vec![2, 2, 1])).unwrap()
    }

    #[test]
    fn frobenius_image_of_alpha() {
        let f = gf9();
        let ext = GaloisExtension::of(&f).unwrap();
        let s = ext.apply(1, ext.alpha()).unwrap();
        assert_eq!(f.format(&s), "[1,2]"); // 2α + 1
        assert_eq!(ext.apply(0, &s).unwrap(), s);
        assert_eq!(ext.apply(2, &s), Err(FieldError::IndexOutOfRange(2)));
    }

    #[test]
    fn quadratic_conjugation() {
        let q = Field::quadratic(2).unwrap();
        let ext = GaloisExtension::of(&q).unwrap();
        let x = q.parse_scalar("1+1*r").unwrap();
        assert_eq!(q.format(&ext.apply(1, &x).unwrap()), "1+-1*r");
        assert_eq!(ext.to_base(&q.from_i64(3)), Some(Scalar::Rat(BigRational::from_integer(3.into()))));
    }

    #[test]
    fn automorphisms_are_field_maps_and_fix_exactly_the_base() {
        for (p, n) in [(2, 2), (3, 2), (2, 3), (3, 3), (3, 4), (2, 6), (5, 2), (7, 2)] {
            let f = Field::extension(p, n, None).unwrap();
            if f.order().unwrap() > 81 {
                continue;
            }
            let ext = GaloisExtension::of(&f).unwrap();
            let elems = f.elements().unwrap();
            for j in 0..ext.degree() {
                for a in &elems {
                    for b in elems.iter().step_by(3) {
                        let (sa, sb) = (ext.apply(j, a).unwrap(), ext.apply(j, b).unwrap());
                        assert_eq!(ext.apply(j, &f.add(a, b)).unwrap(), f.add(&sa, &sb));
                        assert_eq!(ext.apply(j, &f.mul(a, b)).unwrap(), f.mul(&sa, &sb));
                    }
                }
            }
            // σ_1 applied d times is the identity.
            for a in &elems {
                let mut x = a.clone();
                for _ in 0..ext.degree() {
                    x = ext.apply(1 % ext.degree(), &x).unwrap();
                }
                assert_eq!(&x, a);
            }
            let fixed: Vec<_> =
                elems.iter().filter(|a| (0..ext.degree()).all(|j| ext.apply(j, a).unwrap() == **a)).collect();
            assert_eq!(fixed.len() as u32, p);
            assert!(fixed.iter().all(|a| ext.to_base(a).is_some()));
            assert!(ext.is_cyclic_frobenius());
        }
    }

    #[test]
    fn rejects_non_conjugate_images() {
        let f = gf9();
        let base = Field::prime(3).unwrap();
        let alpha = f.adjoined();
        let bogus = f.add(&alpha, &f.one());
        assert!(GaloisExtension::new(&base, &f, vec![alpha.clone(), bogus]).is_err());
        assert!(GaloisExtension::new(&base, &f, vec![alpha.clone(), alpha]).is_err());
    }
}
