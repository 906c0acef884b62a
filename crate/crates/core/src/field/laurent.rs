//! Univariate Laurent polynomials in a formal parameter λ.

use serde::Serialize;

use super::{Field, FieldError, Scalar};

/// `Σ coeffs[i] λ^(low + i)`, trimmed so that the first and last
/// coefficients are nonzero (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    low: i64,
    coeffs: Vec<Scalar>,
}

impl LaurentPoly {
    pub fn zero(field: &Field) -> Self {
        LaurentPoly { field: field.clone(), low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(field: &Field, c: Scalar, exponent: i64) -> Self {
        Self::new(field, exponent, vec![c])
    }

    pub fn constant(field: &Field, c: Scalar) -> Self {
        Self::monomial(field, c, 0)
    }

    pub fn new(field: &Field, low: i64, coeffs: Vec<Scalar>) -> Self {
        let mut p = LaurentPoly { field: field.clone(), low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| self.field.is_zero(c)).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `λ^e`.
    pub fn coeff(&self, e: i64) -> Scalar {
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            self.field.zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field != other.field {
            Err(FieldError::MixedContext)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let f = &self.field;
        let coeffs = (low..=high).map(|e| f.add(&self.coeff(e), &other.coeff(e))).collect();
        Ok(Self::new(f, low, coeffs))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        LaurentPoly { field: self.field.clone(), low: self.low, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
            }
        }
        Ok(Self::new(f, self.low + other.low, coeffs))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.field.mul(x, c)).collect();
        Self::new(&self.field, self.low, coeffs)
    }

    /// Multiplies by `λ^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { field: self.field.clone(), low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Value at a nonzero `λ`.
    pub fn eval(&self, lambda: &Scalar) -> Result<Scalar, FieldError> {
        let f = &self.field;
        let mut acc = f.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.low + i as i64;
            acc = f.add(&acc, &f.mul(c, &f.pow(lambda, e)?));
        }
        Ok(acc)
    }

    /// Ordinary polynomial `λ^(-low) · p`, ascending, constant term nonzero.
    pub fn numerator(&self) -> Vec<Scalar> {
        self.coeffs.clone()
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson { low: self.low, coeffs: self.coeffs.iter().map(|c| self.field.format(c)).collect() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LaurentJson {
    pub low: i64,
    pub coeffs: Vec<String>,
}

// Ordinary polynomial helpers (ascending, trimmed).

fn poly_trim(f: &Field, mut a: Vec<Scalar>) -> Vec<Scalar> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

fn poly_rem(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = poly_trim(f, a.to_vec());
    let lead_inv = f.inv(b.last().expect("nonzero divisor")).unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = f.mul(r.last().unwrap(), &lead_inv);
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = f.sub(&r[i + shift], &f.mul(&factor, bc));
        }
        r = poly_trim(f, r);
    }
    r
}

/// Monic gcd of two polynomials; empty means zero.
pub fn poly_gcd(f: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x = poly_trim(f, a.to_vec());
    let mut y = poly_trim(f, b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(f, &x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        let inv = f.inv(&lead).unwrap();
        x = x.iter().map(|c| f.mul(c, &inv)).collect();
    }
    x
}

/// Outcome of a common-root test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    /// True when the polynomials share a root in the algebraic closure
    /// other than zero.
    pub common_nonzero_root: bool,
    /// Monic gcd of the monomial-normalized numerators, ascending. Empty
    /// when every input is the zero polynomial.
    pub gcd: Vec<Scalar>,
}

/// Decides whether a family of Laurent polynomials has a common nonzero
/// root over the algebraic closure.
pub fn laurent_gcd_roots(polys: &[LaurentPoly]) -> Result<RootReport, FieldError> {
    let first = polys.first().ok_or(FieldError::EmptyInput)?;
    let f = first.field().clone();
    if polys.iter().any(|p| p.field() != &f) {
        return Err(FieldError::MixedContext);
    }
    let mut g: Vec<Scalar> = Vec::new();
    for p in polys {
        g = poly_gcd(&f, &g, &p.numerator());
    }
    // Numerators have nonzero constant term, so roots of g are nonzero.
    let common_nonzero_root = g.is_empty() || g.len() > 1;
    Ok(RootReport { common_nonzero_root, gcd: g })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn lp(f: &Field, low: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::new(f, low, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn coprime_linear_factors() {
        let f = q();
        let r = laurent_gcd_roots(&[lp(&f, 0, &[-1, 1]), lp(&f, 0, &[1, 1])]).unwrap();
        assert!(!r.common_nonzero_root);
        assert_eq!(r.gcd, vec![f.one()]);
    }

    #[test]
    fn shared_factor() {
        let f = q();
        let r = laurent_gcd_roots(&[lp(&f, 0, &[-1, 0, 1]), lp(&f, 0, &[-1, 1])]).unwrap();
        assert!(r.common_nonzero_root);
        assert_eq!(r.gcd, vec![f.from_i64(-1), f.one()]);
    }

    #[test]
    fn normalization_over_gf3() {
        let f = Field::prime(3).unwrap();
        // λ^-1 and 1 + λ^-2
        let a = lp(&f, -1, &[1]);
        let b = lp(&f, -2, &[1, 0, 1]);
        let r = laurent_gcd_roots(&[a, b]).unwrap();
        assert!(!r.common_nonzero_root);
    }

    #[test]
    fn errors() {
        assert_eq!(laurent_gcd_roots(&[]), Err(FieldError::EmptyInput));
        let a = LaurentPoly::constant(&q(), q().one());
        let g = Field::prime(3).unwrap();
        let b = LaurentPoly::constant(&g, g.one());
        assert_eq!(laurent_gcd_roots(&[a, b]), Err(FieldError::MixedContext));
    }

    #[test]
    fn all_zero_has_every_root() {
        let f = q();
        let r = laurent_gcd_roots(&[LaurentPoly::zero(&f)]).unwrap();
        assert!(r.common_nonzero_root);
    }

    #[test]
    fn trimming_and_arithmetic() {
        let f = q();
        let p = LaurentPoly::new(&f, -3, vec![f.zero(), f.one(), f.zero()]);
        assert_eq!(p.low(), -2);
        assert_eq!(p.coeffs().len(), 1);
        let a = lp(&f, -1, &[1, 2]);
        let b = lp(&f, 1, &[3]);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, lp(&f, 0, &[3, 6]));
        assert!(a.sub(&a).unwrap().is_zero());
        assert_eq!(
            a.eval(&f.from_i64(2)).unwrap(),
            f.from_rational(&num_rational::BigRational::new(5.into(), 2.into())).unwrap()
        );
    }

    /// Oracle: exhaustive search for a common nonzero root in GF(q).
    fn brute_common_root(f: &Field, polys: &[LaurentPoly]) -> bool {
        f.elements().unwrap().iter().skip(1).any(|l| polys.iter().all(|p| f.is_zero(&p.eval(l).unwrap())))
    }

    #[test]
    fn agrees_with_enumeration_when_roots_are_rational() {
        // Products of linear factors split over GF(q), so a closure root is a rational root.
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Field::gf(q).unwrap();
            let elems = f.elements().unwrap();
            let mut state = 17u64 * q;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) as usize
            };
            for _ in 0..60 {
                let mut polys = Vec::new();
                for _ in 0..2 {
                    let mut p = LaurentPoly::constant(&f, elems[1 + next() % (elems.len() - 1)].clone());
                    for _ in 0..(next() % 3) {
                        let root = &elems[next() % elems.len()];
                        p = p.mul(&LaurentPoly::new(&f, 0, vec![f.neg(root), f.one()])).unwrap();
                    }
                    polys.push(p.shift(-((next() % 3) as i64)));
                }
                let report = laurent_gcd_roots(&polys).unwrap();
                assert_eq!(report.common_nonzero_root, brute_common_root(&f, &polys), "q={q} {polys:?}");
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn multiplication_commutes_and_associates(a in proptest::collection::vec(-5i64..5, 0..4),
                                                   b in proptest::collection::vec(-5i64..5, 0..4),
                                                   c in proptest::collection::vec(-5i64..5, 0..4),
                                                   la in -3i64..3, lb in -3i64..3) {
            let f = q();
            let (x, y, z) = (lp(&f, la, &a), lp(&f, lb, &b), lp(&f, 0, &c));
            proptest::prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            proptest::prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        }
    }
}
