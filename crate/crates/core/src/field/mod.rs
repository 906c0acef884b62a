//! Exact scalar fields: ℚ, GF(p), GF(p^n) and ℚ(√d).
//!
//! A [`Field`] is a cheap shared handle to an immutable context. Scalars are
//! plain values ([`Scalar`]) interpreted relative to a field; the checked
//! wrapper [`FieldElem`] carries its field along for call sites that need
//! mixed-context detection.

mod finite;
pub mod galois;
pub mod laurent;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub(crate) use finite::FiniteTables;
pub use finite::MAX_ORDER;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("operands live in different fields")]
    MixedContext,
    #[error("division by zero")]
    DivisionByZero,
    #[error("automorphism index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("operation requires positive characteristic")]
    CharacteristicZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order exceeds the supported bound of 2^16")]
    TooLarge,
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("{0} is a perfect square, so Q(sqrt(d)) is not a quadratic field")]
    SquareDiscriminant(BigInt),
    #[error("cannot parse {what}: {text:?}")]
    Parse { what: &'static str, text: String },
    #[error("empty input")]
    EmptyInput,
    #[error("invalid Galois data: {0}")]
    InvalidGalois(String),
}

fn parse_err(what: &'static str, text: &str) -> FieldError {
    FieldError::Parse { what, text: text.to_string() }
}

/// Exact scalar. Its meaning depends on the field it is used with.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Element of ℚ, always reduced with positive denominator.
    Rat(BigRational),
    /// Element of GF(p^n) encoded as `Σ c_i p^i`.
    Fin(u32),
    /// `a + b√d`.
    Quad(BigRational, BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    /// GF(p^degree) with monic irreducible `modulus` (ascending coefficients).
    Finite {
        p: u32,
        degree: u32,
        modulus: Vec<u32>,
    },
    Quadratic {
        d: BigInt,
    },
}

#[derive(Debug)]
struct FieldCtx {
    kind: FieldKind,
    tables: Option<FiniteTables>,
}

/// Shared handle to a field context.
#[derive(Clone)]
pub struct Field(Arc<FieldCtx>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Finite { p, degree: 1, .. } => write!(f, "GF({p})"),
            FieldKind::Finite { p, degree, modulus } => {
                let m: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "GF({p}^{degree};modulus=[{}])", m.join(","))
            }
            FieldKind::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn is_perfect_square(d: &BigInt) -> bool {
    if d.is_negative() {
        return false;
    }
    let r = d.sqrt();
    &(&r * &r) == d
}

impl Field {
    pub fn rationals() -> Self {
        Field(Arc::new(FieldCtx { kind: FieldKind::Rationals, tables: None }))
    }

    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::extension(p, 1, None)
    }

    /// GF(p^n). Without an explicit modulus the smallest monic irreducible
    /// (lower coefficients read as a base-p numeral) is used.
    pub fn extension(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !finite::is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(FieldError::BadModulus("degree must be positive".into()));
        }
        if (p as u64).checked_pow(n).is_none_or(|q| q > MAX_ORDER) {
            return Err(FieldError::TooLarge);
        }
        let modulus = match modulus {
            Some(m) => m,
            None => finite::default_modulus(p, n),
        };
        let tables = FiniteTables::new(p, modulus)?;
        if tables.n != n {
            return Err(FieldError::BadModulus(format!("modulus has degree {}, expected {n}", tables.n)));
        }
        let kind = FieldKind::Finite { p, degree: n, modulus: tables.modulus.clone() };
        Ok(Field(Arc::new(FieldCtx { kind, tables: Some(tables) })))
    }

    /// GF(q) for a prime power q, default modulus.
    pub fn gf(q: u64) -> Result<Self, FieldError> {
        let (p, n) = finite::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::extension(p, n, None)
    }

    pub fn quadratic(d: impl Into<BigInt>) -> Result<Self, FieldError> {
        let d = d.into();
        if is_perfect_square(&d) {
            return Err(FieldError::SquareDiscriminant(d));
        }
        Ok(Field(Arc::new(FieldCtx { kind: FieldKind::Quadratic { d }, tables: None })))
    }

    /// Parses `Q`, `GF(p)`, `GF(p^n)`, `GF(p^n;modulus=[c0,...,cn])` or `Q(sqrt(d))`.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "Q" {
            return Ok(Self::rationals());
        }
        if let Some(inner) = s.strip_prefix("Q(sqrt(").and_then(|r| r.strip_suffix("))")) {
            let d: BigInt = inner.parse().map_err(|_| parse_err("field", text))?;
            return Self::quadratic(d);
        }
        let inner = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| parse_err("field", text))?;
        let (order, modulus) = match inner.split_once(";modulus=") {
            Some((o, m)) => {
                let list =
                    m.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| parse_err("modulus", text))?;
                let coeffs = list
                    .split(',')
                    .map(|c| c.parse::<u32>().map_err(|_| parse_err("modulus", text)))
                    .collect::<Result<Vec<_>, _>>()?;
                (o, Some(coeffs))
            }
            None => (inner, None),
        };
        let (p, n) = match order.split_once('^') {
            Some((p, n)) => (
                p.parse::<u32>().map_err(|_| parse_err("field", text))?,
                n.parse::<u32>().map_err(|_| parse_err("field", text))?,
            ),
            None => {
                let q: u64 = order.parse().map_err(|_| parse_err("field", text))?;
                if modulus.is_none() {
                    if finite::is_prime(q) {
                        (q as u32, 1)
                    } else {
                        return Self::gf(q);
                    }
                } else {
                    let (p, n) = finite::prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
                    (p, n)
                }
            }
        };
        Self::extension(p, n, modulus)
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn characteristic(&self) -> u32 {
        match &self.0.kind {
            FieldKind::Finite { p, .. } => *p,
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0.tables.is_some()
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u64> {
        self.0.tables.as_ref().map(|t| t.q as u64)
    }

    pub(crate) fn tables(&self) -> Option<&FiniteTables> {
        self.0.tables.as_ref()
    }

    pub fn zero(&self) -> Scalar {
        match &self.0.kind {
            FieldKind::Rationals => Scalar::Rat(BigRational::zero()),
            FieldKind::Finite { .. } => Scalar::Fin(0),
            FieldKind::Quadratic { .. } => Scalar::Quad(BigRational::zero(), BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match &self.0.kind {
            FieldKind::Rationals => Scalar::Rat(rat(n)),
            FieldKind::Finite { p, .. } => Scalar::Fin(n.rem_euclid(*p as i64) as u32),
            FieldKind::Quadratic { .. } => Scalar::Quad(rat(n), BigRational::zero()),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, FieldError> {
        match &self.0.kind {
            FieldKind::Rationals => Ok(Scalar::Rat(r.clone())),
            FieldKind::Quadratic { .. } => Ok(Scalar::Quad(r.clone(), BigRational::zero())),
            FieldKind::Finite { p, .. } => {
                let p = BigInt::from(*p);
                let num = r.numer().mod_floor(&p).to_u32().unwrap();
                let den = r.denom().mod_floor(&p).to_u32().unwrap();
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                self.div(&Scalar::Fin(num), &Scalar::Fin(den))
            }
        }
    }

    /// The adjoined generator: `α` for GF(p^n) (`1` when n = 1), `√d` for ℚ(√d).
    pub fn adjoined(&self) -> Scalar {
        match &self.0.kind {
            FieldKind::Rationals => self.one(),
            FieldKind::Finite { p, degree, .. } => Scalar::Fin(if *degree == 1 { 1 } else { *p }),
            FieldKind::Quadratic { .. } => Scalar::Quad(BigRational::zero(), BigRational::one()),
        }
    }

    /// A generator of the multiplicative group of a finite field.
    pub fn multiplicative_generator(&self) -> Option<Scalar> {
        self.tables().map(|t| Scalar::Fin(t.generator()))
    }

    /// All elements of a finite field in code order (0 first).
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.tables().map(|t| (0..t.q).map(Scalar::Fin).collect())
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fin(c) => *c == 0,
            Scalar::Quad(x, y) => x.is_zero() && y.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (&self.0.kind, a) {
            (FieldKind::Rationals, Scalar::Rat(_)) => true,
            (FieldKind::Quadratic { .. }, Scalar::Quad(..)) => true,
            (FieldKind::Finite { .. }, Scalar::Fin(c)) => *c < self.tables().unwrap().q,
            _ => false,
        }
    }

    fn quad_d(&self) -> BigRational {
        match &self.0.kind {
            FieldKind::Quadratic { d } => BigRational::from_integer(d.clone()),
            _ => unreachable!(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(self.tables().unwrap().add(*x, *y)),
            (Scalar::Quad(a0, a1), Scalar::Quad(b0, b1)) => Scalar::Quad(a0 + b0, a1 + b1),
            _ => panic!("scalar kinds do not match field {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Fin(x) => Scalar::Fin(self.tables().unwrap().neg(*x)),
            Scalar::Quad(x, y) => Scalar::Quad(-x, -y),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(self.tables().unwrap().sub(*x, *y)),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Fin(x), Scalar::Fin(y)) => Scalar::Fin(self.tables().unwrap().mul(*x, *y)),
            (Scalar::Quad(a0, a1), Scalar::Quad(b0, b1)) => {
                let d = self.quad_d();
                Scalar::Quad(a0 * b0 + a1 * b1 * d, a0 * b1 + a1 * b0)
            }
            _ => panic!("scalar kinds do not match field {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Fin(x) => Scalar::Fin(self.tables().unwrap().inv(*x)),
            Scalar::Quad(x, y) => {
                let norm = x * x - y * y * self.quad_d();
                Scalar::Quad(x / &norm, -(y / &norm))
            }
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e`; negative exponents require `a ≠ 0`.
    pub fn pow(&self, a: &Scalar, e: i64) -> Result<Scalar, FieldError> {
        if let Scalar::Fin(x) = a {
            return self.tables().unwrap().pow(*x, e).map(Scalar::Fin).ok_or(FieldError::DivisionByZero);
        }
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut result = self.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        Ok(result)
    }

    /// `a^(p^m)`.
    pub fn frobenius(&self, m: u32, a: &Scalar) -> Result<Scalar, FieldError> {
        let t = self.tables().ok_or(FieldError::CharacteristicZero)?;
        let Scalar::Fin(x) = a else { return Err(FieldError::MixedContext) };
        if *x == 0 {
            return Ok(Scalar::Fin(0));
        }
        // Frobenius has order n, so reduce the exponent p^m modulo q-1.
        let order = t.q as u64 - 1;
        let mut e = 1u64;
        for _ in 0..(m % t.n) {
            e = e * t.p as u64 % order.max(1);
        }
        Ok(Scalar::Fin(t.pow(*x, e as i64).unwrap()))
    }

    /// Coefficients of `a` in the basis `1, α, …` over the prime field or ℚ.
    pub fn coordinates(&self, a: &Scalar) -> Vec<Scalar> {
        match (&self.0.kind, a) {
            (FieldKind::Finite { .. }, Scalar::Fin(x)) => {
                self.tables().unwrap().digits(*x).into_iter().map(Scalar::Fin).collect()
            }
            (FieldKind::Quadratic { .. }, Scalar::Quad(x, y)) => {
                vec![Scalar::Rat(x.clone()), Scalar::Rat(y.clone())]
            }
            _ => vec![a.clone()],
        }
    }

    /// Textual scalar encoding used by every file format.
    pub fn format(&self, a: &Scalar) -> String {
        fn r(x: &BigRational) -> String {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        }
        match (&self.0.kind, a) {
            (_, Scalar::Rat(x)) => r(x),
            (FieldKind::Finite { degree: 1, .. }, Scalar::Fin(x)) => x.to_string(),
            (_, Scalar::Fin(x)) => {
                let d: Vec<String> = self.tables().unwrap().digits(*x).iter().map(|c| c.to_string()).collect();
                format!("[{}]", d.join(","))
            }
            (_, Scalar::Quad(x, y)) => format!("{}+{}*r", r(x), r(y)),
        }
    }

    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let parse_rat = |t: &str| -> Result<BigRational, FieldError> {
            let (n, d) = match t.split_once('/') {
                Some((n, d)) => (n, d),
                None => (t, "1"),
            };
            let n: BigInt = n.parse().map_err(|_| parse_err("scalar", text))?;
            let d: BigInt = d.parse().map_err(|_| parse_err("scalar", text))?;
            if d.is_zero() {
                return Err(FieldError::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        };
        match &self.0.kind {
            FieldKind::Rationals => Ok(Scalar::Rat(parse_rat(&s)?)),
            FieldKind::Quadratic { .. } => match s.strip_suffix("*r") {
                Some(body) => {
                    let (a, b) = body.split_once('+').ok_or_else(|| parse_err("scalar", text))?;
                    Ok(Scalar::Quad(parse_rat(a)?, parse_rat(b)?))
                }
                None => Ok(Scalar::Quad(parse_rat(&s)?, BigRational::zero())),
            },
            FieldKind::Finite { p, degree, .. } => {
                if let Some(list) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                    let digits = list
                        .split(',')
                        .map(|c| c.parse::<i64>().map(|v| v.rem_euclid(*p as i64) as u32))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| parse_err("scalar", text))?;
                    if digits.len() != *degree as usize {
                        return Err(parse_err("scalar", text));
                    }
                    Ok(Scalar::Fin(self.tables().unwrap().pack_digits(&digits)))
                } else {
                    let v: BigInt = s.parse().map_err(|_| parse_err("scalar", text))?;
                    let r = v.mod_floor(&BigInt::from(*p)).to_u32().unwrap();
                    Ok(Scalar::Fin(r))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A scalar tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    pub field: Field,
    pub value: Scalar,
}

impl FieldElem {
    pub fn new(field: &Field, value: Scalar) -> Self {
        FieldElem { field: field.clone(), value }
    }

    pub fn arith(&self, other: &FieldElem, op: ArithOp) -> Result<FieldElem, FieldError> {
        if self.field != other.field {
            return Err(FieldError::MixedContext);
        }
        let f = &self.field;
        let (a, b) = (&self.value, &other.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(FieldElem::new(f, value))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}
