//! Table-driven arithmetic for GF(p^n).
//!
//! Elements are encoded as `Σ c_i p^i` where `c_i` is the coefficient of
//! `α^i` and `α` is the class of `x` modulo the defining polynomial. Prime
//! fields are the degree-one case with modulus `x`.

use super::FieldError;

/// Largest field order the table layer accepts.
pub const MAX_ORDER: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u32 = 1024;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, n)`.
pub(crate) fn prime_power(q: u64) -> Option<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut n = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        n += 1;
    }
    Some((p as u32, n))
}

// Dense polynomials over GF(p), ascending coefficients, trimmed.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and small, so Fermat is fine.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p) as u64;
    let p64 = p as u64;
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = *r.last().unwrap() as u64 * lead_inv % p64;
        for (i, &bc) in b.iter().enumerate() {
            let sub = factor * bc as u64 % p64;
            let cur = r[i + shift] as u64;
            r[i + shift] = ((cur + p64 - sub) % p64) as u32;
        }
        r = trim(r);
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=n/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    for deg in 1..=n / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `n` when the lower coefficients
/// `c_{n-1} … c_0` are read as a base-`p` numeral.
pub(crate) fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(n);
    for code in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut c = code;
        for _ in 0..n {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Debug)]
pub(crate) struct FiniteTables {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    /// `exp[k] = g^k` for `k < 2(q-1)`, doubled to skip a modulo in `mul`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteTables {
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let modulus = trim(modulus);
        let n = modulus.len().saturating_sub(1) as u32;
        if n == 0 || *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus("modulus must be monic of positive degree".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus("coefficients must be residues".into()));
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_ORDER).ok_or(FieldError::TooLarge)?;
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus(format!("{modulus:?} is reducible over GF({p})")));
        }
        let q = q as u32;
        let mut t =
            FiniteTables { p, n, q, modulus, add: None, neg: vec![0; q as usize], exp: Vec::new(), log: Vec::new() };
        for a in 0..q {
            t.neg[a as usize] = t.neg_digits(a);
        }
        if q <= ADD_TABLE_LIMIT {
            let mut add = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = t.add_digits(a, b);
                }
            }
            t.add = Some(add);
        }
        let g = t.find_generator();
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for k in 0..(q - 1) as usize {
            exp[k] = cur;
            exp[k + (q - 1) as usize] = cur;
            log[cur as usize] = k as u32;
            cur = t.mul_raw(cur, g);
        }
        t.exp = exp;
        t.log = log;
        Ok(t)
    }

    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    pub fn pack_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack_digits(&s)
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let s: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.pack_digits(&s)
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.n as usize];
        let p = self.p as u64;
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.n as usize, 0);
        self.pack_digits(&r)
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_raw(result, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        result
    }

    fn find_generator(&self) -> u32 {
        let order = self.q as u64 - 1;
        if order == 1 {
            return 1;
        }
        let factors = prime_factors(order);
        (2..self.q)
            .find(|&g| factors.iter().all(|&r| self.pow_raw(g, order / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    pub fn pow(&self, a: u32, e: i64) -> Option<u32> {
        if a == 0 {
            return match e {
                0 => Some(1),
                e if e > 0 => Some(0),
                _ => None,
            };
        }
        let order = (self.q - 1) as i64;
        let k = (self.log[a as usize] as i64 * e.rem_euclid(order)).rem_euclid(order);
        Some(self.exp[k as usize])
    }

    pub fn generator(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(&[2, 2, 1], 3));
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[2, 0, 1], 3)); // x^2 - 1
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(5, 1), vec![0, 1]);
    }

    #[test]
    fn log_tables_cover_group() {
        let t = FiniteTables::new(3, vec![2, 2, 1]).unwrap();
        let mut seen: Vec<u32> = (0..8).map(|k| t.exp[k]).collect();
        seen.sort();
        assert_eq!(seen, (1..9).collect::<Vec<_>>());
        for a in 1..9 {
            assert_eq!(t.mul(a, t.inv(a)), 1);
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
