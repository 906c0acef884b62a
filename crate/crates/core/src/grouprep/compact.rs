//! Packed finite-field vectors for the enumeration kernels.
//!
//! A vector `v ∈ GF(q)^dim` is indexed by `Σ code(v_i) q^i`, so coordinate 0
//! varies fastest and the first nonzero vector is `e₁`.

use crate::field::{Field, FiniteTables, Scalar};
use crate::linalg::Matrix;

pub(crate) struct Packed<'a> {
    t: &'a FiniteTables,
    pub q: u64,
    pub dim: usize,
}

impl<'a> Packed<'a> {
    /// `None` unless the field is finite and `q^dim` fits in `limit`.
    pub fn new(field: &'a Field, dim: usize, limit: u64) -> Option<Packed<'a>> {
        let t = field.tables()?;
        let q = t.q as u64;
        let total = q.checked_pow(dim as u32)?;
        (total <= limit).then_some(Packed { t, q, dim })
    }

    pub fn total(&self) -> u64 {
        self.q.pow(self.dim as u32)
    }

    pub fn decode(&self, mut idx: u64, out: &mut [u32]) {
        for c in out.iter_mut() {
            *c = (idx % self.q) as u32;
            idx /= self.q;
        }
    }

    pub fn encode(&self, v: &[u32]) -> u64 {
        v.iter().rev().fold(0, |acc, &c| acc * self.q + c as u64)
    }

    pub fn codes(m: &Matrix) -> Vec<u32> {
        m.entries().iter().map(code).collect()
    }

    /// `out = M v` for a `rows x dim` row-major code matrix.
    #[inline]
    pub fn apply(&self, m: &[u32], v: &[u32], out: &mut [u32]) {
        let n = v.len();
        for (i, o) in out.iter_mut().enumerate() {
            let row = &m[i * n..(i + 1) * n];
            let mut acc = 0;
            for (a, b) in row.iter().zip(v) {
                if *a != 0 && *b != 0 {
                    acc = self.t.add(acc, self.t.mul(*a, *b));
                }
            }
            *o = acc;
        }
    }

    /// True when every row of `ann` annihilates `v`.
    #[inline]
    pub fn annihilated(&self, ann: &[u32], v: &[u32]) -> bool {
        let n = v.len();
        ann.chunks_exact(n.max(1)).all(|row| {
            let mut acc = 0;
            for (a, b) in row.iter().zip(v) {
                if *a != 0 && *b != 0 {
                    acc = self.t.add(acc, self.t.mul(*a, *b));
                }
            }
            acc == 0
        })
    }

    pub fn to_scalars(v: &[u32]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::Fin(c)).collect()
    }
}

pub(crate) fn code(s: &Scalar) -> u32 {
    match s {
        Scalar::Fin(c) => *c,
        _ => panic!("packed kernels need finite-field scalars"),
    }
}
