//! Smith normal form of small integer matrices.

/// `u · a · v = s` with `s` diagonal, nonnegative, each diagonal entry
/// dividing the next, and `u`, `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub s: Vec<Vec<i64>>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn smith(a: &[Vec<i64>]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut s = a.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);

    let swap_rows = |s: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        s.swap(i, j);
        u.swap(i, j);
    };
    let swap_cols = |s: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in s.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i -= q * row_k
    let row_op = |s: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, i: usize, k: usize, q: i64| {
        for c in 0..s[i].len() {
            s[i][c] -= q * s[k][c];
        }
        for c in 0..u[i].len() {
            u[i][c] -= q * u[k][c];
        }
    };
    // col_j -= q * col_k
    let col_op = |s: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, j: usize, k: usize, q: i64| {
        for row in s.iter_mut() {
            row[j] -= q * row[k];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[k];
        }
    };

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j] != 0 && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            swap_rows(&mut s, &mut u, t, bi);
            swap_cols(&mut s, &mut v, t, bj);
            let mut clean = true;
            for i in (t + 1)..m {
                let q = s[i][t].div_euclid(s[t][t]);
                row_op(&mut s, &mut u, i, t, q);
                clean &= s[i][t] == 0;
            }
            for j in (t + 1)..n {
                let q = s[t][j].div_euclid(s[t][t]);
                col_op(&mut s, &mut v, j, t, q);
                clean &= s[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = ((t + 1)..m).find(|&i| ((t + 1)..n).any(|j| s[i][j] % s[t][t] != 0));
            match bad {
                Some(i) => row_op(&mut s, &mut u, t, i, -1),
                None => break,
            }
        }
        if s[t][t] < 0 {
            s[t].iter_mut().for_each(|x| *x = -*x);
            u[t].iter_mut().for_each(|x| *x = -*x);
        }
    }
    Smith { s, u, v }
}

/// For a weight row `w`: `(g, b, relations)` with `g = gcd(w) ≥ 0`,
/// `Σ b_j w_j = g`, and `relations` a lattice basis of
/// `{a ∈ ℤ^m : Σ a_j w_j = 0}`.
pub fn row_relations(w: &[i64]) -> (i64, Vec<i64>, Vec<Vec<i64>>) {
    let m = w.len();
    if m == 0 {
        return (0, Vec::new(), Vec::new());
    }
    let Smith { s, v, .. } = smith(&[w.to_vec()]);
    let col = |k: usize| -> Vec<i64> { (0..m).map(|j| v[j][k]).collect() };
    let mut b = col(0);
    let mut g: i64 = b.iter().zip(w).map(|(x, y)| x * y).sum();
    if g < 0 {
        g = -g;
        b.iter_mut().for_each(|x| *x = -*x);
    }
    let first = if s[0][0] == 0 { 0 } else { 1 };
    let relations = (first..m).map(col).collect();
    if g == 0 {
        b = vec![0; m];
    }
    (g, b, relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = b.first().map_or(0, |r| r.len());
        a.iter().map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
    }

    #[test]
    fn diagonalizes_with_divisibility() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let sm = smith(&a);
        assert_eq!(mul(&mul(&sm.u, &a), &sm.v), sm.s);
        let d: Vec<i64> = (0..3).map(|i| sm.s[i][i]).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn weight_row_relations() {
        let (g, b, rel) = row_relations(&[2, 3]);
        assert_eq!(g, 1);
        assert_eq!(2 * b[0] + 3 * b[1], 1);
        assert_eq!(rel.len(), 1);
        assert_eq!(2 * rel[0][0] + 3 * rel[0][1], 0);
        let (g, _, rel) = row_relations(&[4, -6, 2]);
        assert_eq!(g, 2);
        assert_eq!(rel.len(), 2);
    }

    proptest::proptest! {
        #[test]
        fn transforms_are_consistent(a in proptest::collection::vec(proptest::collection::vec(-9i64..9, 3), 1..4)) {
            let sm = smith(&a);
            proptest::prop_assert_eq!(mul(&mul(&sm.u, &a), &sm.v), sm.s.clone());
            for i in 0..sm.s.len() {
                for j in 0..sm.s[i].len() {
                    if i != j {
                        proptest::prop_assert_eq!(sm.s[i][j], 0);
                    }
                }
            }
        }
    }
}
