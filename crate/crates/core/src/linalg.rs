//! Rank of sparse 0/1 matrices over prime fields and over the integers.
//!
//! Rows are given by their supports (sorted column indices). Prime-field
//! elimination keeps normalized pivot rows keyed by leading column; exact
//! elimination is fraction-free, keeping every pivot row primitive.

use std::collections::HashMap;

use rug::Integer;

/// Two primes just below `2^62`.
pub const DEFAULT_PRIMES: [u64; 2] = [4_611_686_018_427_387_847, 4_611_686_018_427_387_817];

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse in `F_p` (`p` prime, `a ≠ 0`).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Incremental row echelon form over `F_p`.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    p: u64,
    ncols: usize,
    pivots: HashMap<u32, Vec<(u32, u64)>>,
    /// Ids of the inserted rows that were independent, in insertion order.
    basis_rows: Vec<usize>,
    /// Leading column of each independent row.
    pivot_cols: Vec<u32>,
    work: Vec<u64>,
}

impl ModEchelon {
    pub fn new(p: u64, ncols: usize) -> Self {
        ModEchelon {
            p,
            ncols,
            pivots: HashMap::new(),
            basis_rows: Vec::new(),
            pivot_cols: Vec::new(),
            work: vec![0; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.basis_rows.len()
    }

    pub fn basis_rows(&self) -> &[usize] {
        &self.basis_rows
    }

    pub fn pivot_cols(&self) -> &[u32] {
        &self.pivot_cols
    }

    /// Inserts a 0/1 row given by its support; returns whether it was independent.
    pub fn insert_support(&mut self, support: &[u32], row_id: usize) -> bool {
        let Some(&first) = support.first() else {
            return false;
        };
        for &c in support {
            self.work[c as usize] = 1;
        }
        let p = self.p;
        let mut lead = None;
        for col in first as usize..self.ncols {
            let v = self.work[col];
            if v == 0 {
                continue;
            }
            match self.pivots.get(&(col as u32)) {
                Some(pivot) => {
                    for &(c, x) in pivot {
                        let w = &mut self.work[c as usize];
                        *w = sub_mod(*w, mul_mod(v, x, p), p);
                    }
                }
                None => {
                    lead = Some(col);
                    break;
                }
            }
        }
        let Some(lead) = lead else {
            return false;
        };
        let inv = inv_mod(self.work[lead], p);
        let mut row = Vec::new();
        for col in lead..self.ncols {
            let v = std::mem::take(&mut self.work[col]);
            if v != 0 {
                row.push((col as u32, mul_mod(v, inv, p)));
            }
        }
        self.pivots.insert(lead as u32, row);
        self.basis_rows.push(row_id);
        self.pivot_cols.push(lead as u32);
        true
    }
}

/// Rank over `F_p` of the 0/1 matrix with the given row supports.
pub fn rank_mod_p(rows: &[Vec<u32>], ncols: usize, p: u64) -> usize {
    let mut ech = ModEchelon::new(p, ncols);
    for (i, r) in rows.iter().enumerate() {
        ech.insert_support(r, i);
    }
    ech.rank()
}

fn make_primitive(row: &mut [(u32, Integer)]) {
    let mut g = Integer::new();
    for (_, v) in row.iter() {
        g.gcd_mut(v);
        if g == 1 {
            break;
        }
    }
    if row.first().is_some_and(|(_, v)| *v < 0) {
        g = -g;
    }
    if g != 1 && g != 0 {
        for (_, v) in row.iter_mut() {
            v.div_exact_mut(&g);
        }
    }
}

/// Exact rank over `Q` by fraction-free sparse elimination.
pub fn rank_exact(rows: &[Vec<u32>]) -> usize {
    let mut pivots: HashMap<u32, Vec<(u32, Integer)>> = HashMap::new();
    for support in rows {
        let mut v: Vec<(u32, Integer)> = support.iter().map(|&c| (c, Integer::from(1))).collect();
        while let Some(lead) = v.first().map(|e| e.0) {
            let Some(pivot) = pivots.get(&lead) else {
                make_primitive(&mut v);
                pivots.insert(lead, v);
                break;
            };
            // v <- b v - a pivot, where a = v[lead], b = pivot[lead]
            let a = v[0].1.clone();
            let b = &pivot[0].1;
            let mut out = Vec::with_capacity(v.len() + pivot.len());
            let (mut i, mut j) = (1, 1);
            while i < v.len() || j < pivot.len() {
                let ci = v.get(i).map_or(u32::MAX, |e| e.0);
                let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
                if ci < cj {
                    out.push((ci, Integer::from(&v[i].1 * b)));
                    i += 1;
                } else if cj < ci {
                    out.push((cj, (-Integer::from(&a * &pivot[j].1))));
                    j += 1;
                } else {
                    let x = Integer::from(&v[i].1 * b) - Integer::from(&a * &pivot[j].1);
                    if x != 0 {
                        out.push((ci, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            make_primitive(&mut out);
            v = out;
        }
    }
    pivots.len()
}

/// Inverse of a dense square matrix over `F_p`; `None` if singular.
pub fn invert_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut inv: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let s = inv_mod(m[col][col], p);
        for j in 0..n {
            m[col][j] = mul_mod(m[col][j], s, p);
            inv[col][j] = mul_mod(inv[col][j], s, p);
        }
        let (pivot_m, pivot_inv) = (m[col].clone(), inv[col].clone());
        for r in 0..n {
            let f = m[r][col];
            if r == col || f == 0 {
                continue;
            }
            for j in 0..n {
                m[r][j] = sub_mod(m[r][j], mul_mod(f, pivot_m[j], p), p);
                inv[r][j] = sub_mod(inv[r][j], mul_mod(f, pivot_inv[j], p), p);
            }
        }
    }
    Some(inv)
}

/// Lifts `x mod p` to the integer in `(-p/2, p/2]`.
pub fn symmetric_lift(x: u64, p: u64) -> i128 {
    if x > p / 2 {
        x as i128 - p as i128
    } else {
        x as i128
    }
}

/// Renumbers columns so that identical columns are merged; returns new row
/// supports and the number of distinct nonzero columns.
pub fn dedup_columns(rows: &[Vec<u32>], ncols: usize) -> (Vec<Vec<u32>>, usize) {
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &c in r {
            cols[c as usize].push(i as u32);
        }
    }
    let mut ids: HashMap<&[u32], u32> = HashMap::new();
    let mut remap = vec![u32::MAX; ncols];
    for (c, col) in cols.iter().enumerate() {
        if col.is_empty() {
            continue;
        }
        let next = ids.len() as u32;
        remap[c] = *ids.entry(col.as_slice()).or_insert(next);
    }
    let out = rows
        .iter()
        .map(|r| {
            let mut v: Vec<u32> = r.iter().map(|&c| remap[c as usize]).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    (out, ids.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes_are_prime() {
        for p in DEFAULT_PRIMES {
            assert!(is_prime(p));
            assert!(p < 1 << 62);
        }
        assert!(!is_prime(4_611_686_018_427_387_849));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn small_ranks() {
        let rows = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        // determinant 2: independent over Q, dependent over F_2
        assert_eq!(rank_exact(&rows), 3);
        assert_eq!(rank_mod_p(&rows, 3, 2), 2);
        assert_eq!(rank_mod_p(&rows, 3, DEFAULT_PRIMES[0]), 3);
        assert_eq!(rank_exact(&[vec![], vec![3]]), 1);
    }

    #[test]
    fn inverse() {
        let p = 1_000_000_007;
        let m = vec![vec![2, 1], vec![1, 1]];
        let inv = invert_mod_p(m, p).unwrap();
        assert_eq!(inv, vec![vec![1, p - 1], vec![p - 1, 2]]);
        assert!(invert_mod_p(vec![vec![1, 1], vec![1, 1]], p).is_none());
    }

    #[test]
    fn lift() {
        let p = 101;
        assert_eq!(symmetric_lift(100, p), -1);
        assert_eq!(symmetric_lift(3, p), 3);
    }

    #[test]
    fn dedup_keeps_rank() {
        let rows = vec![vec![0, 2, 3], vec![1, 3], vec![0, 2]];
        let (d, n) = dedup_columns(&rows, 5);
        assert_eq!(n, 3);
        assert_eq!(rank_exact(&d), rank_exact(&rows));
    }

    /// Dense rational Gaussian elimination, independent of the sparse code.
    fn dense_rank(rows: &[Vec<u32>], ncols: usize) -> usize {
        let mut m: Vec<Vec<rug::Rational>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![rug::Rational::new(); ncols];
                for &c in r {
                    v[c as usize] = rug::Rational::from(1);
                }
                v
            })
            .collect();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
            m.swap(rank, piv);
            for r in 0..m.len() {
                if r != rank && m[r][col] != 0 {
                    let f = rug::Rational::from(&m[r][col] / &m[rank][col]);
                    let (pivot_row, row) = if r < rank {
                        let (a, b) = m.split_at_mut(rank);
                        (&b[0], &mut a[r])
                    } else {
                        let (a, b) = m.split_at_mut(r);
                        (&a[rank], &mut b[0])
                    };
                    for (x, y) in row.iter_mut().zip(pivot_row) {
                        *x -= rug::Rational::from(&f * y);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn ranks_agree_with_dense_oracle(
            bits in prop::collection::vec(prop::collection::vec(any::<bool>(), 7), 1..9)
        ) {
            let rows: Vec<Vec<u32>> = bits
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32).collect())
                .collect();
            let oracle = dense_rank(&rows, 7);
            prop_assert_eq!(rank_exact(&rows), oracle);
            prop_assert_eq!(rank_mod_p(&rows, 7, DEFAULT_PRIMES[0]), oracle);
            prop_assert_eq!(rank_mod_p(&rows, 7, DEFAULT_PRIMES[1]), oracle);
            let (d, n) = dedup_columns(&rows, 7);
            prop_assert_eq!(rank_mod_p(&d, n, DEFAULT_PRIMES[0]), oracle);
        }
    }
}
