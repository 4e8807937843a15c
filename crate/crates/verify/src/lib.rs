//! Throwaway reference computations that share no code with the library.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Product `e_i e_j = Σ c e_k` with integer coefficients, one object.
pub struct Algebra {
    pub dim: usize,
    pub mult: Vec<Vec<Vec<(usize, i64)>>>,
}

impl Algebra {
    fn table(dim: usize, entries: &[(usize, usize, usize, i64)]) -> Algebra {
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for &(i, j, k, c) in entries {
            mult[i][j].push((k, c));
        }
        Algebra { dim, mult }
    }

    /// `k[x]/xⁿ`, basis `1, x, …, x^{n-1}`.
    pub fn truncated(n: usize) -> Algebra {
        let mut e = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    e.push((i, j, i + j, 1));
                }
            }
        }
        Algebra::table(n, &e)
    }

    pub fn ground() -> Algebra {
        Algebra::table(1, &[(0, 0, 0, 1)])
    }

    /// Paths of `1 → 2` as one algebra: basis `e1, e2, a` with `a = e2 a = a e1`.
    pub fn quiver_a2() -> Algebra {
        Algebra::table(3, &[(0, 0, 0, 1), (1, 1, 1, 1), (1, 2, 2, 1), (2, 0, 2, 1)])
    }
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|v| BigRational::from_integer((*v).into())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() * &inv;
                for j in c..cols {
                    let t = m[r][j].clone() * &f;
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn index(word: &[usize], dim: usize) -> usize {
    word.iter().fold(0, |acc, &x| acc * dim + x)
}

fn words(len: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| (0..dim).map(move |x| [w.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Matrix of `b: A^{⊗(m+1)} → A^{⊗m}` as rows of the target.
fn hochschild_b(a: &Algebra, m: usize) -> Vec<Vec<i64>> {
    let src = words(m + 1, a.dim);
    let tgt_len = a.dim.pow(m as u32);
    let mut mat = vec![vec![0i64; src.len()]; tgt_len];
    for (col, w) in src.iter().enumerate() {
        for i in 0..m {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for &(k, c) in &a.mult[w[i]][w[i + 1]] {
                let mut t = w[..i].to_vec();
                t.push(k);
                t.extend_from_slice(&w[i + 2..]);
                mat[index(&t, a.dim)][col] += sign * c;
            }
        }
        let sign = if m % 2 == 0 { 1 } else { -1 };
        for &(k, c) in &a.mult[w[m]][w[0]] {
            let mut t = vec![k];
            t.extend_from_slice(&w[1..m]);
            mat[index(&t, a.dim)][col] += sign * c;
        }
    }
    mat
}

/// `HH_0..=HH_top` from the full (unnormalized) Hochschild complex.
pub fn bar_homology(a: &Algebra, top: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=top + 1).map(|m| if m == 0 { 0 } else { rank(&hochschild_b(a, m)) }).collect();
    (0..=top).map(|m| a.dim.pow(m as u32 + 1) - ranks[m] - ranks[m + 1]).collect()
}

/// `HH(k[x]/xⁿ)` from the 2-periodic resolution: the differentials become
/// `0` and multiplication by `n x^{n-1}` alternately.
pub fn periodic_homology(n: usize, top: usize) -> Vec<usize> {
    let mut mult = vec![vec![0i64; n]; n];
    mult[n - 1][0] = n as i64;
    let r = rank(&mult);
    (0..=top).map(|i| if i == 0 { n } else { n - r }).collect()
}

/// Partitions of `n` counted by recursion on the largest part.
pub fn partition_count(n: usize) -> u64 {
    fn go(n: usize, max: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|p| go(n - p, p)).sum()
    }
    go(n, n)
}

/// Multisets of weighted graded generators of total weight `n`, odd ones at
/// most once; one generator per basis vector of `h` and weight `1..=n`.
pub fn symmetric_series(h: &BTreeMap<i64, u64>, n: usize) -> BTreeMap<i64, u64> {
    let mut gens = Vec::new();
    for (&k, &d) in h {
        for _ in 0..d {
            for w in 1..=n {
                gens.push((k, w));
            }
        }
    }
    fn go(gens: &[(i64, usize)], left: usize, deg: i64, out: &mut BTreeMap<i64, u64>) {
        if left == 0 {
            *out.entry(deg).or_insert(0) += 1;
            return;
        }
        let Some((&(k, w), rest)) = gens.split_first() else { return };
        let odd = k.rem_euclid(2) == 1;
        let mut m = 0;
        while m * w <= left && (!odd || m <= 1) {
            go(rest, left - m * w, deg + m as i64 * k, out);
            m += 1;
        }
    }
    let mut out = BTreeMap::new();
    go(&gens, n, 0, &mut out);
    out
}
