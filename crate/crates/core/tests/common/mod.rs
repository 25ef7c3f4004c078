//! Definition-level oracles on plain `Vec<Vec<bool>>` matrices, sharing no
//! code with the library's bit-packed implementation.

#![allow(dead_code)]

use boolscramble::BoolMatrix;

pub type Mat = Vec<Vec<bool>>;

pub fn to_mat(m: &BoolMatrix) -> Mat {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

pub fn from_mat(m: &Mat) -> BoolMatrix {
    BoolMatrix::from_fn(m.len(), m[0].len(), |i, j| m[i][j]).unwrap()
}

pub fn index_mat(n: usize, idx: u64) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| idx >> (i * n + j) & 1 == 1).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let (r, inner, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| (0..c).map(|j| (0..inner).any(|t| a[i][t] && b[t][j])).collect())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    (0..a[0].len())
        .map(|j| (0..a.len()).map(|i| a[i][j]).collect())
        .collect()
}

pub fn all_ones(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x))
}

pub fn wielandt_bound(n: usize) -> usize {
    (n - 1) * (n - 1) + 1
}

/// `ceil(((n-1)^2 + 1) / 2)` written directly from the definition.
pub fn h_oracle(n: usize) -> u64 {
    let num = ((n - 1) * (n - 1) + 1) as u64;
    num.div_ceil(2)
}

/// Least `r >= 1` with `A^r = J`, searched up to the Wielandt bound.
pub fn exponent_oracle(a: &Mat) -> Option<u64> {
    let mut p = a.clone();
    for r in 1..=wielandt_bound(a.len()) {
        if all_ones(&p) {
            return Some(r as u64);
        }
        p = mul(&p, a);
    }
    None
}

pub fn primitive_oracle(a: &Mat) -> bool {
    exponent_oracle(a).is_some()
}

/// Least `k >= 1` with `A^k (A^t)^k = J`, for primitive `A`.
pub fn scrambling_oracle(a: &Mat) -> u64 {
    let mut p = a.clone();
    for k in 1..=wielandt_bound(a.len()) {
        if all_ones(&mul(&p, &transpose(&p))) {
            return k as u64;
        }
        p = mul(&p, a);
    }
    panic!("scrambling oracle called on an imprimitive matrix");
}

/// Out-neighborhood of `u` after exactly `k` steps.
fn reach(a: &Mat, u: usize, k: u64) -> Vec<bool> {
    let n = a.len();
    let mut cur = vec![false; n];
    cur[u] = true;
    for _ in 0..k {
        let mut next = vec![false; n];
        for (x, _) in cur.iter().enumerate().filter(|(_, &c)| c) {
            for y in 0..n {
                next[y] |= a[x][y];
            }
        }
        cur = next;
    }
    cur
}

/// Least `k >= 1` for which the `k`-step out-neighborhoods of `u` and `v` meet.
pub fn local_scrambling_oracle(a: &Mat, u: usize, v: usize) -> u64 {
    for k in 1..=wielandt_bound(a.len()) as u64 {
        let (ru, rv) = (reach(a, u, k), reach(a, v, k));
        if ru.iter().zip(&rv).any(|(&x, &y)| x && y) {
            return k;
        }
    }
    panic!("vertices never meet");
}

/// Least cycle length: the least `i` with a nonzero diagonal entry of `A^i`.
pub fn girth_oracle(a: &Mat) -> Option<u64> {
    let mut p = a.clone();
    for i in 1..=a.len() {
        if (0..a.len()).any(|d| p[d][d]) {
            return Some(i as u64);
        }
        p = mul(&p, a);
    }
    None
}

/// Minimum number of all-ones rectangles covering the ones of `m`, by
/// iterative-deepening search over every maximal rectangle.
pub fn rank_oracle(m: &Mat) -> usize {
    let mut rows: Vec<u64> = m
        .iter()
        .map(|r| r.iter().enumerate().fold(0u64, |acc, (j, &x)| acc | (x as u64) << j))
        .filter(|&r| r != 0)
        .collect();
    rows.sort_unstable();
    rows.dedup();
    if rows.is_empty() {
        return 0;
    }
    let r = rows.len();
    assert!(r <= 20, "oracle handles at most 20 distinct rows");

    // Maximal rectangles: column set common to a row subset, closed on rows.
    let mut rects: Vec<(u32, u64)> = Vec::new();
    for subset in 1u32..1 << r {
        let cols = (0..r)
            .filter(|i| subset >> i & 1 == 1)
            .fold(u64::MAX, |acc, i| acc & rows[i]);
        if cols == 0 {
            continue;
        }
        let closed = (0..r)
            .filter(|&i| rows[i] & cols == cols)
            .fold(0u32, |acc, i| acc | 1 << i);
        if closed == subset {
            rects.push((subset, cols));
        }
    }

    fn covers(rects: &[(u32, u64)], uncovered: &mut Vec<u64>, depth: usize) -> bool {
        let Some(i) = uncovered.iter().position(|&u| u != 0) else {
            return true;
        };
        if depth == 0 {
            return false;
        }
        let j = uncovered[i].trailing_zeros();
        for &(rs, cs) in rects {
            if rs >> i & 1 == 0 || cs >> j & 1 == 0 {
                continue;
            }
            let saved = uncovered.clone();
            for (t, u) in uncovered.iter_mut().enumerate() {
                if rs >> t & 1 == 1 {
                    *u &= !cs;
                }
            }
            if covers(rects, uncovered, depth - 1) {
                return true;
            }
            *uncovered = saved;
        }
        false
    }

    (1..)
        .find(|&d| covers(&rects, &mut rows.clone(), d))
        .expect("the rows themselves form a cover")
}

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Whether some relabeling of `b` equals `a`, by trying all permutations.
pub fn similar_by_search(a: &Mat, b: &Mat) -> bool {
    let n = a.len();
    n == b.len()
        && permutations(n)
            .iter()
            .any(|p| (0..n).all(|i| (0..n).all(|j| a[i][j] == b[p[i]][p[j]])))
}

/// `W_n` written from its digraph: the cycle `1 -> 2 -> ... -> n -> 1` plus the arc `n-1 -> 1`.
pub fn wielandt_oracle(n: usize) -> Mat {
    let mut w = vec![vec![false; n]; n];
    for i in 1..n {
        w[i - 1][i] = true;
    }
    w[n - 1][0] = true;
    w[n - 2][0] = true;
    w
}
