//! Global and local scrambling indices.
//!
//! `k(A)` is the least `k` such that every two rows of `A^k` share a one,
//! equivalently `A^k (A^t)^k = J`. The local index `k_{u,v}` is the least `k`
//! for which the `k`-step out-neighborhoods of `u` and `v` meet.

use serde::Serialize;

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};
use crate::graphprops::is_primitive;

/// Scrambling index together with a pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScrambleResult {
    pub k: u64,
    /// Zero-based vertices whose rows in `A^{k-1}` are disjoint; `None` when `k = 1`.
    pub witness_pair: Option<(usize, usize)>,
}

/// `ceil(((n-1)^2 + 1) / 2)`, the largest scrambling index at order `n >= 1`.
pub(crate) fn order_bound(n: usize) -> u64 {
    let m = n.saturating_sub(1) as u64;
    (m * m + 2) / 2
}

/// `A^k (A^t)^k`; entry `(i, j)` is one iff rows `i` and `j` of `A^k` intersect.
pub fn meet_matrix(a: &BoolMatrix, k: u64) -> Result<BoolMatrix> {
    a.order("meet_matrix")?;
    if k == 0 {
        return Err(Error::InvalidParameter("meet_matrix needs k >= 1".into()));
    }
    let p = a.power(k)?;
    p.multiply(&p.transpose())
}

/// First pair of rows of `p` that fail to intersect, trying `probe` first.
fn disjoint_pair(p: &BoolMatrix, probe: Option<(usize, usize)>) -> Option<(usize, usize)> {
    if let Some((u, v)) = probe {
        if !p.rows_intersect(u, v) {
            return Some((u, v));
        }
    }
    let n = p.rows();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .find(|&(u, v)| !p.rows_intersect(u, v))
}

pub fn scrambling_index(a: &BoolMatrix) -> Result<ScrambleResult> {
    if !is_primitive(a)? {
        return Err(Error::NotPrimitive);
    }
    let guard = order_bound(a.rows());
    let mut witness = None;
    let mut k = 1u64;
    let mut p = a.clone();
    while let Some(pair) = disjoint_pair(&p, witness) {
        witness = Some(pair);
        k += 1;
        if k > guard {
            return Err(Error::GuardExceeded(format!(
                "scrambling index exceeded h_n = {guard}"
            )));
        }
        p = p.multiply(a)?;
    }
    Ok(ScrambleResult {
        k,
        witness_pair: witness,
    })
}

/// Local scrambling index of `u` and `v`; `0` when `u == v`.
pub fn local_scrambling_index(a: &BoolMatrix, u: usize, v: usize) -> Result<u64> {
    if !is_primitive(a)? {
        return Err(Error::NotPrimitive);
    }
    let n = a.rows();
    for x in [u, v] {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, bound: n });
        }
    }
    if u == v {
        return Ok(0);
    }
    let guard = order_bound(n);
    let mut ru = a.row(u).to_vec();
    let mut rv = a.row(v).to_vec();
    let mut k = 1u64;
    while !ru.iter().zip(&rv).any(|(x, y)| x & y != 0) {
        k += 1;
        if k > guard {
            return Err(Error::GuardExceeded(format!(
                "local scrambling index exceeded h_n = {guard}"
            )));
        }
        ru = a.row_times(&ru);
        rv = a.row_times(&rv);
    }
    Ok(k)
}
