//! Digraph view of a square Boolean matrix: connectivity, girth, primitivity
//! and exponent.

use std::collections::VecDeque;

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};

/// The digraph `D(A)`: arc `i -> j` iff `A[i][j] = 1`.
#[derive(Debug, Clone, Copy)]
pub struct DigraphView<'a> {
    adjacency: &'a BoolMatrix,
    n: usize,
}

impl<'a> DigraphView<'a> {
    pub fn new(adjacency: &'a BoolMatrix) -> Result<Self> {
        let n = adjacency.order("digraph")?;
        Ok(Self { adjacency, n })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &'a BoolMatrix {
        self.adjacency
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + 'a {
        self.adjacency.row_support(u)
    }

    /// BFS distances from `root`; `None` for unreachable vertices.
    fn bfs(&self, root: usize, reverse: Option<&BoolMatrix>) -> Vec<Option<usize>> {
        let adj = reverse.unwrap_or(self.adjacency);
        let mut dist = vec![None; self.n];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices are labeled");
            for v in adj.row_support(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_strongly_connected(&self) -> bool {
        let forward = self.bfs(0, None);
        if forward.iter().any(Option::is_none) {
            return false;
        }
        let reversed = self.adjacency.transpose();
        self.bfs(0, Some(&reversed)).iter().all(Option::is_some)
    }

    /// Length of a shortest directed cycle; a loop has length 1.
    pub fn girth(&self) -> Result<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.n {
            if self.adjacency.get(v, v) {
                return Ok(1);
            }
            let dist = self.bfs(v, None);
            for (u, d) in dist.iter().enumerate() {
                if let Some(d) = d {
                    if self.adjacency.get(u, v) {
                        let len = d + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best.ok_or(Error::Acyclic)
    }

    /// Index of imprimitivity of a strongly connected digraph: the gcd of all
    /// cycle lengths, read off a BFS level labeling.
    fn period(&self) -> usize {
        let level = self.bfs(0, None);
        let mut g = 0usize;
        for u in 0..self.n {
            let lu = level[u].expect("strongly connected");
            for v in self.out_neighbors(u) {
                let lv = level[v].expect("strongly connected");
                g = gcd(g, (lu + 1).abs_diff(lv));
            }
        }
        g
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_strongly_connected(a: &BoolMatrix) -> Result<bool> {
    Ok(DigraphView::new(a)?.is_strongly_connected())
}

pub fn girth(a: &BoolMatrix) -> Result<usize> {
    DigraphView::new(a)?.girth()
}

/// True iff `D(A)` is strongly connected with cycle-length gcd 1.
pub fn is_primitive(a: &BoolMatrix) -> Result<bool> {
    let d = DigraphView::new(a)?;
    if d.order() == 1 {
        return Ok(a.get(0, 0));
    }
    Ok(d.is_strongly_connected() && d.period() == 1)
}

/// Wielandt's bound `(n-1)^2 + 1` on the exponent of a primitive matrix of order `n`.
pub fn wielandt_bound(n: usize) -> u64 {
    let m = n.saturating_sub(1) as u64;
    m * m + 1
}

/// Smallest `r >= 1` with `A^r = J`.
pub fn exponent(a: &BoolMatrix) -> Result<u64> {
    if !is_primitive(a)? {
        return Err(Error::NotPrimitive);
    }
    let guard = wielandt_bound(a.rows());
    for (r, p) in (1..).zip(a.powers()?) {
        if p.is_all_ones() {
            return Ok(r);
        }
        if r > guard {
            break;
        }
    }
    Err(Error::GuardExceeded(format!(
        "exponent iteration passed the Wielandt bound {guard}"
    )))
}
