//! Exact Boolean rank and rank factorizations.
//!
//! A rank-one Boolean summand `A_{.i} B_{i.}` is an all-ones rectangle, so the
//! Boolean rank of `M` is the least number of all-ones rectangles covering
//! its support. Only inclusion-maximal rectangles need to be considered. The
//! minimum cover is found by branch and bound: branch on the uncovered cell
//! lying in the fewest rectangles, prune with a greedy fooling set over the
//! uncovered cells, and seed the incumbent with a greedy cover.
//!
//! Boolean rank is NP-hard, so every call runs under a [`RankBudget`]; when
//! the budget is exhausted the answer is [`RankOutcome::Unknown`], never a
//! guess.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::boolmat::{bits, BoolMatrix};
use crate::error::{Error, Result};

/// Hard ceiling on the reduced dimension handled by the search (one word per row).
pub const MAX_RANK_DIM: usize = 64;

/// Limits on a single rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankBudget {
    /// Largest number of distinct nonzero rows (and columns) accepted; clamped to [`MAX_RANK_DIM`].
    pub max_dim: usize,
    pub timeout: Option<Duration>,
    pub max_rectangles: usize,
}

impl Default for RankBudget {
    fn default() -> Self {
        Self {
            max_dim: 20,
            timeout: Some(Duration::from_secs(10)),
            max_rectangles: 1 << 18,
        }
    }
}

impl RankBudget {
    pub fn unlimited_time(self) -> Self {
        Self {
            timeout: None,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    TooLarge { rows: usize, cols: usize, cap: usize },
    TooManyRectangles,
    Timeout,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::TooLarge { rows, cols, cap } => {
                write!(f, "reduced matrix {rows}x{cols} exceeds the size cap {cap}")
            }
            UnknownReason::TooManyRectangles => write!(f, "too many maximal rectangles"),
            UnknownReason::Timeout => write!(f, "timed out"),
        }
    }
}

/// Result of a budgeted rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankOutcome {
    Exact(usize),
    Unknown(UnknownReason),
}

impl RankOutcome {
    pub fn exact(self) -> Option<usize> {
        match self {
            RankOutcome::Exact(b) => Some(b),
            RankOutcome::Unknown(_) => None,
        }
    }
}

/// An all-ones submatrix, stored as packed row and column sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rectangle {
    pub rowset: Vec<u64>,
    pub colset: Vec<u64>,
}

impl Rectangle {
    pub fn rows(&self) -> Vec<usize> {
        bits(&self.rowset).collect()
    }

    pub fn cols(&self) -> Vec<usize> {
        bits(&self.colset).collect()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        bit(&self.rowset, i) && bit(&self.colset, j)
    }
}

fn bit(words: &[u64], i: usize) -> bool {
    words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
}

/// `M = A B` with `A` of shape `m x width` and `B` of shape `width x n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub a: BoolMatrix,
    pub b: BoolMatrix,
}

impl Factorization {
    pub fn new(a: BoolMatrix, b: BoolMatrix) -> Result<Self> {
        if a.cols() != b.rows() {
            return Err(Error::DimensionMismatch {
                op: "factorization",
                left: (a.rows(), a.cols()),
                right: (b.rows(), b.cols()),
            });
        }
        Ok(Self { a, b })
    }

    pub fn width(&self) -> usize {
        self.a.cols()
    }

    /// Column `i` of `A` and row `i` of `B` as a rectangle.
    pub fn rectangle(&self, i: usize) -> Rectangle {
        let rows = BoolMatrix::from_fn(1, self.a.rows(), |_, r| self.a.get(r, i)).expect("nonempty");
        Rectangle {
            rowset: rows.row(0).to_vec(),
            colset: self.b.row(i).to_vec(),
        }
    }
}

/// True iff `F.a * F.b == m`.
pub fn verify_factorization(m: &BoolMatrix, f: &Factorization) -> Result<bool> {
    if f.a.rows() != m.rows() || f.b.cols() != m.cols() {
        return Err(Error::DimensionMismatch {
            op: "verify_factorization",
            left: (m.rows(), m.cols()),
            right: (f.a.rows(), f.b.cols()),
        });
    }
    Ok(f.a.multiply(&f.b)? == *m)
}

trait Mask: Clone + Eq + Hash {
    fn and(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_subset(&self, other: &Self) -> bool;
}

impl Mask for u64 {
    fn and(&self, other: &Self) -> Self {
        self & other
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_subset(&self, other: &Self) -> bool {
        self & !other == 0
    }
}

impl Mask for Vec<u64> {
    fn and(&self, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a & b).collect()
    }
    fn is_zero(&self) -> bool {
        self.iter().all(|&w| w == 0)
    }
    fn is_subset(&self, other: &Self) -> bool {
        self.iter().zip(other).all(|(a, b)| a & !b == 0)
    }
}

/// All nonempty intersections of nonempty subsets of `rows`, in discovery order.
///
/// Each such column set `C` together with the rows containing it is an
/// inclusion-maximal rectangle, and every maximal rectangle arises this way.
fn closed_column_sets<S: Mask>(
    rows: &[S],
    limit: usize,
    deadline: Option<Instant>,
) -> std::result::Result<Vec<S>, UnknownReason> {
    let mut family: Vec<S> = Vec::new();
    let mut index: HashMap<S, ()> = HashMap::new();
    for r in rows {
        if r.is_zero() || index.contains_key(r) {
            continue;
        }
        let mut fresh = vec![r.clone()];
        for f in &family {
            let x = f.and(r);
            if !x.is_zero() {
                fresh.push(x);
            }
        }
        for x in fresh {
            if index.insert(x.clone(), ()).is_none() {
                family.push(x);
            }
        }
        if family.len() > limit {
            return Err(UnknownReason::TooManyRectangles);
        }
        if deadline.is_some_and(|d| Instant::now() > d) {
            return Err(UnknownReason::Timeout);
        }
    }
    Ok(family)
}

/// All inclusion-maximal all-ones rectangles of `m`'s support.
pub fn maximal_rectangles(m: &BoolMatrix) -> Vec<Rectangle> {
    let rows: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let sets = closed_column_sets(&rows, usize::MAX, None).expect("no limits");
    sets.into_iter()
        .map(|cols| {
            let rowset = BoolMatrix::from_fn(1, m.rows(), |_, i| cols.is_subset(&rows[i]))
                .expect("nonempty")
                .row(0)
                .to_vec();
            Rectangle {
                rowset,
                colset: cols,
            }
        })
        .collect()
}

/// `m` with duplicate and zero rows and columns removed.
struct Reduced {
    /// Single-word row masks of the reduced matrix.
    rows: Vec<u64>,
    cols: usize,
    /// Original rows represented by each reduced row.
    row_classes: Vec<Vec<usize>>,
    /// Original columns represented by each reduced column.
    col_classes: Vec<Vec<usize>>,
}

fn group_lines(m: &BoolMatrix) -> (Vec<Vec<u64>>, Vec<Vec<usize>>) {
    let mut keys: Vec<Vec<u64>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    for i in 0..m.rows() {
        let row = m.row(i);
        if row.iter().all(|&w| w == 0) {
            continue;
        }
        match seen.get(row) {
            Some(&c) => classes[c].push(i),
            None => {
                seen.insert(row.to_vec(), keys.len());
                keys.push(row.to_vec());
                classes.push(vec![i]);
            }
        }
    }
    (keys, classes)
}

fn reduce(m: &BoolMatrix, cap: usize) -> std::result::Result<Reduced, UnknownReason> {
    let (_, row_classes) = group_lines(m);
    let (_, col_classes) = group_lines(&m.transpose());
    let (r, c) = (row_classes.len(), col_classes.len());
    if r > cap || c > cap {
        return Err(UnknownReason::TooLarge {
            rows: r,
            cols: c,
            cap,
        });
    }
    let rows = row_classes
        .iter()
        .map(|rc| {
            let i = rc[0];
            col_classes
                .iter()
                .enumerate()
                .filter(|(_, cc)| m.get(i, cc[0]))
                .fold(0u64, |acc, (j, _)| acc | (1 << j))
        })
        .collect();
    Ok(Reduced {
        rows,
        cols: c,
        row_classes,
        col_classes,
    })
}

struct Search<'a> {
    support: &'a [u64],
    rects: Vec<(u64, u64)>,
    /// Rectangles containing each cell, indexed by `row * 64 + col`.
    cell_rects: Vec<Vec<u32>>,
    best: Vec<usize>,
    stack: Vec<usize>,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl Search<'_> {
    fn gain(&self, uncovered: &[u64], r: usize) -> u32 {
        let (rs, cs) = self.rects[r];
        bits(&[rs]).map(|i| (uncovered[i] & cs).count_ones()).sum()
    }

    fn apply(&self, uncovered: &mut [u64], r: usize) {
        let (rs, cs) = self.rects[r];
        for i in bits(&[rs]) {
            uncovered[i] &= !cs;
        }
    }

    fn greedy(&self, mut uncovered: Vec<u64>) -> Vec<usize> {
        let mut chosen = Vec::new();
        while uncovered.iter().any(|&w| w != 0) {
            let best = (0..self.rects.len())
                .max_by_key(|&r| (self.gain(&uncovered, r), std::cmp::Reverse(r)))
                .expect("support is covered by maximal rectangles");
            self.apply(&mut uncovered, best);
            chosen.push(best);
        }
        chosen
    }

    /// Size of a greedily built fooling set among the uncovered cells.
    fn fooling_bound(&self, uncovered: &[u64]) -> usize {
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        for (i, &row) in uncovered.iter().enumerate() {
            for j in bits(&[row]) {
                let independent = chosen.iter().all(|&(i2, j2)| {
                    (self.support[i] >> j2) & 1 == 0 || (self.support[i2] >> j) & 1 == 0
                });
                if independent {
                    chosen.push((i, j));
                }
            }
        }
        chosen.len()
    }

    fn run(&mut self, uncovered: &mut Vec<u64>) {
        if self.timed_out {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() > d) {
            self.timed_out = true;
            return;
        }
        if uncovered.iter().all(|&w| w == 0) {
            if self.stack.len() < self.best.len() {
                self.best = self.stack.clone();
            }
            return;
        }
        if self.stack.len() + self.fooling_bound(uncovered) >= self.best.len() {
            return;
        }

        let mut pick: Option<(usize, usize)> = None;
        for (i, &row) in uncovered.iter().enumerate() {
            for j in bits(&[row]) {
                let c = self.cell_rects[i * 64 + j].len();
                if pick.is_none_or(|(best, _)| c < best) {
                    pick = Some((c, i * 64 + j));
                }
            }
        }
        let (_, cell) = pick.expect("some cell is uncovered");
        let mut options: Vec<(u32, usize)> = self.cell_rects[cell]
            .iter()
            .map(|&r| (self.gain(uncovered, r as usize), r as usize))
            .collect();
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        for (_, r) in options {
            let saved = uncovered.clone();
            self.apply(uncovered, r);
            self.stack.push(r);
            self.run(uncovered);
            self.stack.pop();
            *uncovered = saved;
            if self.timed_out {
                return;
            }
        }
    }
}

/// Minimum rectangle cover of a reduced matrix, as single-word `(rows, cols)` masks.
fn min_cover(
    red: &Reduced,
    budget: &RankBudget,
    start: Instant,
) -> std::result::Result<Vec<(u64, u64)>, UnknownReason> {
    let deadline = budget.timeout.map(|t| start + t);
    let sets = closed_column_sets(&red.rows, budget.max_rectangles, deadline)?;
    let rects: Vec<(u64, u64)> = sets
        .into_iter()
        .map(|cs| {
            let rs = red
                .rows
                .iter()
                .enumerate()
                .filter(|(_, &row)| cs & !row == 0)
                .fold(0u64, |acc, (i, _)| acc | (1 << i));
            (rs, cs)
        })
        .collect();
    if rects.len() <= 1 {
        return Ok(rects);
    }

    let mut cell_rects = vec![Vec::new(); red.rows.len() * 64];
    for (r, &(rs, cs)) in rects.iter().enumerate() {
        for i in bits(&[rs]) {
            for j in bits(&[cs]) {
                cell_rects[i * 64 + j].push(r as u32);
            }
        }
    }
    let mut search = Search {
        support: &red.rows,
        rects,
        cell_rects,
        best: Vec::new(),
        stack: Vec::new(),
        deadline,
        nodes: 0,
        timed_out: false,
    };
    search.best = search.greedy(red.rows.clone());
    let mut uncovered = red.rows.clone();
    search.run(&mut uncovered);
    if search.timed_out {
        return Err(UnknownReason::Timeout);
    }
    Ok(search.best.iter().map(|&r| search.rects[r]).collect())
}

fn solve(m: &BoolMatrix, budget: &RankBudget) -> std::result::Result<Option<Factorization>, UnknownReason> {
    let start = Instant::now();
    if m.is_zero() {
        return Ok(None);
    }
    let cap = budget.max_dim.min(MAX_RANK_DIM);
    let red = reduce(m, cap)?;
    debug_assert!(red.cols <= cap);
    let cover = min_cover(&red, budget, start)?;

    let width = cover.len();
    let a = BoolMatrix::from_fn(m.rows(), width, |i, k| {
        bits(&[cover[k].0]).any(|r| red.row_classes[r].contains(&i))
    })
    .expect("width >= 1");
    let b = BoolMatrix::from_fn(width, m.cols(), |k, j| {
        bits(&[cover[k].1]).any(|c| red.col_classes[c].contains(&j))
    })
    .expect("width >= 1");
    Ok(Some(Factorization { a, b }))
}

pub fn boolean_rank(m: &BoolMatrix) -> RankOutcome {
    boolean_rank_with(m, &RankBudget::default())
}

/// Boolean rank under an explicit budget; `0` for the zero matrix.
pub fn boolean_rank_with(m: &BoolMatrix, budget: &RankBudget) -> RankOutcome {
    match solve(m, budget) {
        Ok(None) => RankOutcome::Exact(0),
        Ok(Some(f)) => RankOutcome::Exact(f.width()),
        Err(reason) => RankOutcome::Unknown(reason),
    }
}

pub fn rank_factorization(m: &BoolMatrix) -> Result<Factorization> {
    rank_factorization_with(m, &RankBudget::default())
}

/// A factorization of minimum width; among optimal covers the first found is returned.
pub fn rank_factorization_with(m: &BoolMatrix, budget: &RankBudget) -> Result<Factorization> {
    match solve(m, budget) {
        Ok(Some(f)) => Ok(f),
        Ok(None) => Err(Error::ZeroMatrix),
        Err(reason) => Err(Error::RankUnknown(reason)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{table1, table23, wielandt, PatternId, Table1Kind};
    use crate::graphprops::is_primitive;

    fn m(rows: &[&[u8]]) -> BoolMatrix {
        BoolMatrix::from_rows(rows).unwrap()
    }

    fn rect_pairs(m: &BoolMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut v: Vec<_> = maximal_rectangles(m)
            .into_iter()
            .map(|r| (r.rows(), r.cols()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn maximal_rectangle_examples() {
        assert_eq!(
            rect_pairs(&BoolMatrix::ones(3, 3).unwrap()),
            vec![(vec![0, 1, 2], vec![0, 1, 2])]
        );
        assert_eq!(
            rect_pairs(&BoolMatrix::identity(2).unwrap()),
            vec![(vec![0], vec![0]), (vec![1], vec![1])]
        );
        assert_eq!(
            rect_pairs(&wielandt(2).unwrap()),
            vec![(vec![0], vec![0, 1]), (vec![0, 1], vec![0])]
        );
        assert!(maximal_rectangles(&BoolMatrix::zeros(2, 3).unwrap()).is_empty());
    }

    #[test]
    fn rank_examples() {
        for n in 1..6 {
            assert_eq!(boolean_rank(&BoolMatrix::ones(n, n).unwrap()), RankOutcome::Exact(1));
            assert_eq!(boolean_rank(&BoolMatrix::identity(n).unwrap()), RankOutcome::Exact(n));
        }
        assert_eq!(boolean_rank(&BoolMatrix::zeros(3, 2).unwrap()), RankOutcome::Exact(0));
        let m1 = table1(Table1Kind::M1, 3, &[1, 1, 1, 1]).unwrap();
        assert_eq!(boolean_rank(&m1), RankOutcome::Exact(3));
    }

    #[test]
    fn factorization_examples() {
        let j = BoolMatrix::ones(4, 4).unwrap();
        let f = rank_factorization(&j).unwrap();
        assert_eq!(f.a, BoolMatrix::ones(4, 1).unwrap());
        assert_eq!(f.b, BoolMatrix::ones(1, 4).unwrap());

        let t = table23(PatternId::T2(1), &[1, 1, 1]).unwrap();
        assert_eq!(t, m(&[&[0, 1, 0], &[1, 0, 1], &[1, 0, 1]]));
        let f = rank_factorization(&t).unwrap();
        assert_eq!(f.width(), 2);
        assert!(verify_factorization(&t, &f).unwrap());
        assert!(!f.a.has_zero_line() && !f.b.has_zero_line());

        assert_eq!(
            rank_factorization(&BoolMatrix::zeros(2, 2).unwrap()),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn verify_examples() {
        let j2 = BoolMatrix::ones(2, 2).unwrap();
        let i2 = BoolMatrix::identity(2).unwrap();
        let f = Factorization::new(i2.clone(), i2).unwrap();
        assert!(!verify_factorization(&j2, &f).unwrap());
        let bad = Factorization::new(BoolMatrix::ones(3, 1).unwrap(), BoolMatrix::ones(1, 2).unwrap()).unwrap();
        assert!(verify_factorization(&j2, &bad).is_err());
    }

    #[test]
    fn table1_construction_factors_verify() {
        // A = [j e_2^t; j e_3^t; j e_1^t; j e_1^t], B = [e_1 | e_2 | e_3 | e_2] at b = 3.
        let a = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0], &[1, 0, 0]]);
        let b = m(&[&[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0]]);
        let m1 = table1(Table1Kind::M1, 3, &[1, 1, 1, 1]).unwrap();
        assert!(verify_factorization(&m1, &Factorization::new(a, b).unwrap()).unwrap());
    }

    #[test]
    fn size_cap_reports_unknown() {
        let i = BoolMatrix::identity(25).unwrap();
        assert!(matches!(
            boolean_rank(&i),
            RankOutcome::Unknown(UnknownReason::TooLarge { rows: 25, cols: 25, cap: 20 })
        ));
        assert!(matches!(rank_factorization(&i), Err(Error::RankUnknown(_))));
        let wide = RankBudget {
            max_dim: 30,
            ..RankBudget::default()
        };
        assert_eq!(boolean_rank_with(&i, &wide), RankOutcome::Exact(25));
        // Duplicated rows and columns do not count against the cap.
        let big = BoolMatrix::ones(40, 40).unwrap();
        assert_eq!(boolean_rank(&big), RankOutcome::Exact(1));
    }

    #[test]
    fn timeout_reports_unknown() {
        // The complement of the identity at order 20 has 2^20 - 2 maximal rectangles.
        let c = BoolMatrix::from_fn(20, 20, |i, j| i != j).unwrap();
        let tight = RankBudget {
            timeout: Some(Duration::from_millis(1)),
            max_rectangles: usize::MAX,
            ..RankBudget::default()
        };
        assert_eq!(
            boolean_rank_with(&c, &tight),
            RankOutcome::Unknown(UnknownReason::Timeout)
        );
        let few = RankBudget {
            max_rectangles: 1000,
            ..RankBudget::default()
        };
        assert_eq!(
            boolean_rank_with(&c, &few),
            RankOutcome::Unknown(UnknownReason::TooManyRectangles)
        );
    }

    #[test]
    fn primitive_factors_have_no_zero_line() {
        for n in 2..=3usize {
            for idx in 0..(1u64 << (n * n)) {
                let a = BoolMatrix::from_index(n, n, idx).unwrap();
                if is_primitive(&a).unwrap() {
                    let f = rank_factorization(&a).unwrap();
                    assert!(verify_factorization(&a, &f).unwrap());
                    assert!(!f.a.has_zero_line() && !f.b.has_zero_line(), "{a:?}");
                }
            }
        }
    }
}
