//! Dense Boolean (0,1)-matrices over the semiring `1 + 1 = 1`.
//!
//! Rows are bit-packed into `u64` words, so a product is computed row by row as
//! the OR of the rows of the right factor selected by the set bits of the left
//! factor's row. Matrices of up to 64 columns use a single word per row; wider
//! matrices use multi-word rows.

mod permutation;
mod text;

pub use permutation::Permutation;
pub use text::{parse_matrix, ParseError};

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// A dense `rows x cols` Boolean matrix.
///
/// Bits beyond column `cols - 1` in the last word of every row are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BoolMatrix {
    /// The `rows x cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        })
    }

    /// The `rows x cols` all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        let row = full_row(cols);
        for i in 0..rows {
            m.row_mut(i).copy_from_slice(&row);
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from nested rows of `0`/`1` values; any nonzero entry is a one.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                left: (1, cols),
                right: (1, bad.as_ref().len()),
            });
        }
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] != 0)
    }

    /// Decodes a matrix from an integer whose bit `i * cols + j` is entry `(i, j)`.
    ///
    /// Requires `rows * cols <= 64`.
    pub fn from_index(rows: usize, cols: usize, index: u64) -> Result<Self> {
        if rows * cols > 64 {
            return Err(Error::InvalidParameter(format!(
                "from_index supports at most 64 entries, got {rows}x{cols}"
            )));
        }
        Self::from_fn(rows, cols, |i, j| (index >> (i * cols + j)) & 1 == 1)
    }

    /// Builds a matrix from single-word row masks (bit `j` of `masks[i]` is entry `(i, j)`).
    pub fn from_row_masks(cols: usize, masks: &[u64]) -> Result<Self> {
        if cols > WORD {
            return Err(Error::InvalidParameter(format!(
                "from_row_masks supports at most {WORD} columns"
            )));
        }
        let mut m = Self::zeros(masks.len(), cols)?;
        let keep = full_row(cols)[0];
        for (i, &mask) in masks.iter().enumerate() {
            m.data[i] = mask & keep;
        }
        Ok(m)
    }

    /// Column vector `e_i(n)` (zero-based `i`).
    pub fn unit_column(n: usize, i: usize) -> Result<Self> {
        check_index(i, n)?;
        Self::from_fn(n, 1, |r, _| r == i)
    }

    /// Row vector `e_i(n)^t` (zero-based `i`).
    pub fn unit_row(n: usize, i: usize) -> Result<Self> {
        check_index(i, n)?;
        Self::from_fn(1, n, |_, c| c == i)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Order of a square matrix, or an error naming `op`.
    pub fn order(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    /// Packed words of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// Row `i` as a single word; only meaningful when `cols <= 64`.
    #[inline]
    pub fn row_mask(&self, i: usize) -> u64 {
        debug_assert!(self.cols <= WORD);
        self.data[i * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.stride + j / WORD];
        let bit = 1u64 << (j % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    /// Column indices of the ones in row `i`, ascending.
    pub fn row_support(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(i))
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// True iff every entry is one (the matrix is `J`).
    pub fn is_all_ones(&self) -> bool {
        let full = full_row(self.cols);
        (0..self.rows).all(|i| self.row(i) == full.as_slice())
    }

    /// True iff rows `i` and `j` share a column holding a one.
    #[inline]
    pub fn rows_intersect(&self, i: usize, j: usize) -> bool {
        self.row(i).iter().zip(self.row(j)).any(|(a, b)| a & b != 0)
    }

    /// Boolean product `self * rhs`.
    pub fn multiply(&self, rhs: &BoolMatrix) -> Result<BoolMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "multiply",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = BoolMatrix::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            let acc = out.row_mut(i);
            for t in bits(&self.data[i * self.stride..(i + 1) * self.stride]) {
                for (a, b) in acc.iter_mut().zip(rhs.row(t)) {
                    *a |= b;
                }
            }
        }
        Ok(out)
    }

    /// The row vector `x * self`, where `x` is a packed row over `self.rows()` entries.
    pub fn row_times(&self, x: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; self.stride];
        for t in bits(x) {
            for (a, b) in acc.iter_mut().zip(self.row(t)) {
                *a |= b;
            }
        }
        acc
    }

    /// Entrywise OR.
    pub fn add(&self, rhs: &BoolMatrix) -> Result<BoolMatrix> {
        self.same_shape("add", rhs)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a |= b;
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(self.cols, self.rows).expect("nonempty");
        for i in 0..self.rows {
            for j in self.row_support(i) {
                out.set(j, i, true);
            }
        }
        out
    }

    /// Boolean `k`-th power by repeated squaring; `power(0)` is the identity.
    pub fn power(&self, k: u64) -> Result<BoolMatrix> {
        let n = self.order("power")?;
        let mut result = BoolMatrix::identity(n)?;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(result)
    }

    /// Iterator over `A, A^2, A^3, ...` built by successive multiplication by `A`.
    pub fn powers(&self) -> Result<Powers<'_>> {
        self.order("powers")?;
        Ok(Powers {
            base: self,
            current: None,
        })
    }

    /// Symmetric relabeling: `result[i][j] = self[p(i)][p(j)]`.
    ///
    /// With this convention `permute_sym(A, p.compose(q)) == permute_sym(permute_sym(A, p), q)`.
    pub fn permute_sym(&self, p: &Permutation) -> Result<BoolMatrix> {
        let n = self.order("permute_sym")?;
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                op: "permute_sym",
                left: (n, n),
                right: (p.len(), p.len()),
            });
        }
        BoolMatrix::from_fn(n, n, |i, j| self.get(p.apply(i), p.apply(j)))
    }

    /// True iff `other <= self` entrywise.
    pub fn dominates(&self, other: &BoolMatrix) -> Result<bool> {
        self.same_shape("dominates", other)?;
        Ok(self.data.iter().zip(&other.data).all(|(a, b)| b & !a == 0))
    }

    /// True iff some row or some column is entirely zero.
    pub fn has_zero_line(&self) -> bool {
        if (0..self.rows).any(|i| self.row(i).iter().all(|&w| w == 0)) {
            return true;
        }
        let mut seen = vec![0u64; self.stride];
        for i in 0..self.rows {
            for (s, w) in seen.iter_mut().zip(self.row(i)) {
                *s |= w;
            }
        }
        seen != full_row(self.cols)
    }

    /// Rows `rowset` by columns `colset`, in the given order.
    pub fn submatrix(&self, rowset: &[usize], colset: &[usize]) -> Result<BoolMatrix> {
        if rowset.is_empty() || colset.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        for &r in rowset {
            check_index(r, self.rows)?;
        }
        for &c in colset {
            check_index(c, self.cols)?;
        }
        BoolMatrix::from_fn(rowset.len(), colset.len(), |i, j| {
            self.get(rowset[i], colset[j])
        })
    }

    /// Dense `0`/`1` rows, convenient for tests and serialization.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    /// Serializes in the text format accepted by [`parse_matrix`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    fn same_shape(&self, op: &'static str, other: &BoolMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Successive powers of a square matrix; see [`BoolMatrix::powers`].
pub struct Powers<'a> {
    base: &'a BoolMatrix,
    current: Option<BoolMatrix>,
}

impl Iterator for Powers<'_> {
    type Item = BoolMatrix;

    fn next(&mut self) -> Option<BoolMatrix> {
        let next = match &self.current {
            None => self.base.clone(),
            Some(p) => p.multiply(self.base).expect("square"),
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// Packed row with ones in columns `0..cols`.
pub(crate) fn full_row(cols: usize) -> Vec<u64> {
    let mut row = vec![u64::MAX; words_for(cols)];
    let rem = cols % WORD;
    if rem != 0 {
        *row.last_mut().expect("nonempty") = (1u64 << rem) - 1;
    }
    row
}

/// Indices of the set bits of a packed row, ascending.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            }
        })
    })
}

fn check_index(index: usize, bound: usize) -> Result<()> {
    if index < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> BoolMatrix {
        BoolMatrix::from_rows(rows).unwrap()
    }

    fn w2() -> BoolMatrix {
        m(&[&[1, 1], &[1, 0]])
    }

    fn w3() -> BoolMatrix {
        m(&[&[0, 1, 0], &[1, 0, 1], &[1, 0, 0]])
    }

    /// Entry-by-entry product straight from the definition.
    fn naive_product(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
        BoolMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).any(|t| a.get(i, t) && b.get(t, j))
        })
        .unwrap()
    }

    #[test]
    fn empty_matrix_rejected() {
        assert_eq!(BoolMatrix::zeros(0, 3), Err(Error::EmptyMatrix));
        assert_eq!(BoolMatrix::zeros(2, 0), Err(Error::EmptyMatrix));
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(w2().multiply(&w2()).unwrap(), BoolMatrix::ones(2, 2).unwrap());
        let a = w3();
        assert_eq!(a.multiply(&BoolMatrix::identity(3).unwrap()).unwrap(), a);
        let j = BoolMatrix::ones(5, 5).unwrap();
        assert_eq!(j.multiply(&j).unwrap(), j);
    }

    #[test]
    fn multiply_dimension_mismatch() {
        let a = BoolMatrix::ones(2, 3).unwrap();
        assert!(matches!(
            a.multiply(&a),
            Err(Error::DimensionMismatch { op: "multiply", .. })
        ));
    }

    #[test]
    fn add_examples() {
        let a = w3();
        let o = BoolMatrix::zeros(3, 3).unwrap();
        assert_eq!(a.add(&o).unwrap(), a);
        assert_eq!(a.add(&a).unwrap(), a);
        let e1 = BoolMatrix::unit_row(2, 0).unwrap();
        let e2 = BoolMatrix::unit_row(2, 1).unwrap();
        assert_eq!(e1.add(&e2).unwrap(), BoolMatrix::ones(1, 2).unwrap());
        assert!(a.add(&BoolMatrix::ones(2, 3).unwrap()).is_err());
    }

    #[test]
    fn transpose_examples() {
        let i4 = BoolMatrix::identity(4).unwrap();
        assert_eq!(i4.transpose(), i4);
        assert_eq!(w3().transpose().transpose(), w3());
        assert_eq!(
            BoolMatrix::unit_column(3, 0).unwrap().transpose(),
            BoolMatrix::unit_row(3, 0).unwrap()
        );
    }

    #[test]
    fn power_examples() {
        assert_eq!(w3().power(0).unwrap(), BoolMatrix::identity(3).unwrap());
        assert_eq!(w3().power(2).unwrap(), m(&[&[1, 0, 1], &[1, 1, 0], &[0, 1, 0]]));
        let j = BoolMatrix::ones(4, 4).unwrap();
        for k in 1..5 {
            assert_eq!(j.power(k).unwrap(), j);
        }
        assert!(BoolMatrix::ones(2, 3).unwrap().power(2).is_err());
    }

    #[test]
    fn powers_iterator_matches_fast_power() {
        let a = w3();
        for (k, p) in a.powers().unwrap().take(8).enumerate() {
            assert_eq!(p, a.power(k as u64 + 1).unwrap());
        }
    }

    #[test]
    fn permute_sym_examples() {
        let a = w3();
        assert_eq!(a.permute_sym(&Permutation::identity(3)).unwrap(), a);
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(w2().permute_sym(&swap).unwrap(), m(&[&[0, 1], &[1, 1]]));
        assert!(a.permute_sym(&swap).is_err());
    }

    #[test]
    fn dominates_examples() {
        let a = w3();
        assert!(BoolMatrix::ones(3, 3).unwrap().dominates(&a).unwrap());
        assert!(a.dominates(&a).unwrap());
        assert!(!BoolMatrix::identity(2).unwrap().dominates(&w2()).unwrap());
    }

    #[test]
    fn zero_line_examples() {
        assert!(!BoolMatrix::identity(4).unwrap().has_zero_line());
        assert!(BoolMatrix::zeros(2, 2).unwrap().has_zero_line());
        assert!(BoolMatrix::unit_column(3, 0).unwrap().has_zero_line());
        // zero column only
        assert!(m(&[&[1, 0], &[1, 0]]).has_zero_line());
    }

    #[test]
    fn submatrix_examples() {
        let a = w3();
        assert_eq!(a.submatrix(&[0, 1, 2], &[0, 1, 2]).unwrap(), a);
        let sq = a.power(2).unwrap();
        assert_eq!(sq.submatrix(&[0, 2], &[1, 2]).unwrap(), m(&[&[0, 1], &[1, 0]]));
        let j4 = BoolMatrix::ones(4, 4).unwrap();
        assert_eq!(j4.submatrix(&[0, 1], &[2]).unwrap(), BoolMatrix::ones(2, 1).unwrap());
        assert_eq!(
            a.submatrix(&[0, 3], &[0]),
            Err(Error::IndexOutOfRange { index: 3, bound: 3 })
        );
    }

    #[test]
    fn wide_rows_span_words() {
        let n = 130;
        let a = BoolMatrix::from_fn(n, n, |i, j| j == (i + 1) % n).unwrap();
        let sq = a.multiply(&a).unwrap();
        assert_eq!(sq, naive_product(&a, &a));
        assert!(sq.get(n - 1, 1));
        assert!(!BoolMatrix::ones(n, n).unwrap().has_zero_line());
        assert!(BoolMatrix::ones(n, n).unwrap().is_all_ones());
        assert_eq!(a.transpose().transpose(), a);
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = BoolMatrix> {
        proptest::collection::vec(any::<bool>(), rows * cols)
            .prop_map(move |v| BoolMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (BoolMatrix, BoolMatrix, BoolMatrix, BoolMatrix)> {
        (1usize..=8, 1usize..=8, 1usize..=8, 1usize..=8).prop_flat_map(|(p, q, r, s)| {
            (arb_matrix(p, q), arb_matrix(q, r), arb_matrix(q, r), arb_matrix(r, s))
        })
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn product_matches_definition((a, b, _, _) in arb_triple()) {
            prop_assert_eq!(a.multiply(&b).unwrap(), naive_product(&a, &b));
        }

        #[test]
        fn semiring_laws((a, b, c, d) in arb_triple()) {
            // associativity
            let left = a.multiply(&b).unwrap().multiply(&d).unwrap();
            let right = a.multiply(&b.multiply(&d).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            // distributivity
            let lhs = a.multiply(&b.add(&c).unwrap()).unwrap();
            let rhs = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.add(&a).unwrap(), a.clone());
            // transpose reverses products
            prop_assert_eq!(
                a.multiply(&b).unwrap().transpose(),
                b.transpose().multiply(&a.transpose()).unwrap()
            );
        }

        #[test]
        fn power_adds_exponents(a in (1usize..=8).prop_flat_map(|n| arb_matrix(n, n)), j in 0u64..6, k in 0u64..6) {
            prop_assert_eq!(
                a.power(j + k).unwrap(),
                a.power(j).unwrap().multiply(&a.power(k).unwrap()).unwrap()
            );
        }

        #[test]
        fn permute_sym_composes(
            (a, p, q) in (1usize..=8).prop_flat_map(|n| (arb_matrix(n, n), arb_perm(n), arb_perm(n)))
        ) {
            prop_assert_eq!(
                a.permute_sym(&p.compose(&q).unwrap()).unwrap(),
                a.permute_sym(&p).unwrap().permute_sym(&q).unwrap()
            );
        }

        #[test]
        fn dominance_is_partial_order(
            (a, b, c) in (1usize..=5, 1usize..=5).prop_flat_map(|(r, s)| (arb_matrix(r, s), arb_matrix(r, s), arb_matrix(r, s)))
        ) {
            prop_assert!(a.dominates(&a).unwrap());
            if a.dominates(&b).unwrap() && b.dominates(&a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            // sums give comparable chains for transitivity
            let ab = a.add(&b).unwrap();
            let abc = ab.add(&c).unwrap();
            prop_assert!(abc.dominates(&ab).unwrap() && ab.dominates(&a).unwrap());
            prop_assert!(abc.dominates(&a).unwrap());
            if a.dominates(&b).unwrap() && b.dominates(&c).unwrap() {
                prop_assert!(a.dominates(&c).unwrap());
            }
        }
    }
}
