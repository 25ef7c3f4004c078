//! Generators for the named matrix families.
//!
//! * `W_n`, the adjacency matrix of the Wielandt graph: the Hamilton cycle
//!   `1 -> 2 -> ... -> n -> 1` plus the arc `n-1 -> 1`.
//! * `J_n`.
//! * The parametric block forms `M1`, `M2`, `M3` (Boolean rank `b >= 3`,
//!   scrambling index `h(b) + 1`).
//! * The 21 fixed block patterns of Boolean rank 2 with scrambling index 2:
//!   three whose rank factorization `M = AB` has `BA = W_2` (`T2(1..=3)`) and
//!   eighteen with `BA = J_2` (`T3(1..=18)`).
//!
//! Block forms are expanded from a 0/1 pattern: a one becomes an all-ones
//! block, a zero an all-zeros block, and diagonal blocks are square. Block
//! indices are 1-based in the docs and 0-based in the API.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};

/// Largest total order any generator will build.
pub const MAX_GENERATED_ORDER: usize = 4096;

/// A square 0/1 pattern whose ones mark all-ones blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatrix(BoolMatrix);

impl PatternMatrix {
    pub fn new(m: BoolMatrix) -> Result<Self> {
        m.order("pattern")?;
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &BoolMatrix {
        &self.0
    }
}

fn check_sizes(sizes: &[usize], expected: usize) -> Result<usize> {
    if sizes.len() != expected {
        return Err(Error::InvalidParameter(format!(
            "expected {expected} block sizes, got {}",
            sizes.len()
        )));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter("block sizes must be >= 1".into()));
    }
    let total = sizes
        .iter()
        .try_fold(0usize, |acc, &s| acc.checked_add(s))
        .filter(|&t| t <= MAX_GENERATED_ORDER)
        .ok_or_else(|| {
            Error::InvalidParameter(format!("total order exceeds {MAX_GENERATED_ORDER}"))
        })?;
    Ok(total)
}

/// Block expansion: block `(i, j)` is `J` of shape `sizes[i] x sizes[j]` iff `P[i][j] = 1`.
pub fn expand_pattern(p: &PatternMatrix, sizes: &[usize]) -> Result<BoolMatrix> {
    let total = check_sizes(sizes, p.dim())?;
    let mut block = Vec::with_capacity(total);
    for (b, &s) in sizes.iter().enumerate() {
        block.extend(std::iter::repeat_n(b, s));
    }
    BoolMatrix::from_fn(total, total, |i, j| p.0.get(block[i], block[j]))
}

/// `W_n` for `n >= 2`.
pub fn wielandt(n: usize) -> Result<BoolMatrix> {
    if !(2..=MAX_GENERATED_ORDER).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "wielandt order must be in 2..={MAX_GENERATED_ORDER}, got {n}"
        )));
    }
    BoolMatrix::from_fn(n, n, |i, j| j == i + 1 || (j == 0 && i + 2 >= n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table1Kind {
    M1,
    M2,
    M3,
}

impl Table1Kind {
    pub const ALL: [Table1Kind; 3] = [Table1Kind::M1, Table1Kind::M2, Table1Kind::M3];

    /// Number of extra blocks beyond the `b` principal ones.
    pub fn extra_blocks(self) -> usize {
        match self {
            Table1Kind::M1 | Table1Kind::M2 => 1,
            Table1Kind::M3 => 2,
        }
    }
}

/// The `(b + extra) x (b + extra)` pattern of `M1`, `M2` or `M3`.
///
/// Principal block row `i < b` feeds block `i + 1`, block row `b` feeds block
/// 1, and block row `b - 2` also feeds every extra block. An extra block row
/// feeds block 1 (`M1`; the first extra of `M3`) or blocks 1 and `b` (`M2`;
/// the second extra of `M3`).
pub fn table1_pattern(kind: Table1Kind, b: usize) -> Result<PatternMatrix> {
    if !(3..=MAX_GENERATED_ORDER).contains(&b) {
        return Err(Error::InvalidParameter(format!(
            "table-1 forms need b >= 3, got {b}"
        )));
    }
    let dim = b + kind.extra_blocks();
    let mut p = BoolMatrix::zeros(dim, dim)?;
    for i in 0..b - 1 {
        p.set(i, i + 1, true);
    }
    p.set(b - 1, 0, true);
    for x in b..dim {
        p.set(b - 3, x, true);
    }
    match kind {
        Table1Kind::M1 => p.set(b, 0, true),
        Table1Kind::M2 => {
            p.set(b, 0, true);
            p.set(b, b - 1, true);
        }
        Table1Kind::M3 => {
            p.set(b, 0, true);
            p.set(b + 1, 0, true);
            p.set(b + 1, b - 1, true);
        }
    }
    PatternMatrix::new(p)
}

/// `sizes` lists `n_1..n_b` followed by the extra block sizes (`m_1`, `m_2`, or `m_3, p_3`).
pub fn table1(kind: Table1Kind, b: usize, sizes: &[usize]) -> Result<BoolMatrix> {
    expand_pattern(&table1_pattern(kind, b)?, sizes)
}

/// One of the 21 fixed rank-two patterns, 1-based within its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternId {
    T2(u8),
    T3(u8),
}

impl PatternId {
    pub fn all() -> impl Iterator<Item = PatternId> {
        (1..=3)
            .map(PatternId::T2)
            .chain((1..=18).map(PatternId::T3))
    }

    fn data(self) -> Option<&'static [&'static [u8]]> {
        match self {
            PatternId::T2(i @ 1..=3) => Some(T2_PATTERNS[i as usize - 1]),
            PatternId::T3(i @ 1..=18) => Some(T3_PATTERNS[i as usize - 1]),
            _ => None,
        }
    }

    pub fn pattern(self) -> Result<PatternMatrix> {
        let rows = self
            .data()
            .ok_or_else(|| Error::InvalidParameter(format!("no such pattern {self}")))?;
        PatternMatrix::new(BoolMatrix::from_rows(rows)?)
    }

    pub fn dim(self) -> Result<usize> {
        Ok(self.pattern()?.dim())
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternId::T2(i) => write!(f, "T2({i})"),
            PatternId::T3(i) => write!(f, "T3({i})"),
        }
    }
}

// Rank-two forms with BA = W_2, in reading order.
const T2_PATTERNS: [&[&[u8]]; 3] = [
    &[&[0, 1, 0], &[1, 0, 1], &[1, 0, 1]],
    &[&[0, 1, 0], &[1, 0, 1], &[1, 1, 1]],
    &[&[0, 1, 0, 0], &[1, 0, 1, 1], &[1, 0, 1, 1], &[1, 1, 1, 1]],
];

// Rank-two forms with BA = J_2, in reading order.
const T3_PATTERNS: [&[&[u8]]; 18] = [
    &[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 1, 0, 0], &[0, 0, 1, 1]],
    &[
        &[1, 1, 0, 0, 1],
        &[0, 0, 1, 1, 0],
        &[1, 1, 0, 0, 1],
        &[0, 0, 1, 1, 0],
        &[1, 1, 1, 1, 1],
    ],
    &[
        &[1, 1, 0, 0, 0],
        &[0, 0, 1, 1, 1],
        &[1, 1, 0, 0, 0],
        &[0, 0, 1, 1, 1],
        &[1, 1, 1, 1, 1],
    ],
    &[
        &[1, 1, 0, 0, 1, 0],
        &[0, 0, 1, 1, 0, 1],
        &[1, 1, 0, 0, 1, 0],
        &[0, 0, 1, 1, 0, 1],
        &[1, 1, 1, 1, 1, 1],
        &[1, 1, 1, 1, 1, 1],
    ],
    &[&[1, 1, 0], &[0, 0, 1], &[1, 1, 1]],
    &[&[1, 1, 0, 1], &[0, 0, 1, 0], &[1, 1, 1, 1], &[1, 1, 1, 1]],
    &[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 1, 1, 1], &[1, 1, 0, 0]],
    &[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 1, 1, 1], &[0, 0, 1, 1]],
    &[
        &[1, 1, 0, 1, 0],
        &[0, 0, 1, 0, 1],
        &[1, 1, 1, 1, 1],
        &[1, 1, 1, 1, 1],
        &[1, 1, 0, 1, 0],
    ],
    &[
        &[1, 1, 0, 1, 0],
        &[0, 0, 1, 0, 1],
        &[1, 1, 1, 1, 1],
        &[1, 1, 1, 1, 1],
        &[0, 0, 1, 0, 1],
    ],
    &[&[1, 1, 1], &[1, 0, 0], &[0, 1, 1]],
    &[&[1, 1, 1, 1], &[1, 0, 0, 1], &[0, 1, 1, 0], &[1, 0, 0, 1]],
    &[&[1, 1, 1, 1], &[1, 0, 0, 1], &[0, 1, 1, 0], &[0, 1, 1, 0]],
    &[&[1, 1, 1, 1], &[1, 0, 0, 0], &[0, 1, 1, 1], &[1, 1, 1, 1]],
    &[
        &[1, 1, 1, 1, 1],
        &[1, 0, 0, 1, 0],
        &[0, 1, 1, 0, 1],
        &[1, 0, 0, 1, 0],
        &[1, 1, 1, 1, 1],
    ],
    &[
        &[1, 1, 1, 1, 1],
        &[1, 0, 0, 1, 0],
        &[0, 1, 1, 0, 1],
        &[0, 1, 1, 0, 1],
        &[1, 1, 1, 1, 1],
    ],
    &[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]],
    &[&[1, 1, 1, 1], &[1, 1, 1, 1], &[0, 1, 0, 1], &[1, 0, 1, 0]],
];

pub fn table23(id: PatternId, sizes: &[usize]) -> Result<BoolMatrix> {
    expand_pattern(&id.pattern()?, sizes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Wielandt,
    AllOnes,
    Table1(Table1Kind),
    Pattern(PatternId),
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Wielandt => f.write_str("W"),
            FamilyKind::AllOnes => f.write_str("J"),
            FamilyKind::Table1(k) => write!(f, "{k:?}"),
            FamilyKind::Pattern(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for FamilyKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A concrete member of a named family.
///
/// `b` is the family's Boolean rank. `block_sizes` holds one size per
/// diagonal block; for `W_n` and `J_n` it holds the single entry `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub b: usize,
    pub block_sizes: Vec<usize>,
}

impl FamilySpec {
    pub fn wielandt(n: usize) -> Result<Self> {
        wielandt(n)?;
        Ok(Self {
            kind: FamilyKind::Wielandt,
            b: n,
            block_sizes: vec![n],
        })
    }

    pub fn all_ones(n: usize) -> Result<Self> {
        check_sizes(&[n], 1)?;
        Ok(Self {
            kind: FamilyKind::AllOnes,
            b: 1,
            block_sizes: vec![n],
        })
    }

    pub fn table1(kind: Table1Kind, b: usize, sizes: Vec<usize>) -> Result<Self> {
        let p = table1_pattern(kind, b)?;
        check_sizes(&sizes, p.dim())?;
        Ok(Self {
            kind: FamilyKind::Table1(kind),
            b,
            block_sizes: sizes,
        })
    }

    pub fn pattern(id: PatternId, sizes: Vec<usize>) -> Result<Self> {
        check_sizes(&sizes, id.dim()?)?;
        Ok(Self {
            kind: FamilyKind::Pattern(id),
            b: 2,
            block_sizes: sizes,
        })
    }

    pub fn order(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn generate(&self) -> Result<BoolMatrix> {
        match self.kind {
            FamilyKind::Wielandt => wielandt(self.block_sizes[0]),
            FamilyKind::AllOnes => BoolMatrix::ones(self.block_sizes[0], self.block_sizes[0]),
            FamilyKind::Table1(k) => table1(k, self.b, &self.block_sizes),
            FamilyKind::Pattern(id) => table23(id, &self.block_sizes),
        }
    }

    /// Scrambling index every member of the family has.
    pub fn expected_scrambling_index(&self) -> u64 {
        let h = |b: usize| crate::scramble::order_bound(b);
        match self.kind {
            FamilyKind::Wielandt => h(self.b),
            FamilyKind::AllOnes => 1,
            FamilyKind::Table1(_) => h(self.b) + 1,
            FamilyKind::Pattern(_) => 2,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} b={} blocks={:?}", self.kind, self.b, self.block_sizes)
    }
}

/// Family name as written on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyName {
    Wielandt(usize),
    AllOnes(usize),
    Table1(Table1Kind),
    Pattern(PatternId),
}

impl FromStr for FamilyName {
    type Err = Error;

    /// Accepts `wielandt:N`, `jn:N`, `m1`, `m2`, `m3`, `t2:I` and `t3:I`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown family {s:?}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.and_then(|a| a.trim().parse().ok()).ok_or_else(bad)
        };
        let name = match (head.trim().to_ascii_lowercase().as_str(), arg) {
            ("wielandt", a) => FamilyName::Wielandt(num(a)?),
            ("jn", a) => FamilyName::AllOnes(num(a)?),
            ("m1", None) => FamilyName::Table1(Table1Kind::M1),
            ("m2", None) => FamilyName::Table1(Table1Kind::M2),
            ("m3", None) => FamilyName::Table1(Table1Kind::M3),
            ("t2", a) => FamilyName::Pattern(PatternId::T2(u8::try_from(num(a)?).map_err(|_| bad())?)),
            ("t3", a) => FamilyName::Pattern(PatternId::T3(u8::try_from(num(a)?).map_err(|_| bad())?)),
            _ => return Err(bad()),
        };
        Ok(name)
    }
}

/// Parses a comma-separated list of positive block sizes, e.g. `1,2,1`.
pub fn parse_block_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::InvalidParameter(format!("bad block size {t:?}")))
        })
        .collect()
}

impl FamilyName {
    /// Combines a parsed name with the `--b` and `--blocks` options.
    pub fn into_spec(self, b: Option<usize>, blocks: Option<Vec<usize>>) -> Result<FamilySpec> {
        match self {
            FamilyName::Wielandt(n) => FamilySpec::wielandt(n),
            FamilyName::AllOnes(n) => FamilySpec::all_ones(n),
            FamilyName::Table1(kind) => {
                let b = b.ok_or_else(|| Error::InvalidParameter("--b is required".into()))?;
                let sizes = match blocks {
                    Some(s) => s,
                    None => vec![1; table1_pattern(kind, b)?.dim()],
                };
                FamilySpec::table1(kind, b, sizes)
            }
            FamilyName::Pattern(id) => {
                if b.is_some_and(|b| b != 2) {
                    return Err(Error::InvalidParameter("rank-two patterns have b = 2".into()));
                }
                let sizes = match blocks {
                    Some(s) => s,
                    None => vec![1; id.dim()?],
                };
                FamilySpec::pattern(id, sizes)
            }
        }
    }
}
