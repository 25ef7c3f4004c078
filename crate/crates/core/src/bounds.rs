//! Closed-form upper bounds on the scrambling index and exponent, and a
//! checker comparing them with computed invariants.
//!
//! All formulas use exact integer arithmetic.

use std::fmt;

use serde::Serialize;

use crate::boolmat::BoolMatrix;
use crate::boolrank::{boolean_rank_with, RankBudget, RankOutcome};
use crate::error::{Error, Result};
use crate::graphprops::{exponent, girth, is_primitive};
use crate::scramble::scrambling_index;

fn require_rank_param(b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidParameter(format!("bound needs b >= 2, got {b}")));
    }
    Ok(())
}

/// `ceil(((b-1)^2 + 1) / 2)`.
pub fn h(b: u64) -> Result<u64> {
    require_rank_param(b)?;
    let m = b - 1;
    Ok((m * m + 2) / 2)
}

/// Scrambling bound for a primitive digraph on `n` vertices with girth `s`:
/// `n - s + (s-1)/2 * n` for odd `s`, `n - s + (n-1)/2 * s` for even `s`.
pub fn girth_bound(n: u64, s: u64) -> Result<u64> {
    if s < 1 || s > n {
        return Err(Error::InvalidParameter(format!(
            "girth {s} out of range 1..={n}"
        )));
    }
    let tail = if s % 2 == 1 {
        (s - 1) / 2 * n
    } else {
        (n - 1) * s / 2
    };
    Ok(n - s + tail)
}

/// `h(b) + 1`: scrambling bound for a primitive matrix of Boolean rank `b`.
pub fn rank_scrambling_bound(b: u64) -> Result<u64> {
    Ok(h(b)? + 1)
}

/// `(b-1)^2 + 2`: exponent bound for a primitive matrix of Boolean rank `b`.
pub fn rank_exponent_bound(b: u64) -> Result<u64> {
    require_rank_param(b)?;
    Ok((b - 1) * (b - 1) + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `k <= girth_bound(n, s)`.
    Girth,
    /// `k <= h(n)`.
    Order,
    /// `k <= h(b) + 1`.
    RankScrambling,
    /// `exp <= (b-1)^2 + 2`.
    RankExponent,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] = [
        BoundKind::Girth,
        BoundKind::Order,
        BoundKind::RankScrambling,
        BoundKind::RankExponent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Girth => "girth",
            BoundKind::Order => "order",
            BoundKind::RankScrambling => "rank_scrambling",
            BoundKind::RankExponent => "rank_exponent",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Checked,
    /// The bound depends on a Boolean rank that was not computed.
    Skipped,
}

/// One bound compared with the invariant it limits.
///
/// For checked bounds `satisfied = actual <= bound_value` and
/// `attained = actual == bound_value`; skipped bounds carry `None` in all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: BoundKind,
    pub bound_value: Option<u64>,
    pub actual: u64,
    pub satisfied: Option<bool>,
    pub attained: Option<bool>,
    pub status: CheckStatus,
}

impl BoundCheck {
    pub fn checked(name: BoundKind, bound_value: u64, actual: u64) -> Self {
        Self {
            name,
            bound_value: Some(bound_value),
            actual,
            satisfied: Some(actual <= bound_value),
            attained: Some(actual == bound_value),
            status: CheckStatus::Checked,
        }
    }

    pub fn skipped(name: BoundKind, actual: u64) -> Self {
        Self {
            name,
            bound_value: None,
            actual,
            satisfied: None,
            attained: None,
            status: CheckStatus::Skipped,
        }
    }

    pub fn is_violation(&self) -> bool {
        self.satisfied == Some(false)
    }

    pub fn is_attained(&self) -> bool {
        self.attained == Some(true)
    }
}

/// Invariants of a primitive matrix that the bounds are stated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Invariants {
    pub n: u64,
    pub girth: u64,
    pub exponent: u64,
    pub scrambling_index: u64,
    /// `None` when the rank was not requested.
    pub rank: Option<RankOutcome>,
}

impl Invariants {
    /// Computes everything for a primitive `m`; `budget = None` skips the rank.
    pub fn compute(m: &BoolMatrix, budget: Option<&RankBudget>) -> Result<Self> {
        if !is_primitive(m)? {
            return Err(Error::NotPrimitive);
        }
        Ok(Self {
            n: m.rows() as u64,
            girth: girth(m)? as u64,
            exponent: exponent(m)?,
            scrambling_index: scrambling_index(m)?.k,
            rank: budget.map(|b| boolean_rank_with(m, b)),
        })
    }

    /// Bound checks for these invariants.
    ///
    /// The order and girth bounds need `n >= 2`; the rank bounds need an exact
    /// rank `b >= 2` and are emitted as skipped when the rank is unknown or was
    /// not computed.
    pub fn checks(&self) -> Vec<BoundCheck> {
        let mut out = Vec::with_capacity(4);
        let k = self.scrambling_index;
        if self.n >= 2 {
            out.push(BoundCheck::checked(BoundKind::Order, h(self.n).expect("n >= 2"), k));
            out.push(BoundCheck::checked(
                BoundKind::Girth,
                girth_bound(self.n, self.girth).expect("girth within 1..=n"),
                k,
            ));
        }
        match self.rank {
            Some(RankOutcome::Exact(b)) if b >= 2 => {
                let b = b as u64;
                out.push(BoundCheck::checked(
                    BoundKind::RankScrambling,
                    rank_scrambling_bound(b).expect("b >= 2"),
                    k,
                ));
                out.push(BoundCheck::checked(
                    BoundKind::RankExponent,
                    rank_exponent_bound(b).expect("b >= 2"),
                    self.exponent,
                ));
            }
            Some(RankOutcome::Exact(_)) => {}
            Some(RankOutcome::Unknown(_)) | None => {
                out.push(BoundCheck::skipped(BoundKind::RankScrambling, k));
                out.push(BoundCheck::skipped(BoundKind::RankExponent, self.exponent));
            }
        }
        out
    }
}

/// All applicable bound checks for a primitive matrix, with the default rank budget.
pub fn check_all(m: &BoolMatrix) -> Result<Vec<BoundCheck>> {
    Ok(Invariants::compute(m, Some(&RankBudget::default()))?.checks())
}
