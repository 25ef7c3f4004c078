//! Single-matrix analysis report.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::boolmat::BoolMatrix;
use crate::boolrank::{boolean_rank_with, RankBudget, RankOutcome};
use crate::bounds::{BoundCheck, Invariants};
use crate::characterize::match_extremal;
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::graphprops::{exponent, girth, is_primitive};
use crate::scramble::scrambling_index;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// `None` skips the Boolean rank and every check that depends on it.
    pub rank_budget: Option<RankBudget>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            rank_budget: Some(RankBudget::default()),
        }
    }
}

/// Everything computed for one square matrix. Vertex labels are zero-based.
///
/// `exponent`, `scrambling_index`, `witness_pair` and `extremal_match` are
/// `None` for imprimitive matrices; `girth` is `None` only for acyclic
/// digraphs; `boolean_rank` is `None` when it was not requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub primitive: bool,
    pub girth: Option<u64>,
    pub exponent: Option<u64>,
    pub scrambling_index: Option<u64>,
    pub witness_pair: Option<(usize, usize)>,
    #[serde(serialize_with = "rank_json")]
    pub boolean_rank: Option<RankOutcome>,
    pub bound_checks: Vec<BoundCheck>,
    pub extremal_match: Option<FamilySpec>,
    pub label_base: u8,
}

fn rank_json<S: Serializer>(r: &Option<RankOutcome>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        None => s.serialize_none(),
        Some(RankOutcome::Exact(b)) => s.serialize_u64(*b as u64),
        Some(RankOutcome::Unknown(_)) => s.serialize_str("unknown"),
    }
}

impl AnalysisReport {
    /// True when some checked bound fails, which can only come from a bug.
    pub fn has_violation(&self) -> bool {
        self.bound_checks.iter().any(BoundCheck::is_violation)
    }
}

/// Analyzes a square matrix.
pub fn analyze(m: &BoolMatrix, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let n = m.order("analyze")?;
    let primitive = is_primitive(m)?;
    let girth = match girth(m) {
        Ok(s) => Some(s as u64),
        Err(Error::Acyclic) => None,
        Err(e) => return Err(e),
    };
    let rank = opts.rank_budget.map(|b| boolean_rank_with(m, &b));
    let mut report = AnalysisReport {
        n,
        primitive,
        girth,
        exponent: None,
        scrambling_index: None,
        witness_pair: None,
        boolean_rank: rank,
        bound_checks: Vec::new(),
        extremal_match: None,
        label_base: 0,
    };
    if primitive {
        let sr = scrambling_index(m)?;
        let inv = Invariants {
            n: n as u64,
            girth: girth.expect("primitive digraphs have cycles"),
            exponent: exponent(m)?,
            scrambling_index: sr.k,
            rank,
        };
        report.exponent = Some(inv.exponent);
        report.scrambling_index = Some(sr.k);
        report.witness_pair = sr.witness_pair;
        report.bound_checks = inv.checks();
        report.extremal_match = match_extremal(m);
    }
    Ok(report)
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order            {}", self.n)?;
        writeln!(f, "primitive        {}", self.primitive)?;
        writeln!(f, "girth            {}", opt(&self.girth))?;
        writeln!(f, "exponent         {}", opt(&self.exponent))?;
        writeln!(f, "scrambling index {}", opt(&self.scrambling_index))?;
        match self.witness_pair {
            Some((u, v)) => writeln!(f, "witness pair     ({u}, {v}) 0-based, ({}, {}) 1-based", u + 1, v + 1)?,
            None => writeln!(f, "witness pair     -")?,
        }
        let rank = match &self.boolean_rank {
            None => "skipped".to_string(),
            Some(RankOutcome::Exact(b)) => b.to_string(),
            Some(RankOutcome::Unknown(why)) => format!("unknown ({why})"),
        };
        writeln!(f, "boolean rank     {rank}")?;
        for c in &self.bound_checks {
            match c.bound_value {
                Some(bound) => writeln!(
                    f,
                    "bound {:<16} {} <= {} {}{}",
                    c.name.name(),
                    c.actual,
                    bound,
                    if c.is_violation() { "VIOLATED" } else { "ok" },
                    if c.is_attained() { " (attained)" } else { "" }
                )?,
                None => writeln!(f, "bound {:<16} skipped", c.name.name())?,
            }
        }
        writeln!(f, "extremal match   {}", opt(&self.extremal_match))
    }
}
