//! Verification campaigns over matrix spaces.
//!
//! Every campaign returns a [`CampaignReport`]; an empty violation list means
//! the campaign passed. Work is split into disjoint partitions that are
//! processed independently (in parallel when threads are available) and
//! merged in partition order, so reports are deterministic for fixed
//! parameters and seed.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::boolmat::{BoolMatrix, Permutation};
use crate::boolrank::{boolean_rank_with, RankBudget, RankOutcome};
use crate::bounds::{h, BoundKind, Invariants};
use crate::characterize::{
    extremality_from, find_similarity, match_extremal, match_extremal_all, pattern_aliases,
    Extremality,
};
use crate::error::{Error, Result};
use crate::families::{wielandt, FamilyKind, FamilySpec, PatternId, Table1Kind};
use crate::graphprops::{exponent, girth, is_primitive};
use crate::scramble::{local_scrambling_index, meet_matrix, scrambling_index};

/// One failed check, with the offending matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(serialize_with = "matrices_as_text")]
    pub matrices: Vec<BoolMatrix>,
    pub check: String,
    pub actual: u64,
    pub bound: u64,
}

fn matrices_as_text<S: Serializer>(ms: &[BoolMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ms.iter().map(BoolMatrix::to_text))
}

fn secs<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CampaignReport {
    pub total_examined: u64,
    pub primitive_count: u64,
    pub violations: Vec<Violation>,
    /// How often each bound (or other tallied event) was attained with equality.
    pub attained_counts: BTreeMap<String, u64>,
    #[serde(serialize_with = "secs", rename = "elapsed_seconds")]
    pub elapsed: Duration,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Associative merge; violations keep `self`'s entries first.
    pub fn merge(mut self, other: CampaignReport) -> CampaignReport {
        self.total_examined += other.total_examined;
        self.primitive_count += other.primitive_count;
        self.violations.extend(other.violations);
        for (k, v) in other.attained_counts {
            *self.attained_counts.entry(k).or_default() += v;
        }
        self.elapsed += other.elapsed;
        self
    }

    pub fn attained(&self, key: &str) -> u64 {
        self.attained_counts.get(key).copied().unwrap_or(0)
    }

    fn tally(&mut self, key: impl Into<String>) {
        *self.attained_counts.entry(key.into()).or_default() += 1;
    }

    fn violate(&mut self, matrices: Vec<BoolMatrix>, check: impl Into<String>, actual: u64, bound: u64) {
        self.violations.push(Violation {
            matrices,
            check: check.into(),
            actual,
            bound,
        });
    }

    /// Violations as a plain-text dump in the matrix text format.
    pub fn dump_violations(&self) -> String {
        let mut s = String::new();
        for v in &self.violations {
            s.push_str(&format!(
                "# violation: {} (actual {}, bound {})\n",
                v.check, v.actual, v.bound
            ));
            for m in &v.matrices {
                s.push_str(&m.to_text());
            }
        }
        s
    }
}

fn merge_all(parts: Vec<CampaignReport>, start: Instant) -> CampaignReport {
    let mut report = parts
        .into_iter()
        .fold(CampaignReport::default(), CampaignReport::merge);
    report.elapsed = start.elapsed();
    report
}

/// Which checks an exhaustive sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckSelection {
    /// `k <= girth_bound(n, s)`.
    pub girth: bool,
    /// `k <= h(n)`.
    pub order: bool,
    /// `k <= h(b) + 1`.
    pub rank_scrambling: bool,
    /// `exp <= (b-1)^2 + 2`.
    pub rank_exponent: bool,
    /// `k = h(n)` iff the matrix is a relabeling of `W_n` (or is `J_2`).
    pub order_equality: bool,
    /// Extremal by rank and index iff a catalogued form matches.
    pub extremal_agreement: bool,
}

impl CheckSelection {
    pub fn all() -> Self {
        Self {
            girth: true,
            order: true,
            rank_scrambling: true,
            rank_exponent: true,
            order_equality: true,
            extremal_agreement: true,
        }
    }

    pub fn none() -> Self {
        Self {
            girth: false,
            order: false,
            rank_scrambling: false,
            rank_exponent: false,
            order_equality: false,
            extremal_agreement: false,
        }
    }

    pub fn only(kind: BoundKind) -> Self {
        let mut s = Self::none();
        match kind {
            BoundKind::Girth => s.girth = true,
            BoundKind::Order => s.order = true,
            BoundKind::RankScrambling => s.rank_scrambling = true,
            BoundKind::RankExponent => s.rank_exponent = true,
        }
        s
    }

    fn needs_rank(&self) -> bool {
        self.rank_scrambling || self.rank_exponent || self.extremal_agreement
    }

    fn wants(&self, kind: BoundKind) -> bool {
        match kind {
            BoundKind::Girth => self.girth,
            BoundKind::Order => self.order,
            BoundKind::RankScrambling => self.rank_scrambling,
            BoundKind::RankExponent => self.rank_exponent,
        }
    }
}

/// Rank budget for campaigns: exact answers only, no wall-clock limit.
fn campaign_budget() -> RankBudget {
    RankBudget {
        max_dim: crate::boolrank::MAX_RANK_DIM,
        ..RankBudget::default()
    }
    .unlimited_time()
}

fn check_one(m: &BoolMatrix, checks: &CheckSelection, w_n: Option<&BoolMatrix>, report: &mut CampaignReport) {
    let n = m.rows();
    report.total_examined += 1;
    if !is_primitive(m).expect("square") {
        if checks.extremal_agreement && match_extremal(m).is_some() {
            report.violate(vec![m.clone()], "extremal_agreement", 0, 1);
        }
        return;
    }
    report.primitive_count += 1;

    let k = scrambling_index(m).expect("primitive").k;
    let rank = checks.needs_rank().then(|| boolean_rank_with(m, &campaign_budget()));
    let inv = Invariants {
        n: n as u64,
        girth: girth(m).expect("primitive") as u64,
        exponent: exponent(m).expect("primitive"),
        scrambling_index: k,
        rank,
    };
    if let Some(RankOutcome::Unknown(_)) = rank {
        report.violate(vec![m.clone()], "rank_unknown", 0, 0);
    }
    for c in inv.checks() {
        if !checks.wants(c.name) {
            continue;
        }
        if c.is_violation() {
            report.violate(vec![m.clone()], c.name.name(), c.actual, c.bound_value.unwrap_or(0));
        }
        if c.is_attained() {
            report.tally(c.name.name());
            if c.name == BoundKind::RankScrambling {
                if let Some(RankOutcome::Exact(b)) = rank {
                    report.tally(format!("rank_scrambling@b={b}"));
                }
            }
        }
    }

    if checks.order_equality && n >= 2 {
        let at_bound = k == h(n as u64).expect("n >= 2");
        let similar = w_n.is_some_and(|w| find_similarity(m, w).is_some())
            || (n == 2 && m.is_all_ones());
        if at_bound != similar {
            report.violate(vec![m.clone()], "order_equality", at_bound as u64, similar as u64);
        }
        if at_bound {
            report.tally("order_equality");
        }
    }

    if checks.extremal_agreement {
        let extremal = match rank {
            Some(r) => extremality_from(n, k, r) == Extremality::Extremal,
            None => false,
        };
        let matched = match_extremal(m).is_some();
        if extremal != matched {
            report.violate(vec![m.clone()], "extremal_agreement", extremal as u64, matched as u64);
        }
        if extremal {
            report.tally("extremal");
        }
    }
}

/// Largest order swept without the long-running flag.
pub const SHORT_EXHAUSTIVE_MAX: usize = 4;
/// Largest order swept at all.
pub const LONG_EXHAUSTIVE_MAX: usize = 5;

/// Sweeps all `2^(n^2)` matrices of order `n` in increasing index order
/// (bit `i * n + j` is entry `(i, j)`), checking every primitive one.
///
/// `n = 5` requires `long = true`.
pub fn exhaustive_verify(n: usize, checks: &CheckSelection, long: bool) -> Result<CampaignReport> {
    let max = if long { LONG_EXHAUSTIVE_MAX } else { SHORT_EXHAUSTIVE_MAX };
    if n == 0 || n > max {
        return Err(Error::InvalidParameter(format!(
            "exhaustive order must be in 1..={max}{}, got {n}",
            if long { "" } else { " (5 needs the long flag)" }
        )));
    }
    exhaustive_range(n, checks, 0, 1u64 << (n * n))
}

/// Sweeps the matrix indices `start..end` of order `n`; a resumable slice of
/// [`exhaustive_verify`].
pub fn exhaustive_range(n: usize, checks: &CheckSelection, start: u64, end: u64) -> Result<CampaignReport> {
    if n == 0 || n > LONG_EXHAUSTIVE_MAX || end > 1u64 << (n * n) || start > end {
        return Err(Error::InvalidParameter(format!(
            "bad exhaustive range {start}..{end} at order {n}"
        )));
    }
    let clock = Instant::now();
    let w_n = (n >= 2).then(|| wielandt(n).expect("n >= 2"));
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<(u64, u64)> = (start..end)
        .step_by(CHUNK as usize)
        .map(|s| (s, (s + CHUNK).min(end)))
        .collect();
    let parts: Vec<CampaignReport> = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut report = CampaignReport::default();
            for idx in lo..hi {
                let m = BoolMatrix::from_index(n, n, idx).expect("n <= 8");
                check_one(&m, checks, w_n.as_ref(), &mut report);
            }
            report
        })
        .collect();
    Ok(merge_all(parts, clock))
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent generator for work item `index` under `seed`.
fn item_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(index)))
}

/// Uniform `rows x cols` matrix with no zero line, by rejection with reseeding.
fn sample_no_zero_line(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BoolMatrix {
    const ATTEMPTS: usize = 64;
    loop {
        for _ in 0..ATTEMPTS {
            let m = BoolMatrix::from_fn(rows, cols, |_, _| rng.gen()).expect("nonempty");
            if !m.has_zero_line() {
                return m;
            }
        }
        *rng = ChaCha8Rng::seed_from_u64(rng.gen());
    }
}

/// Samples `A` (`n x m`) and `B` (`m x n`) without zero lines and checks that
/// `AB` and `BA` are primitive together and that their scrambling indices
/// differ by at most one.
pub fn random_factor_pair_campaign(
    trials: u64,
    n: RangeInclusive<usize>,
    m: RangeInclusive<usize>,
    seed: u64,
) -> Result<CampaignReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    for r in [&n, &m] {
        if r.is_empty() || *r.start() < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension range {r:?} must be nonempty and start at 2 or more"
            )));
        }
    }
    let clock = Instant::now();
    let parts: Vec<CampaignReport> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = item_rng(seed, t);
            let rows = rng.gen_range(n.clone());
            let inner = rng.gen_range(m.clone());
            let a = sample_no_zero_line(&mut rng, rows, inner);
            let b = sample_no_zero_line(&mut rng, inner, rows);
            let ab = a.multiply(&b).expect("conformal");
            let ba = b.multiply(&a).expect("conformal");

            let mut report = CampaignReport {
                total_examined: 1,
                ..Default::default()
            };
            let (pab, pba) = (is_primitive(&ab).unwrap(), is_primitive(&ba).unwrap());
            if pab != pba {
                report.violate(vec![a.clone(), b.clone()], "primitivity_transfer", pab as u64, pba as u64);
            }
            if pab && pba {
                report.primitive_count += 1;
                let kab = scrambling_index(&ab).expect("primitive").k;
                let kba = scrambling_index(&ba).expect("primitive").k;
                let gap = kab.abs_diff(kba);
                if gap > 1 {
                    report.violate(vec![a, b], "scrambling_gap", gap, 1);
                } else if gap == 1 {
                    report.tally("scrambling_gap");
                }
            }
            report
        })
        .collect();
    Ok(merge_all(parts, clock))
}

/// Largest total order of a sampled family instance.
pub const ROUNDTRIP_MAX_ORDER: usize = 20;
/// Largest `b` of a sampled table-1 instance.
pub const ROUNDTRIP_MAX_B: usize = 8;

fn random_sizes(rng: &mut ChaCha8Rng, blocks: usize, max_order: usize) -> Vec<usize> {
    let mut sizes = vec![1; blocks];
    let extra = rng.gen_range(0..=max_order - blocks);
    for _ in 0..extra {
        let i = rng.gen_range(0..blocks);
        sizes[i] += 1;
    }
    sizes
}

/// A random extremal family instance of order at most 20.
pub fn random_family_spec(rng: &mut ChaCha8Rng) -> FamilySpec {
    if rng.gen_bool(0.5) {
        let kind = *Table1Kind::ALL.choose(rng).expect("nonempty");
        let b = rng.gen_range(3..=ROUNDTRIP_MAX_B);
        let sizes = random_sizes(rng, b + kind.extra_blocks(), ROUNDTRIP_MAX_ORDER);
        FamilySpec::table1(kind, b, sizes).expect("valid sizes")
    } else {
        let ids: Vec<PatternId> = PatternId::all().collect();
        let id = *ids.choose(rng).expect("nonempty");
        let dim = id.dim().expect("catalogued");
        FamilySpec::pattern(id, random_sizes(rng, dim, ROUNDTRIP_MAX_ORDER)).expect("valid sizes")
    }
}

fn same_kind_or_alias(found: FamilyKind, expected: FamilyKind) -> bool {
    found == expected
        || matches!((found, expected), (FamilyKind::Pattern(f), FamilyKind::Pattern(e)) if pattern_aliases(e).contains(&f))
}

/// Checks one family instance after a random relabeling; returns the relabeled matrix's report.
fn roundtrip_one(spec: &FamilySpec, rng: &mut ChaCha8Rng) -> CampaignReport {
    let mut report = CampaignReport {
        total_examined: 1,
        ..Default::default()
    };
    let m = spec.generate().expect("valid spec");
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.shuffle(rng);
    let m = m
        .permute_sym(&Permutation::new(order).expect("shuffle"))
        .expect("square");

    if !is_primitive(&m).expect("square") {
        report.violate(vec![m], "primitive", 0, 1);
        return report;
    }
    report.primitive_count += 1;
    let b = boolean_rank_with(&m, &campaign_budget());
    if b != RankOutcome::Exact(spec.b) {
        report.violate(vec![m.clone()], "boolean_rank", b.exact().unwrap_or(0) as u64, spec.b as u64);
    }
    let k = scrambling_index(&m).expect("primitive").k;
    if k != spec.expected_scrambling_index() {
        report.violate(vec![m.clone()], "scrambling_index", k, spec.expected_scrambling_index());
    }
    match match_extremal(&m) {
        None => report.violate(vec![m.clone()], "match_missing", 0, 1),
        Some(found) => {
            let all = match_extremal_all(&m);
            if !same_kind_or_alias(found.kind, spec.kind)
                || found.b != spec.b
                || !all.iter().any(|s| s.kind == spec.kind)
            {
                report.violate(vec![m.clone()], "match_kind", found.b as u64, spec.b as u64);
            }
            let regenerated = found.generate().expect("matched spec is valid");
            if find_similarity(&m, &regenerated).is_none() {
                report.violate(vec![m.clone(), regenerated], "match_unsound", 0, 1);
            } else {
                report.tally("matched");
            }
        }
    }
    report
}

/// Generates extremal family instances (the 21 unit-block rank-two patterns,
/// then `specs` random instances), relabels each randomly, and checks rank,
/// scrambling index, and that recognition round-trips.
pub fn family_roundtrip_campaign(specs: u64, seed: u64) -> Result<CampaignReport> {
    if specs == 0 {
        return Err(Error::InvalidParameter("specs must be >= 1".into()));
    }
    let clock = Instant::now();
    let prefix: Vec<FamilySpec> = PatternId::all()
        .map(|id| FamilySpec::pattern(id, vec![1; id.dim().expect("catalogued")]).expect("unit sizes"))
        .collect();
    let prefix_len = prefix.len() as u64;
    let mut parts: Vec<CampaignReport> = prefix
        .par_iter()
        .enumerate()
        .map(|(i, spec)| roundtrip_one(spec, &mut item_rng(seed, i as u64)))
        .collect();
    parts.extend(
        (0..specs)
            .into_par_iter()
            .map(|t| {
                let mut rng = item_rng(seed, prefix_len + t);
                let spec = random_family_spec(&mut rng);
                roundtrip_one(&spec, &mut rng)
            })
            .collect::<Vec<_>>(),
    );
    Ok(merge_all(parts, clock))
}

/// Structural facts about `W_b` for every `b` in `orders` (each `>= 3`), with
/// 1-based vertex `floor(b/2)` written `f` below:
///
/// * `k(W_b) = h(b)`;
/// * the zeros of `W_b^{h-1} (W_b^t)^{h-1}` are exactly `(f, b)` and `(b, f)`;
/// * `W_b^{h-1}` restricted to rows `{f, b}` and columns `{b-1, b}` is a 2x2 permutation matrix;
/// * `k_{b,f}(W_b) = h(b)` and every other pair has a smaller local index.
pub fn wielandt_structure_suite(orders: RangeInclusive<usize>) -> Result<CampaignReport> {
    if *orders.start() < 3 {
        return Err(Error::InvalidParameter("orders must start at 3 or more".into()));
    }
    let clock = Instant::now();
    let mut report = CampaignReport::default();
    let identity = BoolMatrix::identity(2)?;
    let swap = BoolMatrix::from_rows(&[[0u8, 1], [1, 0]])?;
    for b in orders {
        report.total_examined += 1;
        report.primitive_count += 1;
        let w = wielandt(b)?;
        let hb = h(b as u64)?;
        let (f, last) = (b / 2 - 1, b - 1);

        let k = scrambling_index(&w)?.k;
        if k != hb {
            report.violate(vec![w.clone()], "wielandt_index", k, hb);
        }

        let meet = meet_matrix(&w, hb - 1)?;
        let mut zeros = Vec::new();
        for i in 0..b {
            for j in 0..b {
                if !meet.get(i, j) {
                    zeros.push((i, j));
                }
            }
        }
        let mut expected = vec![(f, last), (last, f)];
        expected.sort();
        if zeros != expected {
            report.violate(vec![w.clone(), meet], "meet_zeros", zeros.len() as u64, 2);
        }

        let block = w.power(hb - 1)?.submatrix(&[f, last], &[b - 2, last])?;
        if block != identity && block != swap {
            report.violate(vec![w.clone(), block], "submatrix_pattern", 0, 1);
        }

        for u in 0..b {
            for v in u + 1..b {
                let local = local_scrambling_index(&w, u, v)?;
                let is_extreme_pair = (u, v) == (f.min(last), f.max(last));
                let ok = if is_extreme_pair { local == hb } else { local < hb };
                if !ok {
                    report.violate(vec![w.clone()], format!("local_index({},{})", u + 1, v + 1), local, hb);
                }
            }
        }
    }
    report.elapsed = clock.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn without_time(mut r: CampaignReport) -> CampaignReport {
        r.elapsed = Duration::ZERO;
        r
    }

    #[test]
    fn exhaustive_small_orders_pass() {
        let r = exhaustive_verify(3, &CheckSelection::all(), false).unwrap();
        assert_eq!(r.total_examined, 512);
        assert!(r.passed(), "{}", r.dump_violations());
        let r2 = exhaustive_verify(2, &CheckSelection::all(), false).unwrap();
        assert_eq!(r2.total_examined, 16);
        // W_2, its relabeling, and J_2 attain h_2 = 1.
        assert_eq!(r2.attained("order_equality"), 3);
        let r1 = exhaustive_verify(1, &CheckSelection::all(), false).unwrap();
        assert_eq!((r1.total_examined, r1.primitive_count), (2, 1));
    }

    #[test]
    fn exhaustive_order_guard() {
        assert!(exhaustive_verify(0, &CheckSelection::all(), false).is_err());
        assert!(exhaustive_verify(5, &CheckSelection::all(), false).is_err());
        assert!(exhaustive_verify(6, &CheckSelection::all(), true).is_err());
        assert!(exhaustive_range(3, &CheckSelection::all(), 10, 600).is_err());
    }

    #[test]
    fn ranges_merge_to_the_full_sweep() {
        let checks = CheckSelection::all();
        let full = exhaustive_verify(3, &checks, false).unwrap();
        let a = exhaustive_range(3, &checks, 0, 200).unwrap();
        let b = exhaustive_range(3, &checks, 200, 512).unwrap();
        assert_eq!(without_time(a.merge(b)), without_time(full));
    }

    #[test]
    fn campaigns_are_deterministic() {
        let a = random_factor_pair_campaign(200, 2..=6, 2..=6, 9).unwrap();
        let b = random_factor_pair_campaign(200, 2..=6, 2..=6, 9).unwrap();
        assert_eq!(without_time(a.clone()), without_time(b));
        assert!(a.passed());
        let c = family_roundtrip_campaign(30, 3).unwrap();
        let d = family_roundtrip_campaign(30, 3).unwrap();
        assert_eq!(without_time(c.clone()), without_time(d));
        assert_eq!(c.total_examined, 51);
    }

    #[test]
    fn factor_pair_campaign_rejects_degenerate_shapes() {
        assert!(random_factor_pair_campaign(10, 1..=3, 2..=3, 0).is_err());
        assert!(random_factor_pair_campaign(0, 2..=3, 2..=3, 0).is_err());
    }

    #[test]
    fn sampled_factors_have_no_zero_lines() {
        let mut rng = item_rng(1, 2);
        for _ in 0..100 {
            assert!(!sample_no_zero_line(&mut rng, 2, 7).has_zero_line());
        }
    }

    #[test]
    fn violations_dump_in_text_format() {
        let mut r = CampaignReport::default();
        r.violate(vec![BoolMatrix::identity(2).unwrap()], "demo", 3, 2);
        assert!(!r.passed());
        let dump = r.dump_violations();
        assert_eq!(dump, "# violation: demo (actual 3, bound 2)\n2 2\n10\n01\n");
        let body: String = dump.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert_eq!(crate::parse_matrix(&body).unwrap(), BoolMatrix::identity(2).unwrap());
    }

    #[test]
    fn family_sampler_respects_limits() {
        let mut rng = item_rng(5, 5);
        for _ in 0..500 {
            let s = random_family_spec(&mut rng);
            assert!(s.order() <= ROUNDTRIP_MAX_ORDER);
            if let FamilyKind::Table1(k) = s.kind {
                assert!((3..=ROUNDTRIP_MAX_B).contains(&s.b));
                if k == Table1Kind::M3 {
                    assert_eq!(s.block_sizes.len(), s.b + 2);
                }
            }
        }
    }
}
