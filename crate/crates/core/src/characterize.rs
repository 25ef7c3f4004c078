//! Recognition of matrices attaining `k(M) = h(b) + 1`.
//!
//! Every extremal form is a block expansion of a small pattern, so a matrix
//! is matched by collapsing vertices with identical rows and columns (the
//! quotient) and testing the quotient for digraph isomorphism against the
//! parametric `M1`/`M2`/`M3` patterns and the 21 fixed rank-two patterns.
//! None of these patterns has two blocks with identical rows and columns,
//! so the quotient of an expansion is the pattern itself.

use std::collections::{BTreeMap, HashMap};
use std::sync::LazyLock;

use crate::boolmat::{BoolMatrix, Permutation};
use crate::boolrank::{boolean_rank_with, RankBudget, RankOutcome, UnknownReason};
use crate::bounds::rank_scrambling_bound;
use crate::error::{Error, Result};
use crate::families::{table1_pattern, wielandt, FamilySpec, PatternId, PatternMatrix, Table1Kind};
use crate::graphprops::is_primitive;
use crate::scramble::scrambling_index;

/// Vertices grouped by identical row and column, with the induced pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientResult {
    pub pattern: BoolMatrix,
    /// Classes in order of first vertex; each class is ascending.
    pub classes: Vec<Vec<usize>>,
}

impl QuotientResult {
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

pub fn quotient(m: &BoolMatrix) -> Result<QuotientResult> {
    m.order("quotient")?;
    let t = m.transpose();
    let mut ids: HashMap<(&[u64], &[u64]), usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..m.rows() {
        let key = (m.row(v), t.row(v));
        let c = *ids.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(v);
    }
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let pattern = BoolMatrix::from_fn(reps.len(), reps.len(), |i, j| m.get(reps[i], reps[j]))?;
    Ok(QuotientResult { pattern, classes })
}

/// Joint color refinement of two digraphs; colors are comparable across both.
fn refine(a: &BoolMatrix, b: &BoolMatrix) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = a.rows();
    let ta = a.transpose();
    let tb = b.transpose();
    let initial = |m: &BoolMatrix, t: &BoolMatrix, v: usize| {
        (m.row_support(v).count(), t.row_support(v).count(), m.get(v, v))
    };
    let mut table = BTreeMap::new();
    for v in 0..n {
        let len = table.len();
        table.entry(initial(a, &ta, v)).or_insert(len);
        let len = table.len();
        table.entry(initial(b, &tb, v)).or_insert(len);
    }
    let mut ca: Vec<usize> = (0..n).map(|v| table[&initial(a, &ta, v)]).collect();
    let mut cb: Vec<usize> = (0..n).map(|v| table[&initial(b, &tb, v)]).collect();

    let mut classes = table.len();
    loop {
        let sig = |m: &BoolMatrix, t: &BoolMatrix, c: &[usize], v: usize| {
            let mut outs: Vec<usize> = m.row_support(v).map(|u| c[u]).collect();
            let mut ins: Vec<usize> = t.row_support(v).map(|u| c[u]).collect();
            outs.sort_unstable();
            ins.sort_unstable();
            (c[v], outs, ins)
        };
        let sa: Vec<_> = (0..n).map(|v| sig(a, &ta, &ca, v)).collect();
        let sb: Vec<_> = (0..n).map(|v| sig(b, &tb, &cb, v)).collect();
        let mut table = BTreeMap::new();
        for s in sa.iter().chain(&sb) {
            let len = table.len();
            table.entry(s.clone()).or_insert(len);
        }
        ca = sa.iter().map(|s| table[s]).collect();
        cb = sb.iter().map(|s| table[s]).collect();
        let mut ha = ca.clone();
        let mut hb = cb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        if table.len() == classes {
            return Some((ca, cb));
        }
        classes = table.len();
    }
}

/// A permutation `p` with `permute_sym(source, p) == target`, if one exists.
///
/// Backtracking over color-refined candidates; exact for every input, fast
/// for the small and highly structured matrices handled here.
pub fn find_similarity(target: &BoolMatrix, source: &BoolMatrix) -> Option<Permutation> {
    let n = target.rows();
    if !target.is_square() || !source.is_square() || source.rows() != n {
        return None;
    }
    if target.count_ones() != source.count_ones() {
        return None;
    }
    let (ct, cs) = refine(target, source)?;
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in &ct {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&ct[v]], v));

    #[allow(clippy::too_many_arguments)]
    fn extend(
        depth: usize,
        order: &[usize],
        t: &BoolMatrix,
        s: &BoolMatrix,
        ct: &[usize],
        cs: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..s.rows() {
            if used[w] || cs[w] != ct[v] || t.get(v, v) != s.get(w, w) {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| {
                t.get(v, u) == s.get(w, map[u]) && t.get(u, v) == s.get(map[u], w)
            });
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(depth + 1, order, t, s, ct, cs, map, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(0, &order, target, source, &ct, &cs, &mut map, &mut used) {
        Permutation::new(map).ok()
    } else {
        None
    }
}

pub fn permutation_similar(a: &BoolMatrix, b: &BoolMatrix) -> bool {
    find_similarity(a, b).is_some()
}

/// Tri-state answer for questions that depend on a budgeted Boolean rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremality {
    Extremal,
    NotExtremal,
    Unknown(UnknownReason),
}

pub fn is_extremal(m: &BoolMatrix) -> Result<Extremality> {
    is_extremal_with(m, &RankBudget::default())
}

/// Whether a primitive `m` with `2 <= b(m) <= n - 1` has `k(m) = h(b) + 1`.
pub fn is_extremal_with(m: &BoolMatrix, budget: &RankBudget) -> Result<Extremality> {
    if !is_primitive(m)? {
        return Err(Error::NotPrimitive);
    }
    let k = scrambling_index(m)?.k;
    let rank = boolean_rank_with(m, budget);
    Ok(extremality_from(m.rows(), k, rank))
}

/// Decides extremality from precomputed `n`, `k` and rank.
pub fn extremality_from(n: usize, k: u64, rank: RankOutcome) -> Extremality {
    match rank {
        RankOutcome::Unknown(reason) => Extremality::Unknown(reason),
        RankOutcome::Exact(b) if b >= 2 && b < n => {
            if k == rank_scrambling_bound(b as u64).expect("b >= 2") {
                Extremality::Extremal
            } else {
                Extremality::NotExtremal
            }
        }
        RankOutcome::Exact(_) => Extremality::NotExtremal,
    }
}

fn has_row(m: &BoolMatrix, row: &BoolMatrix) -> bool {
    (0..m.rows()).any(|i| m.row(i) == row.row(0))
}

/// Structural conditions on a factorization `M = AB` (`A` is `n x w`, `B` is `w x n`)
/// that characterize `k(M) = h(w) + 1`.
///
/// For `w >= 3`: `BA = W_w`; `A` has rows `e_{floor(w/2)}^t` and `e_w^t`; no
/// column of `B` is `e_{w-1} + e_w`. For `w = 2`: `BA` is `W_2` or `J_2`; `A`
/// has rows `e_1^t` and `e_2^t`; no column of `B` is all ones.
pub fn extremal_factor_conditions(a: &BoolMatrix, b: &BoolMatrix) -> Result<bool> {
    if a.cols() != b.rows() || a.rows() != b.cols() {
        return Err(Error::DimensionMismatch {
            op: "extremal_factor_conditions",
            left: (a.rows(), a.cols()),
            right: (b.rows(), b.cols()),
        });
    }
    let w = a.cols();
    if w < 2 {
        return Err(Error::InvalidParameter(format!(
            "factor width must be >= 2, got {w}"
        )));
    }
    let ba = b.multiply(a)?;
    let product_ok = if w == 2 {
        ba == wielandt(2)? || ba.is_all_ones()
    } else {
        ba == wielandt(w)?
    };
    // 0-based positions of e_{floor(w/2)} and e_w.
    let rows_ok = has_row(a, &BoolMatrix::unit_row(w, w / 2 - 1)?)
        && has_row(a, &BoolMatrix::unit_row(w, w - 1)?);
    let forbidden = BoolMatrix::from_fn(1, w, |_, i| i + 2 >= w)?;
    let cols_ok = !has_row(&b.transpose(), &forbidden);
    Ok(product_ok && rows_ok && cols_ok)
}

type SpecMaker = Box<dyn Fn(Vec<usize>) -> Result<FamilySpec> + Send + Sync>;

static RANK_TWO_PATTERNS: LazyLock<Vec<(PatternId, PatternMatrix)>> = LazyLock::new(|| {
    PatternId::all()
        .map(|id| (id, id.pattern().expect("catalogued pattern")))
        .collect()
});

/// Candidate patterns with the given number of blocks, in a fixed order:
/// `M1`, `M2`, `M3`, then `T2(1..=3)`, then `T3(1..=18)`.
fn candidates(dim: usize) -> Vec<(PatternMatrix, SpecMaker)> {
    let mut out: Vec<(PatternMatrix, SpecMaker)> = Vec::new();
    for kind in Table1Kind::ALL {
        if let Some(b) = dim.checked_sub(kind.extra_blocks()).filter(|&b| b >= 3) {
            if let Ok(p) = table1_pattern(kind, b) {
                out.push((p, Box::new(move |s| FamilySpec::table1(kind, b, s))));
            }
        }
    }
    for (id, p) in RANK_TWO_PATTERNS.iter() {
        if p.dim() == dim {
            let id = *id;
            out.push((p.clone(), Box::new(move |s| FamilySpec::pattern(id, s))));
        }
    }
    out
}

/// A family spec whose generated matrix is permutation-similar to `m`, if any.
///
/// Distinct specs may generate similar matrices (several rank-two patterns
/// are relabelings of one another); the first match in catalogue order is
/// returned. See [`match_extremal_all`].
pub fn match_extremal(m: &BoolMatrix) -> Option<FamilySpec> {
    matches(m, true).into_iter().next()
}

/// Every catalogued form that `m` is permutation-similar to.
pub fn match_extremal_all(m: &BoolMatrix) -> Vec<FamilySpec> {
    matches(m, false)
}

fn matches(m: &BoolMatrix, first_only: bool) -> Vec<FamilySpec> {
    let Ok(q) = quotient(m) else {
        return Vec::new();
    };
    let dim = q.pattern.rows();
    let mut out = Vec::new();
    for (p, make) in candidates(dim) {
        // permute_sym(quotient, iso) == pattern: pattern block i is quotient class iso(i).
        if let Some(iso) = find_similarity(p.matrix(), &q.pattern) {
            let sizes = (0..dim).map(|i| q.classes[iso.apply(i)].len()).collect();
            if let Ok(spec) = make(sizes) {
                out.push(spec);
                if first_only {
                    break;
                }
            }
        }
    }
    out
}

/// Other catalogued rank-two patterns that are relabelings of `id`.
pub fn pattern_aliases(id: PatternId) -> Vec<PatternId> {
    let Ok(p) = id.pattern() else {
        return Vec::new();
    };
    PatternId::all()
        .filter(|&other| other != id)
        .filter(|other| {
            other
                .pattern()
                .is_ok_and(|q| permutation_similar(p.matrix(), q.matrix()))
        })
        .collect()
}
