//! Explicit minimal pseudo-codewords built from two overlapping
//! minimum-weight codewords by switching chosen zeros to a positive value.

use crate::cone::{
    active_rank_in, cone_constraints, first_violation, is_minimal_in, mod2_reduce, type_of, ConeError, ConstraintSet,
    PseudoCodeword, PseudoCodewordJson,
};
use crate::plane::{min_weight_codewords, Plane};
use crate::rational::{self, int, Rational};
use crate::weights::{awgnc_pw, bec_pw, bound_thm5, bsc_pw, conjectured_wp};
use itertools::Itertools;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("no pair of minimum-weight codewords overlaps in {0} positions")]
    NoSuchPair(usize),
    #[error("no switch set yields a minimal pseudo-codeword")]
    SearchExhausted,
    #[error("no two lines carry only zeros")]
    NoZeroLinePair,
    #[error("construction needs q = {expected}, got {got}")]
    WrongQ { expected: usize, got: usize },
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// One vector along the construction with its tight-constraint rank.
#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub label: String,
    pub vector: PseudoCodewordJson,
    pub active_rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionTrace {
    pub q: usize,
    pub n: usize,
    pub generators: [Vec<usize>; 2],
    pub overlap: usize,
    /// Switched positions with the value assigned.
    pub switched: Vec<(usize, String)>,
    pub stages: Vec<Stage>,
    pub minimal: bool,
    /// `(value, count)` pairs, zeros included.
    pub type_counts: Vec<(String, usize)>,
    pub awgnc_pw: String,
    pub bsc_pw: usize,
    pub bec_pw: usize,
    pub thm5_bound: String,
    /// Procedure-specific data (lines, α, candidate counts).
    pub notes: serde_json::Map<String, serde_json::Value>,
    #[serde(skip)]
    pub final_vector: PseudoCodeword,
}

impl ConstructionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Minimum-weight codewords as sorted supports: exhaustive when the code
/// dimension allows it, otherwise the first `limit` hyperovals.
pub fn minimum_codewords(plane: &Plane, limit: usize) -> Vec<Vec<usize>> {
    match min_weight_codewords(&plane.incidence_matrix(), plane.q() + 2) {
        Ok(cws) => cws.iter().map(|c| c.support()).collect(),
        Err(_) => plane.hyperovals(Some(limit)),
    }
}

fn overlap(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

/// All pairs `(i, j)`, `i < j`, of codewords sharing exactly `k` positions,
/// in lexicographic order.
fn pairs_with_overlap(cws: &[Vec<usize>], k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..cws.len()).tuple_combinations().filter(move |&(i, j)| overlap(&cws[i], &cws[j]) == k)
}

/// First pair of weight-`(q+2)` codewords whose supports share `k` points.
pub fn overlapping_pair_with(plane: &Plane, k: usize) -> Result<(Vec<usize>, Vec<usize>), ConstructError> {
    let cws = minimum_codewords(plane, 4096);
    let (i, j) = pairs_with_overlap(&cws, k).next().ok_or(ConstructError::NoSuchPair(k))?;
    Ok((cws[i].clone(), cws[j].clone()))
}

/// Overlap `(q+2)/2`.
pub fn overlapping_pair(plane: &Plane) -> Result<(Vec<usize>, Vec<usize>), ConstructError> {
    overlapping_pair_with(plane, (plane.q() + 2) / 2)
}

fn sum_vector(n: usize, a: &[usize], b: &[usize]) -> PseudoCodeword {
    let mut v = vec![0i64; n];
    a.iter().chain(b).for_each(|&i| v[i] += 1);
    PseudoCodeword::from_integers(v).expect("nonnegative")
}

fn with_values(base: &PseudoCodeword, positions: &[usize], value: &Rational) -> PseudoCodeword {
    let mut e = base.entries().to_vec();
    positions.iter().for_each(|&i| e[i] = value.clone());
    PseudoCodeword::new(e).expect("nonnegative")
}

fn stage(cs: &ConstraintSet, label: &str, w: &PseudoCodeword) -> Result<Stage, ConeError> {
    Ok(Stage { label: label.into(), vector: w.to_json(), active_rank: active_rank_in(cs, w)? })
}

/// Largest `α >= 0` keeping `base + α Σ_{i ∈ positions} e_i` in the cone;
/// `None` when unbounded.
pub fn max_alpha(
    cs: &ConstraintSet,
    base: &PseudoCodeword,
    positions: &[usize],
) -> Result<Option<Rational>, ConeError> {
    if let Some(k) = first_violation(cs, base).first_violated {
        return Err(ConeError::NotInCone { constraint: k });
    }
    let mut dir = vec![0i64; cs.n()];
    positions.iter().for_each(|&i| dir[i] += 1);
    Ok(cs
        .iter()
        .filter_map(|c| {
            let slope = c.eval_i64(&dir);
            (slope < 0).then(|| c.eval(base.entries()) / int(-slope))
        })
        .min())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    plane: &Plane,
    cs: &ConstraintSet,
    gens: (Vec<usize>, Vec<usize>),
    stages: Vec<Stage>,
    switched: Vec<(usize, Rational)>,
    w: PseudoCodeword,
    notes: serde_json::Map<String, serde_json::Value>,
) -> Result<ConstructionTrace, ConstructError> {
    let t = type_of(&w);
    let mut type_counts = vec![("0".to_string(), t.t0())];
    type_counts.extend(t.positive().map(|(v, c)| (rational::to_string(v), c)));
    Ok(ConstructionTrace {
        q: plane.q(),
        n: plane.n(),
        overlap: overlap(&gens.0, &gens.1),
        generators: [gens.0, gens.1],
        switched: switched.into_iter().map(|(i, v)| (i, rational::to_string(&v))).collect(),
        stages,
        minimal: is_minimal_in(cs, &w)?,
        type_counts,
        awgnc_pw: rational::to_string(&awgnc_pw(&w)),
        bsc_pw: bsc_pw(&w).unwrap_or(0),
        bec_pw: bec_pw(&w),
        thm5_bound: rational::to_string(&bound_thm5(plane.q() as u64)),
        notes,
        final_vector: w,
    })
}

/// Searches pairs with overlap `(q+2)/2` and switch sets of `size` zeros
/// (set to 2) accepted by `accept`, returning the first minimal result.
fn switch_search(
    plane: &Plane,
    size: usize,
    pair_limit: usize,
    accept: &SwitchPredicate,
) -> Result<ConstructionTrace, ConstructError> {
    let h = plane.incidence_matrix();
    let cs = cone_constraints(&h);
    let n = plane.n();
    let two = int(2);
    let cws = minimum_codewords(plane, 4096);
    let mut tried = 0usize;
    for (i, j) in pairs_with_overlap(&cws, (plane.q() + 2) / 2).take(pair_limit) {
        let base = sum_vector(n, &cws[i], &cws[j]);
        let zeros: Vec<usize> = (0..n).filter(|&k| base.entries()[k].is_zero()).collect();
        let candidates: Vec<Vec<usize>> =
            zeros.iter().copied().combinations(size).filter(|s| accept(plane, s)).collect();
        tried += candidates.len();
        let hit = candidates.par_iter().find_first(|s| {
            let w = with_values(&base, s, &two);
            first_violation(&cs, &w).member && is_minimal_in(&cs, &w).unwrap_or(false)
        });
        if let Some(s) = hit {
            let w = with_values(&base, s, &two);
            let stages = vec![
                stage(&cs, "x1", &sum_vector(n, &cws[i], &[]))?,
                stage(&cs, "x2", &sum_vector(n, &cws[j], &[]))?,
                stage(&cs, "sum", &base)?,
                stage(&cs, "switched", &w)?,
            ];
            let mut notes = serde_json::Map::new();
            notes.insert("candidates_tried".into(), tried.into());
            let switched = s.iter().map(|&p| (p, two.clone())).collect();
            return finish(plane, &cs, (cws[i].clone(), cws[j].clone()), stages, switched, w, notes);
        }
    }
    Err(ConstructError::SearchExhausted)
}

/// Decides which switch sets a search considers.
pub type SwitchPredicate = dyn Fn(&Plane, &[usize]) -> bool + Sync;

/// Totals from [`switch_census`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwitchCensus {
    pub pairs: usize,
    pub candidates: usize,
    pub certified: usize,
}

/// Counts every certified-minimal switch set, of size `log2 q`, over at
/// most `pair_limit` codeword pairs, instead of stopping at the first.
pub fn switch_census(plane: &Plane, pair_limit: usize, accept: &SwitchPredicate) -> SwitchCensus {
    let cs = cone_constraints(&plane.incidence_matrix());
    let n = plane.n();
    let two = int(2);
    let cws = minimum_codewords(plane, 4096);
    let mut census = SwitchCensus { pairs: 0, candidates: 0, certified: 0 };
    for (i, j) in pairs_with_overlap(&cws, (plane.q() + 2) / 2).take(pair_limit) {
        let base = sum_vector(n, &cws[i], &cws[j]);
        let zeros: Vec<usize> = (0..n).filter(|&k| base.entries()[k].is_zero()).collect();
        let candidates: Vec<Vec<usize>> =
            zeros.iter().copied().combinations(plane.s() as usize).filter(|s| accept(plane, s)).collect();
        census.pairs += 1;
        census.candidates += candidates.len();
        census.certified += candidates
            .par_iter()
            .filter(|s| {
                let w = with_values(&base, s, &two);
                first_violation(&cs, &w).member && is_minimal_in(&cs, &w).unwrap_or(false)
            })
            .count();
    }
    census
}

/// Sum of two weight-`(q+2)` codewords overlapping in `(q+2)/2` points with
/// `log2 q` zeros switched to 2, certified minimal.
pub fn ex3_minimal_pcw(plane: &Plane) -> Result<ConstructionTrace, ConstructError> {
    switch_search(plane, plane.s() as usize, usize::MAX, &|_, _| true)
}

/// The `s` switched points are in general position: for `s <= 2` any
/// choice, for `s >= 3` no three collinear.
pub fn simplex_predicate(plane: &Plane, points: &[usize]) -> bool {
    points.len() < 3 || plane.arc_check(points).is_arc
}

/// Switch sets of size `s` satisfying `predicate`, over at most
/// `pair_limit` codeword pairs. The result type always matches the
/// conjectured one; minimality is what is searched for.
pub fn conjectured_family_search(
    plane: &Plane,
    pair_limit: usize,
    predicate: &SwitchPredicate,
) -> Result<ConstructionTrace, ConstructError> {
    let mut trace = switch_search(plane, plane.s() as usize, pair_limit, predicate)?;
    let target = conjectured_wp(plane.q() as u64).expect("plane order is supported");
    trace.notes.insert("conjectured_wp".into(), rational::to_string(&target).into());
    trace.notes.insert("matches_conjecture".into(), (awgnc_pw(&trace.final_vector) == target).into());
    Ok(trace)
}

/// Which zero points receive `α` in [`ex5_procedure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ex5Switch {
    /// `P1 ∈ L1` and `P2 ∈ L2`.
    Pair,
    /// `P0 = L1 ∩ L2` as well.
    PairAndIntersection,
}

/// Two weight-6 codewords overlapping in two points; two all-zero lines
/// `L1, L2` meeting in `P0`; points `P1 ∈ L1`, `P2 ∈ L2` (and possibly `P0`)
/// raised to the largest feasible `α`, accepted when the result is minimal.
pub fn ex5_procedure(plane: &Plane, switch: Ex5Switch) -> Result<ConstructionTrace, ConstructError> {
    if plane.q() != 4 {
        return Err(ConstructError::WrongQ { expected: 4, got: plane.q() });
    }
    let h = plane.incidence_matrix();
    let cs = cone_constraints(&h);
    let n = plane.n();
    let cws = minimum_codewords(plane, usize::MAX);
    let mut saw_zero_lines = false;
    for (i, j) in pairs_with_overlap(&cws, 2) {
        let base = sum_vector(n, &cws[i], &cws[j]);
        let zero_line = |l: usize| plane.line(l).iter().all(|&p| base.entries()[p].is_zero());
        let zero_lines: Vec<usize> = (0..n).filter(|&l| zero_line(l)).collect();
        for (&l1, &l2) in zero_lines.iter().tuple_combinations() {
            saw_zero_lines = true;
            let p0 = plane.intersection(l1, l2).expect("distinct lines meet");
            for &p1 in plane.line(l1).iter().filter(|&&p| p != p0) {
                for &p2 in plane.line(l2).iter().filter(|&&p| p != p0) {
                    let positions = match switch {
                        Ex5Switch::Pair => vec![p1, p2],
                        Ex5Switch::PairAndIntersection => vec![p0, p1, p2],
                    };
                    let Some(alpha) = max_alpha(&cs, &base, &positions)? else {
                        continue;
                    };
                    if !alpha.is_positive() {
                        continue;
                    }
                    let w = with_values(&base, &positions, &alpha);
                    if !is_minimal_in(&cs, &w)? {
                        continue;
                    }
                    let stages = vec![
                        stage(&cs, "x1", &sum_vector(n, &cws[i], &[]))?,
                        stage(&cs, "x2", &sum_vector(n, &cws[j], &[]))?,
                        stage(&cs, "sum", &base)?,
                        stage(&cs, "switched", &w)?,
                    ];
                    let mut notes = serde_json::Map::new();
                    notes.insert("lines".into(), serde_json::json!([l1, l2]));
                    notes.insert("points".into(), serde_json::json!({"p0": p0, "p1": p1, "p2": p2}));
                    notes.insert("max_alpha".into(), rational::to_string(&alpha).into());
                    let switched = positions.iter().map(|&p| (p, alpha.clone())).collect();
                    return finish(plane, &cs, (cws[i].clone(), cws[j].clone()), stages, switched, w, notes);
                }
            }
        }
    }
    Err(if saw_zero_lines { ConstructError::SearchExhausted } else { ConstructError::NoZeroLinePair })
}

/// The final vector reduces mod 2 to a codeword.
pub fn reduces_to_codeword(plane: &Plane, w: &PseudoCodeword) -> bool {
    mod2_reduce(w).is_ok_and(|x| plane.incidence_matrix().is_codeword(&x))
}
