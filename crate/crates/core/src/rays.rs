//! Extreme rays of the fundamental cone by the double description method.
//!
//! Starts from the unit rays of the nonnegative orthant and inserts the
//! check inequalities one at a time. Rays are kept as primitive integer
//! vectors with a bitset of the inserted constraints they meet with
//! equality; two rays of opposite sign are combined only if the constraints
//! they share have rank `n - 2`.

use crate::cone::{cone_constraints, is_minimal_in, type_of, ConstraintSet, PseudoCodeword, PseudoCodewordJson};
use crate::linalg;
use crate::plane::ParityCheck;
use crate::rational::{self, Rational};
use crate::weights::{pseudo_weight, WeightKind};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RayError {
    #[error("integer overflow while combining rays")]
    Overflow,
    #[error("ray set has {rays} columns, matrix has {matrix}")]
    LengthMismatch { rays: usize, matrix: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed ray file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_time: Option<Duration>,
    /// Cap on the number of intermediate rays.
    pub max_rays: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InsertionOrder {
    /// `(j, i)`-lexicographic.
    #[default]
    Lexicographic,
    Shuffled(u64),
}

/// Permutation of the check constraints (indices into `cs.checks()`).
pub fn insertion_order(cs: &ConstraintSet, order: InsertionOrder) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..cs.n_checks()).collect();
    if let InsertionOrder::Shuffled(seed) = order {
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    perm
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DdStats {
    pub inserted: usize,
    pub peak_rays: usize,
    pub pairs_tested: u64,
    pub adjacent_pairs: u64,
    pub elapsed: Duration,
}

/// Canonical rays, sorted, with the matrix they belong to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySet {
    pub n: usize,
    pub rays: Vec<PseudoCodeword>,
    pub h_matrix_id: String,
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub set: RaySet,
    pub stats: DdStats,
    /// Set when the budget stopped the run.
    pub stop_reason: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Bits<const W: usize>([u64; W]);

impl<const W: usize> Bits<W> {
    fn zero() -> Self {
        Self([0; W])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn and(&self, o: &Self) -> Self {
        let mut r = [0; W];
        (0..W).for_each(|k| r[k] = self.0[k] & o.0[k]);
        Self(r)
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

struct Ray<const W: usize> {
    v: Vec<i64>,
    zeros: Bits<W>,
}

struct Dd<'a> {
    n: usize,
    cs: &'a ConstraintSet,
}

impl Dd<'_> {
    /// Bit layout: nonnegativity of column `i` is bit `i`, check `k` is bit `n + k`.
    fn adjacent<const W: usize>(&self, common: &Bits<W>, inserted: &[usize]) -> bool {
        let n = self.n;
        let zero_cols: Vec<bool> = (0..n).map(|i| common.get(i)).collect();
        let n_zero = zero_cols.iter().filter(|&&z| z).count();
        let target = n - 2 - n_zero;
        let free: Vec<usize> = (0..n).filter(|&i| !zero_cols[i]).collect();
        let rows: Vec<Vec<i64>> = inserted
            .iter()
            .filter(|&&k| common.get(n + k))
            .map(|&k| {
                let c = &self.cs.checks()[k];
                free.iter()
                    .map(|&i| {
                        if c.minus == Some(i) {
                            -1
                        } else if c.plus.contains(&i) {
                            1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        if rows.len() < target {
            return false;
        }
        linalg::rank_mod_p(&rows) == target || linalg::rank(&rows) == target
    }
}

fn combine(p: &[i64], sp: i64, m: &[i64], sm: i64) -> Option<Vec<i64>> {
    // sp > 0 > sm: sp·m - sm·p vanishes on the new constraint
    let mut v = Vec::with_capacity(p.len());
    for (a, b) in p.iter().zip(m) {
        v.push(sp.checked_mul(*b)?.checked_add((-sm).checked_mul(*a)?)?);
    }
    rational::reduce_i64(&mut v);
    Some(v)
}

/// Rays, completeness, statistics and the budget stop reason.
type RunOutcome = (Vec<Vec<i64>>, bool, DdStats, Option<String>);

fn run<const W: usize>(cs: &ConstraintSet, order: &[usize], budget: Budget) -> Result<RunOutcome, RayError> {
    let n = cs.n();
    let start = Instant::now();
    let dd = Dd { n, cs };
    let mut rays: Vec<Ray<W>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            let mut zeros = Bits::zero();
            (0..n).filter(|&k| k != i).for_each(|k| zeros.set(k));
            Ray { v, zeros }
        })
        .collect();
    let mut stats = DdStats { peak_rays: n, ..Default::default() };
    let mut inserted: Vec<usize> = Vec::new();
    let out_of_time = |t: Instant| budget.max_time.is_some_and(|m| t.elapsed() > m);

    for (step, &k) in order.iter().enumerate() {
        let c = &cs.checks()[k];
        let vals: Vec<i64> = rays.iter().map(|r| c.eval_i64(&r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| vals[r] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| vals[r] < 0).collect();
        let min_common = (n - 2) as u32;
        let abort = AtomicBool::new(false);
        let overflow = AtomicBool::new(false);
        let tested = std::sync::atomic::AtomicU64::new(0);
        let new_rays: Vec<Ray<W>> = pos
            .par_iter()
            .flat_map_iter(|&p| {
                let mut local = Vec::new();
                if abort.load(Ordering::Relaxed) || out_of_time(start) {
                    abort.store(true, Ordering::Relaxed);
                    return local.into_iter();
                }
                let mut count = 0;
                for &m in &neg {
                    let common = rays[p].zeros.and(&rays[m].zeros);
                    if common.count() < min_common {
                        continue;
                    }
                    count += 1;
                    if !dd.adjacent(&common, &inserted) {
                        continue;
                    }
                    match combine(&rays[p].v, vals[p], &rays[m].v, vals[m]) {
                        Some(v) => {
                            let mut zeros = common;
                            zeros.set(n + k);
                            local.push(Ray { v, zeros });
                        }
                        None => overflow.store(true, Ordering::Relaxed),
                    }
                }
                tested.fetch_add(count, Ordering::Relaxed);
                local.into_iter()
            })
            .collect();
        if overflow.load(Ordering::Relaxed) {
            return Err(RayError::Overflow);
        }
        if abort.load(Ordering::Relaxed) {
            stats.elapsed = start.elapsed();
            return Ok((
                partial(cs, rays, order, step),
                false,
                stats,
                Some(format!("time budget hit at insertion {step}")),
            ));
        }
        stats.pairs_tested += tested.into_inner();
        stats.adjacent_pairs += new_rays.len() as u64;
        let next_len = rays.len() - neg.len() + new_rays.len();
        if budget.max_rays.is_some_and(|cap| next_len > cap) {
            stats.elapsed = start.elapsed();
            return Ok((
                partial(cs, rays, order, step),
                false,
                stats,
                Some(format!("ray budget hit at insertion {step} ({next_len} rays)")),
            ));
        }
        let mut kept: Vec<Ray<W>> = Vec::with_capacity(next_len);
        for (r, mut ray) in rays.into_iter().enumerate() {
            match vals[r].signum() {
                1 => kept.push(ray),
                0 => {
                    ray.zeros.set(n + k);
                    kept.push(ray);
                }
                _ => {}
            }
        }
        kept.extend(new_rays);
        rays = kept;
        inserted.push(k);
        stats.inserted = step + 1;
        stats.peak_rays = stats.peak_rays.max(rays.len());
    }
    stats.elapsed = start.elapsed();
    Ok((rays.into_iter().map(|r| r.v).collect(), true, stats, None))
}

/// Current rays that already satisfy the constraints not yet inserted.
fn partial<const W: usize>(cs: &ConstraintSet, rays: Vec<Ray<W>>, order: &[usize], step: usize) -> Vec<Vec<i64>> {
    rays.into_iter().map(|r| r.v).filter(|v| order[step..].iter().all(|&k| cs.checks()[k].eval_i64(v) >= 0)).collect()
}

/// Double description enumeration; rays are certified minimal before
/// being returned. Over budget, the certified rays found so far are
/// returned with `complete = false`.
pub fn enumerate_rays(h: &ParityCheck, budget: Budget, order: InsertionOrder) -> Result<Enumeration, RayError> {
    let cs = cone_constraints(h);
    let perm = insertion_order(&cs, order);
    let bits = cs.len();
    let (raw, complete, stats, stop_reason) = match bits.div_ceil(64) {
        1 => run::<1>(&cs, &perm, budget)?,
        2 => run::<2>(&cs, &perm, budget)?,
        3..=4 => run::<4>(&cs, &perm, budget)?,
        5..=8 => run::<8>(&cs, &perm, budget)?,
        9..=16 => run::<16>(&cs, &perm, budget)?,
        _ => run::<64>(&cs, &perm, budget)?,
    };
    let rays = certify(&cs, raw);
    Ok(Enumeration { set: RaySet { n: h.n_cols(), rays, h_matrix_id: h.matrix_id(), complete }, stats, stop_reason })
}

/// Keeps the minimal members, deduplicated and sorted by canonical form.
fn certify(cs: &ConstraintSet, raw: Vec<Vec<i64>>) -> Vec<PseudoCodeword> {
    let mut canon: Vec<Vec<i64>> = raw
        .into_par_iter()
        .filter_map(|v| {
            let w = PseudoCodeword::from_integers(v).ok()?;
            is_minimal_in(cs, &w).ok()?.then(|| w.canonical_i64())
        })
        .collect();
    canon.sort();
    canon.dedup();
    canon.into_iter().map(|v| PseudoCodeword::from_integers(v).expect("nonnegative")).collect()
}

impl RaySet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains(&self, w: &PseudoCodeword) -> bool {
        let c = w.canonical_i64();
        self.rays.binary_search_by(|r| r.canonical_i64().cmp(&c)).is_ok()
    }

    /// Closed under `i -> i + 1 (mod n)`.
    pub fn is_shift_closed(&self) -> bool {
        self.rays.iter().all(|r| self.contains(&r.shifted(1)))
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<(), RayError> {
        let header = RaySetHeader {
            kind: "rayset".into(),
            n: self.n,
            h_matrix_id: self.h_matrix_id.clone(),
            complete: self.complete,
            count: self.rays.len(),
        };
        writeln!(out, "{}", serde_json::to_string(&header).expect("serializable"))?;
        for r in &self.rays {
            writeln!(out, "{}", serde_json::to_string(&r.to_json()).expect("serializable"))?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, RayError> {
        let mut lines = input.lines();
        let header: RaySetHeader = match lines.next() {
            Some(l) => serde_json::from_str(&l?).map_err(|e| RayError::Format(format!("header: {e}")))?,
            None => return Err(RayError::Format("empty file".into())),
        };
        let mut rays = Vec::with_capacity(header.count);
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let j: PseudoCodewordJson =
                serde_json::from_str(&line).map_err(|e| RayError::Format(format!("line {}: {e}", k + 2)))?;
            let w = PseudoCodeword::from_json(&j).map_err(|e| RayError::Format(format!("line {}: {e}", k + 2)))?;
            if w.len() != header.n {
                return Err(RayError::LengthMismatch { rays: w.len(), matrix: header.n });
            }
            rays.push(w);
        }
        if rays.len() != header.count {
            return Err(RayError::Format(format!("header says {} rays, found {}", header.count, rays.len())));
        }
        rays.sort_by_key(PseudoCodeword::canonical_i64);
        Ok(Self { n: header.n, rays, h_matrix_id: header.h_matrix_id, complete: header.complete })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RaySetHeader {
    kind: String,
    n: usize,
    h_matrix_id: String,
    complete: bool,
    count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    pub low: Rational,
    pub high: Rational,
    pub count: usize,
}

/// Counts per half-open bin `[b, b + width)` with `b` a multiple of
/// `width`, from the lowest to the highest occupied bin.
pub fn histogram(set: &RaySet, kind: WeightKind, width: &Rational) -> Vec<Bin> {
    assert!(width.is_positive(), "bin width must be positive");
    let mut counts: BTreeMap<num_bigint::BigInt, usize> = BTreeMap::new();
    for r in &set.rays {
        let w = pseudo_weight(r, kind).expect("rays are nonzero");
        *counts.entry((w / width).floor().to_integer()).or_insert(0) += 1;
    }
    let (Some(lo), Some(hi)) = (counts.keys().next().cloned(), counts.keys().next_back().cloned()) else {
        return vec![];
    };
    let mut bins = Vec::new();
    let mut b = lo;
    while b <= hi {
        let low = Rational::from_integer(b.clone()) * width;
        bins.push(Bin { high: &low + width, low, count: counts.get(&b).copied().unwrap_or(0) });
        b += 1;
    }
    bins
}

pub fn histogram_csv(bins: &[Bin]) -> String {
    let mut s = String::from("bin_low,bin_high,count\n");
    for b in bins {
        s.push_str(&format!("{},{},{}\n", rational::to_string(&b.low), rational::to_string(&b.high), b.count));
    }
    s
}

/// Minimum pseudo-weight over the set.
pub fn min_weight(set: &RaySet, kind: WeightKind) -> Option<Rational> {
    set.rays.iter().map(|r| pseudo_weight(r, kind).expect("nonzero")).min()
}

/// Type of every ray, as sorted `(value, count)` lists, with multiplicities.
pub fn type_census(set: &RaySet) -> BTreeMap<Vec<(i64, usize)>, usize> {
    let mut out = BTreeMap::new();
    for r in &set.rays {
        let t = type_of(r);
        let key: Vec<(i64, usize)> =
            t.positive().map(|(v, c)| (v.to_integer().to_i64().unwrap_or(i64::MAX), c)).collect();
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

/// Entry gcd is 1.
pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, x| g.gcd(x)) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{build_plane, min_weight_codewords};
    use crate::rational::int;

    fn single_check() -> ParityCheck {
        ParityCheck::from_rows(3, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn single_check_fixture() {
        let e = enumerate_rays(&single_check(), Budget::unlimited(), InsertionOrder::default()).unwrap();
        assert!(e.set.complete);
        let got: Vec<Vec<i64>> = e.set.rays.iter().map(|r| r.canonical_i64()).collect();
        assert_eq!(got, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        for seed in 0..5 {
            let f = enumerate_rays(&single_check(), Budget::unlimited(), InsertionOrder::Shuffled(seed)).unwrap();
            assert_eq!(f.set, e.set);
        }
    }

    #[test]
    fn fano_contains_codewords_and_is_order_invariant() {
        let h = build_plane(2).unwrap().incidence_matrix();
        let e = enumerate_rays(&h, Budget::unlimited(), InsertionOrder::default()).unwrap();
        assert!(e.set.complete);
        for cw in min_weight_codewords(&h, 4).unwrap() {
            let w = PseudoCodeword::from_integers(cw.to_bools().iter().map(|&b| b as i64)).unwrap();
            assert!(e.set.contains(&w));
        }
        assert!(e.set.is_shift_closed());
        let f = enumerate_rays(&h, Budget::unlimited(), InsertionOrder::Shuffled(7)).unwrap();
        assert_eq!(f.set, e.set);
    }

    #[test]
    fn budget_yields_partial() {
        let h = build_plane(2).unwrap().incidence_matrix();
        let e = enumerate_rays(&h, Budget { max_rays: Some(8), max_time: None }, InsertionOrder::default()).unwrap();
        assert!(!e.set.complete);
        assert!(e.stop_reason.is_some());
        let cs = cone_constraints(&h);
        assert!(e.set.rays.iter().all(|r| is_minimal_in(&cs, r).unwrap()));
    }

    #[test]
    fn jsonl_round_trip_and_histogram() {
        let e = enumerate_rays(&single_check(), Budget::unlimited(), InsertionOrder::default()).unwrap();
        let mut buf = Vec::new();
        e.set.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("{\"kind\":\"rayset\",\"n\":3,"));
        assert_eq!(text.lines().count(), 4);
        let back = RaySet::read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, e.set);

        let bins = histogram(&e.set, WeightKind::Bec, &int(1));
        assert_eq!(bins, vec![Bin { low: int(2), high: int(3), count: 3 }]);
        assert_eq!(histogram_csv(&bins), "bin_low,bin_high,count\n2,3,3\n");
        let empty = RaySet { n: 3, rays: vec![], h_matrix_id: String::new(), complete: true };
        assert!(histogram(&empty, WeightKind::Awgnc, &int(1)).is_empty());
    }
}
