//! The fundamental cone K(H): for every check `j` and every `i ∈ I_j`,
//! `Σ_{i' ∈ I_j \ {i}} ω_{i'} >= ω_i`, plus `ω_i >= 0` for every column.
//!
//! Its extreme rays are the minimal pseudo-codewords. A nonzero member is
//! minimal exactly when the coefficient vectors of the constraints it meets
//! with equality have rank `n - 1`.

use crate::linalg;
use crate::plane::ParityCheck;
use crate::rational::{self, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("vector has length {got}, matrix has {expected} columns")]
    LengthMismatch { expected: usize, got: usize },
    #[error("entry {index} is negative")]
    NegativeEntry { index: usize },
    #[error("vector is not in the fundamental cone (violates constraint {constraint})")]
    NotInCone { constraint: usize },
    #[error("entry {index} is not an integer")]
    NonInteger { index: usize },
    #[error("malformed pseudo-codeword: {0}")]
    Malformed(String),
}

/// A nonnegative rational vector; positive multiples are equivalent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PseudoCodeword {
    entries: Vec<Rational>,
}

impl PseudoCodeword {
    pub fn new(entries: Vec<Rational>) -> Result<Self, ConeError> {
        if let Some(index) = entries.iter().position(Signed::is_negative) {
            return Err(ConeError::NegativeEntry { index });
        }
        Ok(Self { entries })
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Result<Self, ConeError> {
        Self::new(values.into_iter().map(rational::int).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self { entries: vec![Rational::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Primitive integer representative.
    pub fn canonical(&self) -> Vec<BigInt> {
        rational::canonical_integers(&self.entries)
    }

    /// Canonical form as machine integers (panics only on absurd magnitudes).
    pub fn canonical_i64(&self) -> Vec<i64> {
        self.canonical().iter().map(|x| x.to_i64().expect("canonical entry fits in i64")).collect()
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self, ConeError> {
        Self::new(self.entries.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn l1_norm(&self) -> Rational {
        self.entries.iter().sum()
    }

    pub fn l2_norm_sq(&self) -> Rational {
        self.entries.iter().map(|x| x * x).sum()
    }

    pub fn dot(&self, lambda: &[Rational]) -> Rational {
        self.entries.iter().zip(lambda).map(|(a, b)| a * b).sum()
    }

    /// Cyclic relabelling `i -> i + k (mod n)`.
    pub fn shifted(&self, k: usize) -> Self {
        let n = self.entries.len();
        let mut out = vec![Rational::zero(); n];
        for (i, x) in self.entries.iter().enumerate() {
            out[(i + k) % n] = x.clone();
        }
        Self { entries: out }
    }

    pub fn to_json(&self) -> PseudoCodewordJson {
        PseudoCodewordJson {
            n: self.len(),
            entries: self.entries.iter().map(rational::to_string).collect(),
            canonical: self.canonical_i64(),
        }
    }

    pub fn from_json(j: &PseudoCodewordJson) -> Result<Self, ConeError> {
        if j.entries.len() != j.n {
            return Err(ConeError::Malformed(format!("n = {} but {} entries", j.n, j.entries.len())));
        }
        let entries = j
            .entries
            .iter()
            .map(|s| rational::parse(s).ok_or_else(|| ConeError::Malformed(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(entries)
    }
}

/// Wire form: `{"n": .., "entries": ["p/q", ..], "canonical": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoCodewordJson {
    pub n: usize,
    pub entries: Vec<String>,
    pub canonical: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintKind {
    /// Check `row`, pivot column `pivot ∈ I_row`.
    Check {
        row: usize,
        pivot: usize,
    },
    NonNegative {
        col: usize,
    },
}

/// `Σ plus - minus >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub plus: Vec<usize>,
    pub minus: Option<usize>,
}

impl Constraint {
    pub fn coefficients(&self, n: usize) -> Vec<i64> {
        let mut a = vec![0; n];
        self.plus.iter().for_each(|&i| a[i] = 1);
        if let Some(m) = self.minus {
            a[m] = -1;
        }
        a
    }

    pub fn eval(&self, w: &[Rational]) -> Rational {
        let s: Rational = self.plus.iter().map(|&i| &w[i]).sum();
        match self.minus {
            Some(m) => s - &w[m],
            None => s,
        }
    }

    pub fn eval_i64(&self, w: &[i64]) -> i64 {
        let s: i64 = self.plus.iter().map(|&i| w[i]).sum();
        s - self.minus.map_or(0, |m| w[m])
    }
}

/// All cone inequalities: checks in `(j, i)` order, then nonnegativity.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    n: usize,
    constraints: Vec<Constraint>,
    n_checks: usize,
}

impl ConstraintSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Number of check (non-nonnegativity) inequalities.
    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn get(&self, k: usize) -> &Constraint {
        &self.constraints[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    pub fn checks(&self) -> &[Constraint] {
        &self.constraints[..self.n_checks]
    }
}

pub fn cone_constraints(h: &ParityCheck) -> ConstraintSet {
    let n = h.n_cols();
    let mut constraints = Vec::new();
    for (j, row) in h.rows().iter().enumerate() {
        for &i in row {
            constraints.push(Constraint {
                kind: ConstraintKind::Check { row: j, pivot: i },
                plus: row.iter().copied().filter(|&k| k != i).collect(),
                minus: Some(i),
            });
        }
    }
    let n_checks = constraints.len();
    constraints.extend((0..n).map(|i| Constraint {
        kind: ConstraintKind::NonNegative { col: i },
        plus: vec![i],
        minus: None,
    }));
    ConstraintSet { n, constraints, n_checks }
}

fn check_len(h: &ParityCheck, w: &PseudoCodeword) -> Result<(), ConeError> {
    if w.len() != h.n_cols() {
        return Err(ConeError::LengthMismatch { expected: h.n_cols(), got: w.len() });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Index into [`cone_constraints`] of the first violated inequality.
    pub first_violated: Option<usize>,
    pub violated_kind: Option<ConstraintKind>,
}

pub fn is_member(h: &ParityCheck, w: &PseudoCodeword) -> Result<Membership, ConeError> {
    check_len(h, w)?;
    Ok(first_violation(&cone_constraints(h), w))
}

pub fn first_violation(cs: &ConstraintSet, w: &PseudoCodeword) -> Membership {
    let bad = cs.iter().position(|c| c.eval(w.entries()).is_negative());
    Membership { member: bad.is_none(), first_violated: bad, violated_kind: bad.map(|k| cs.get(k).kind) }
}

/// Indices of the constraints met with equality.
pub fn tight_constraints(cs: &ConstraintSet, w: &PseudoCodeword) -> Vec<usize> {
    (0..cs.len()).filter(|&k| cs.get(k).eval(w.entries()).is_zero()).collect()
}

/// Rank of the tight check rows restricted to the support columns; the
/// tight nonnegativity rows contribute one unit vector per zero entry.
fn tight_rank_parts(cs: &ConstraintSet, w: &PseudoCodeword) -> (usize, Vec<Vec<i64>>) {
    let supp = support(w);
    let zeros = w.len() - supp.len();
    let rows = cs
        .checks()
        .iter()
        .filter(|c| c.eval(w.entries()).is_zero())
        .map(|c| {
            let a = c.coefficients(w.len());
            supp.iter().map(|&i| a[i]).collect::<Vec<i64>>()
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    (zeros, rows)
}

/// Exact rank of the tight constraint system at a member `w`.
pub fn active_rank(h: &ParityCheck, w: &PseudoCodeword) -> Result<usize, ConeError> {
    check_len(h, w)?;
    let cs = cone_constraints(h);
    active_rank_in(&cs, w)
}

pub fn active_rank_in(cs: &ConstraintSet, w: &PseudoCodeword) -> Result<usize, ConeError> {
    if let Some(k) = first_violation(cs, w).first_violated {
        return Err(ConeError::NotInCone { constraint: k });
    }
    let (zeros, rows) = tight_rank_parts(cs, w);
    Ok(zeros + linalg::rank(&rows))
}

/// `w ≠ 0` and its tight constraints have rank `n - 1`.
pub fn is_minimal(h: &ParityCheck, w: &PseudoCodeword) -> Result<bool, ConeError> {
    check_len(h, w)?;
    is_minimal_in(&cone_constraints(h), w)
}

pub fn is_minimal_in(cs: &ConstraintSet, w: &PseudoCodeword) -> Result<bool, ConeError> {
    if let Some(k) = first_violation(cs, w).first_violated {
        return Err(ConeError::NotInCone { constraint: k });
    }
    if w.is_zero() {
        return Ok(false);
    }
    let (zeros, rows) = tight_rank_parts(cs, w);
    let target = w.len() - 1 - zeros;
    // The rational rank is at most n - 1 (w spans the kernel) and at least
    // the modular rank, so a modular hit settles it.
    if linalg::rank_mod_p(&rows) == target {
        return Ok(true);
    }
    Ok(linalg::rank(&rows) == target)
}

/// Value -> multiplicity for the positive entries; `t_0` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeVector {
    n: usize,
    counts: BTreeMap<Rational, usize>,
}

impl TypeVector {
    /// From explicit `(value, count)` pairs; zero values fold into `t_0`.
    pub fn from_counts<I: IntoIterator<Item = (Rational, usize)>>(n: usize, counts: I) -> Self {
        let mut map = BTreeMap::new();
        for (v, c) in counts {
            if c > 0 && v.is_positive() {
                *map.entry(v).or_insert(0) += c;
            }
        }
        Self { n, counts: map }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `t_ℓ`.
    pub fn t(&self, value: &Rational) -> usize {
        if value.is_zero() {
            return self.t0();
        }
        self.counts.get(value).copied().unwrap_or(0)
    }

    pub fn t0(&self) -> usize {
        self.n - self.support_size()
    }

    /// Positive values with their counts, ascending.
    pub fn positive(&self) -> impl Iterator<Item = (&Rational, usize)> {
        self.counts.iter().map(|(v, &c)| (v, c))
    }

    pub fn support_size(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn max_value(&self) -> Option<&Rational> {
        self.counts.keys().next_back()
    }

    pub fn min_positive(&self) -> Option<&Rational> {
        self.counts.keys().next()
    }

    /// A vector realizing this type: zeros first, then values ascending.
    pub fn materialize(&self) -> PseudoCodeword {
        let mut entries = vec![Rational::zero(); self.t0()];
        for (v, c) in self.positive() {
            entries.extend(std::iter::repeat_n(v.clone(), c));
        }
        PseudoCodeword { entries }
    }
}

pub fn type_of(w: &PseudoCodeword) -> TypeVector {
    TypeVector::from_counts(w.len(), w.entries().iter().map(|v| (v.clone(), 1)))
}

pub fn support(w: &PseudoCodeword) -> Vec<usize> {
    (0..w.len()).filter(|&i| !w.entries()[i].is_zero()).collect()
}

/// Every check meeting `set` meets it at least twice.
pub fn is_stopping_set(h: &ParityCheck, set: &[usize]) -> bool {
    let mut inside = vec![false; h.n_cols()];
    set.iter().for_each(|&i| inside[i] = true);
    h.rows().iter().all(|row| row.iter().filter(|&&i| inside[i]).count() != 1)
}

/// Entrywise parity of an integer-valued vector.
pub fn mod2_reduce(w: &PseudoCodeword) -> Result<Vec<bool>, ConeError> {
    w.entries()
        .iter()
        .enumerate()
        .map(|(index, x)| {
            if !x.is_integer() {
                return Err(ConeError::NonInteger { index });
            }
            Ok(x.numer() % 2u32 != BigInt::zero())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{build_plane, min_weight_codewords};
    use crate::rational::{int, rat};

    fn single_check() -> ParityCheck {
        ParityCheck::from_rows(3, vec![vec![0, 1, 2]]).unwrap()
    }

    fn pcw(v: &[i64]) -> PseudoCodeword {
        PseudoCodeword::from_integers(v.iter().copied()).unwrap()
    }

    /// Sum of two weight-4 codewords of the q = 2 plane with the remaining
    /// zero switched to 2.
    fn fano_switched() -> (ParityCheck, PseudoCodeword) {
        let h = build_plane(2).unwrap().incidence_matrix();
        let cws = min_weight_codewords(&h, 4).unwrap();
        let (a, b) = (cws[0].to_bools(), cws[1].to_bools());
        let mut v: Vec<i64> = (0..7).map(|i| a[i] as i64 + b[i] as i64).collect();
        let z = v.iter().position(|&x| x == 0).unwrap();
        v[z] = 2;
        (h, pcw(&v))
    }

    #[test]
    fn constraint_counts() {
        assert_eq!(cone_constraints(&build_plane(2).unwrap().incidence_matrix()).len(), 28);
        assert_eq!(cone_constraints(&build_plane(4).unwrap().incidence_matrix()).len(), 126);
        let cs = cone_constraints(&single_check());
        assert_eq!(cs.len(), 6);
        assert_eq!(cs.n_checks(), 3);
        assert!(cs.iter().all(|c| c.coefficients(3).iter().all(|x| (-1..=1).contains(x))));
        assert_eq!(cs.get(0).coefficients(3), vec![-1, 1, 1]);
    }

    #[test]
    fn membership() {
        let h = build_plane(2).unwrap().incidence_matrix();
        for cw in min_weight_codewords(&h, 7).unwrap() {
            let w = pcw(&cw.to_bools().iter().map(|&b| b as i64).collect::<Vec<_>>());
            assert!(is_member(&h, &w).unwrap().member);
        }
        let unit = pcw(&[0, 0, 0, 1, 0, 0, 0]);
        let m = is_member(&h, &unit).unwrap();
        assert!(!m.member);
        match m.violated_kind {
            Some(ConstraintKind::Check { pivot, .. }) => assert_eq!(pivot, 3),
            other => panic!("{other:?}"),
        }
        let (h, w) = fano_switched();
        assert!(is_member(&h, &w).unwrap().member);
        assert_eq!(is_member(&h, &pcw(&[1, 1])), Err(ConeError::LengthMismatch { expected: 7, got: 2 }));
    }

    #[test]
    fn minimality() {
        let h = build_plane(2).unwrap().incidence_matrix();
        let ones = pcw(&[1; 7]);
        assert_eq!(active_rank(&h, &ones).unwrap(), 0);
        assert!(!is_minimal(&h, &ones).unwrap());
        for cw in min_weight_codewords(&h, 4).unwrap() {
            let w = pcw(&cw.to_bools().iter().map(|&b| b as i64).collect::<Vec<_>>());
            assert_eq!(active_rank(&h, &w).unwrap(), 6);
            assert!(is_minimal(&h, &w).unwrap());
        }
        let (h, w) = fano_switched();
        assert!(is_minimal(&h, &w).unwrap());
        assert!(matches!(active_rank(&h, &pcw(&[1, 0, 0, 0, 0, 0, 0])), Err(ConeError::NotInCone { .. })));
        assert!(!is_minimal(&h, &PseudoCodeword::zero(7)).unwrap());
    }

    #[test]
    fn types() {
        let t = type_of(&PseudoCodeword::zero(7));
        assert_eq!(t.t0(), 7);
        assert_eq!(t.positive().count(), 0);
        let w = pcw(&[0, 1, 2, 1, 0, 2, 2]);
        let t = type_of(&w);
        assert_eq!((t.t0(), t.t(&int(1)), t.t(&int(2))), (2, 2, 3));
        let t2 = type_of(&w.scaled(&int(2)).unwrap());
        assert_eq!((t2.t(&int(2)), t2.t(&int(4)), t2.t(&int(1))), (2, 3, 0));
        let t3 = type_of(&w.scaled(&rat(1, 3)).unwrap());
        assert_eq!(t3.t(&rat(2, 3)), 3);
        assert_eq!(type_of(&t.materialize()), t);
    }

    #[test]
    fn stopping_sets() {
        let h = build_plane(2).unwrap().incidence_matrix();
        assert!(is_stopping_set(&h, &[]));
        for i in 0..7 {
            assert!(!is_stopping_set(&h, &[i]));
        }
        for cw in min_weight_codewords(&h, 4).unwrap() {
            assert!(is_stopping_set(&h, &cw.support()));
        }
    }

    #[test]
    fn parity_reduction() {
        let (h, w) = fano_switched();
        let x = mod2_reduce(&w).unwrap();
        assert_eq!(x.iter().filter(|&&b| b).count(), 4);
        assert!(h.is_codeword(&x));
        assert!(mod2_reduce(&pcw(&[2, 4, 0])).unwrap().iter().all(|&b| !b));
        assert_eq!(mod2_reduce(&pcw(&[1, 0, 1])).unwrap(), vec![true, false, true]);
        let half = PseudoCodeword::new(vec![rat(1, 2)]).unwrap();
        assert_eq!(mod2_reduce(&half), Err(ConeError::NonInteger { index: 0 }));
    }

    #[test]
    fn negative_entries_rejected() {
        assert_eq!(PseudoCodeword::from_integers([1, -1]), Err(ConeError::NegativeEntry { index: 1 }));
    }

    #[test]
    fn json_round_trip() {
        let w = PseudoCodeword::new(vec![rat(1, 2), int(1), int(0)]).unwrap();
        let j = w.to_json();
        assert_eq!(j.entries, vec!["1/2", "1", "0"]);
        assert_eq!(j.canonical, vec![1, 2, 0]);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"n":3,"entries":["1/2","1","0"],"canonical":[1,2,0]}"#);
        let back: PseudoCodewordJson = serde_json::from_str(&text).unwrap();
        assert_eq!(PseudoCodeword::from_json(&back).unwrap(), w);
    }
}
