//! LP decoding of the all-zeros codeword: optimality of zero over the
//! fundamental cone, the full fundamental-polytope LP, canonical-completion
//! witnesses, and flip-pattern sweeps on the BSC.

use crate::cone::{cone_constraints, PseudoCodeword};
use crate::lp::{LinearProgram, LpStatus, Relation};
use crate::plane::ParityCheck;
use crate::rational::{int, Rational};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Limit on the number of patterns in an exhaustive sweep.
pub const MAX_EXHAUSTIVE_PATTERNS: u128 = 1_000_000;
/// Limit on the row weight for the explicit parity-polytope LP.
pub const MAX_FELDMAN_ROW_WEIGHT: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("flip set is empty")]
    EmptyFlips,
    #[error("position {0} out of range")]
    OutOfRange(usize),
    #[error("row {row} has weight {weight}, above {MAX_FELDMAN_ROW_WEIGHT}")]
    RowWeightTooLarge { row: usize, weight: usize },
    #[error("C(n, e) = {0} patterns exceeds the exhaustive limit")]
    TooManyPatterns(u128),
    #[error("LLR vector has length {got}, matrix has {expected} columns")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Channel {
    Awgnc,
    /// Entries are `±L`.
    Bsc(Rational),
    /// Erasures are 0, known positions `+1`.
    Bec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Llr {
    pub entries: Vec<Rational>,
    pub channel: Channel,
}

impl Llr {
    pub fn awgnc(entries: Vec<Rational>) -> Self {
        Self { entries, channel: Channel::Awgnc }
    }

    pub fn bec(n: usize, erasures: &[usize]) -> Result<Self, DecodeError> {
        let mut entries = vec![Rational::one(); n];
        for &i in erasures {
            *entries.get_mut(i).ok_or(DecodeError::OutOfRange(i))? = Rational::zero();
        }
        Ok(Self { entries, channel: Channel::Bec })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `-L` on `flips`, `+L` elsewhere.
pub fn llr_from_flips(n: usize, flips: &[usize], l: &Rational) -> Result<Llr, DecodeError> {
    let mut entries = vec![l.clone(); n];
    for &i in flips {
        *entries.get_mut(i).ok_or(DecodeError::OutOfRange(i))? = -l.clone();
    }
    Ok(Llr { entries, channel: Channel::Bsc(l.clone()) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeStatus {
    ZeroStrictlyOptimal,
    Tie,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Minimizer of `⟨ω, λ⟩` on the mass-one slice, when the optimum is `<= 0`.
    pub certificate: Option<PseudoCodeword>,
    pub objective: Rational,
}

fn check_len(h: &ParityCheck, llr: &Llr) -> Result<(), DecodeError> {
    if llr.len() != h.n_cols() {
        return Err(DecodeError::LengthMismatch { expected: h.n_cols(), got: llr.len() });
    }
    Ok(())
}

/// Minimizes `⟨ω, λ⟩` over the cone with `Σ ω = 1` and classifies the sign.
pub fn zero_optimal(h: &ParityCheck, llr: &Llr) -> Result<DecodeOutcome, DecodeError> {
    check_len(h, llr)?;
    let n = h.n_cols();
    let mut lp = LinearProgram::new(n);
    lp.nonnegative().minimize(llr.entries.clone());
    for c in cone_constraints(h).checks() {
        lp.constrain(c.coefficients(n).into_iter().map(int).collect(), Relation::Ge, Rational::zero());
    }
    lp.constrain(vec![Rational::one(); n], Relation::Eq, Rational::one());
    let r = lp.solve();
    assert_eq!(r.status, LpStatus::Optimal, "mass-one slice of the cone is a nonempty polytope");
    let status = if r.value.is_positive() {
        DecodeStatus::ZeroStrictlyOptimal
    } else if r.value.is_zero() {
        DecodeStatus::Tie
    } else {
        DecodeStatus::Failure
    };
    let certificate = (status != DecodeStatus::ZeroStrictlyOptimal)
        .then(|| PseudoCodeword::new(r.solution).expect("LP solution is nonnegative"));
    Ok(DecodeOutcome { status, certificate, objective: r.value })
}

/// `1` on flipped positions, `1/q` elsewhere.
pub fn canonical_completion(n: usize, flips: &[usize], q: u64) -> Result<PseudoCodeword, DecodeError> {
    if flips.is_empty() {
        return Err(DecodeError::EmptyFlips);
    }
    let mut entries = vec![Rational::new(1.into(), q.into()); n];
    for &i in flips {
        *entries.get_mut(i).ok_or(DecodeError::OutOfRange(i))? = Rational::one();
    }
    Ok(PseudoCodeword::new(entries).expect("positive entries"))
}

/// `-eL + (n - e)L/q`, the inner product of the canonical completion with
/// the flip LLR vector.
pub fn canonical_completion_objective(n: usize, e: usize, q: u64, l: &Rational) -> Rational {
    let (n, e, q) = (int(n as i64), int(e as i64), int(q as i64));
    -(&e * l) + (n - e) * l / q
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeldmanOutcome {
    pub solution: Vec<Rational>,
    pub objective: Rational,
    pub integral: bool,
}

impl FeldmanOutcome {
    /// The all-zeros word is among the LP optima.
    pub fn zero_optimal(&self) -> bool {
        self.objective.is_zero()
    }
}

/// Minimizes `⟨λ, f⟩` over the fundamental polytope, written with one
/// inequality per row and odd subset of its support.
pub fn feldman_lp_decode(h: &ParityCheck, llr: &Llr) -> Result<FeldmanOutcome, DecodeError> {
    check_len(h, llr)?;
    let n = h.n_cols();
    if let Some((row, r)) = h.rows().iter().enumerate().find(|(_, r)| r.len() > MAX_FELDMAN_ROW_WEIGHT) {
        return Err(DecodeError::RowWeightTooLarge { row, weight: r.len() });
    }
    let mut lp = LinearProgram::new(n);
    lp.minimize(llr.entries.clone());
    for i in 0..n {
        lp.bound(i, Some(Rational::zero()), Some(Rational::one()));
    }
    for row in h.rows() {
        for size in (1..=row.len()).step_by(2) {
            for s in row.iter().combinations(size) {
                let mut a = vec![Rational::zero(); n];
                row.iter().for_each(|&i| a[i] = -Rational::one());
                s.iter().for_each(|&&i| a[i] = Rational::one());
                lp.constrain(a, Relation::Le, int(size as i64 - 1));
            }
        }
    }
    let r = lp.solve();
    assert_eq!(r.status, LpStatus::Optimal, "fundamental polytope is a nonempty polytope");
    let integral = r.solution.iter().all(|x| x.is_zero() || x.is_one());
    Ok(FeldmanOutcome { solution: r.solution, objective: r.value, integral })
}

/// Outcome of erasure decoding by peeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BecOutcome {
    pub success: bool,
    /// Largest stopping set inside the erasures (empty on success).
    pub stopping_set: Vec<usize>,
}

/// Success iff the erasures contain no nonempty stopping set.
pub fn bec_decode(h: &ParityCheck, erasures: &[usize]) -> Result<BecOutcome, DecodeError> {
    let mut erased = vec![false; h.n_cols()];
    for &i in erasures {
        *erased.get_mut(i).ok_or(DecodeError::OutOfRange(i))? = true;
    }
    loop {
        let resolved = h.rows().iter().find_map(|row| {
            let mut it = row.iter().filter(|&&i| erased[i]);
            match (it.next(), it.next()) {
                (Some(&i), None) => Some(i),
                _ => None,
            }
        });
        match resolved {
            Some(i) => erased[i] = false,
            None => break,
        }
    }
    let stopping_set: Vec<usize> = (0..erased.len()).filter(|&i| erased[i]).collect();
    Ok(BecOutcome { success: stopping_set.is_empty(), stopping_set })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepStats {
    pub e: usize,
    pub patterns: usize,
    pub corrected: usize,
    pub ties: usize,
    pub failures: usize,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Flip patterns of weight `e` to sweep, in lexicographic order when exhaustive.
pub fn flip_patterns(n: usize, e: usize, mode: SweepMode) -> Result<Vec<Vec<usize>>, DecodeError> {
    match mode {
        SweepMode::Exhaustive => {
            let total = binomial(n, e);
            if total > MAX_EXHAUSTIVE_PATTERNS {
                return Err(DecodeError::TooManyPatterns(total));
            }
            Ok((0..n).combinations(e).collect())
        }
        SweepMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..count)
                .map(|_| {
                    let mut v = rand::seq::index::sample(&mut rng, n, e.min(n)).into_vec();
                    v.sort_unstable();
                    v
                })
                .collect())
        }
    }
}

/// Classifies every pattern with `zero_optimal`.
pub fn bsc_sweep(h: &ParityCheck, e: usize, l: &Rational, mode: SweepMode) -> Result<SweepStats, DecodeError> {
    let patterns = flip_patterns(h.n_cols(), e, mode)?;
    let statuses: Vec<DecodeStatus> = patterns
        .par_iter()
        .map(|f| {
            let llr = llr_from_flips(h.n_cols(), f, l)?;
            Ok(zero_optimal(h, &llr)?.status)
        })
        .collect::<Result<_, DecodeError>>()?;
    let count = |s: DecodeStatus| statuses.iter().filter(|&&x| x == s).count();
    Ok(SweepStats {
        e,
        patterns: statuses.len(),
        corrected: count(DecodeStatus::ZeroStrictlyOptimal),
        ties: count(DecodeStatus::Tie),
        failures: count(DecodeStatus::Failure),
    })
}

pub fn sweep_csv(rows: &[SweepStats]) -> String {
    let mut s = String::from("e,patterns,corrected,ties,failures\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", r.e, r.patterns, r.corrected, r.ties, r.failures));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::is_member;
    use crate::plane::build_plane;
    use crate::rational::rat;

    fn fano() -> ParityCheck {
        build_plane(2).unwrap().incidence_matrix()
    }

    #[test]
    fn llr_construction() {
        let one = int(1);
        assert!(llr_from_flips(7, &[], &one).unwrap().entries.iter().all(|x| *x == one));
        let l = llr_from_flips(7, &[0], &one).unwrap();
        assert_eq!(l.entries, [-1, 1, 1, 1, 1, 1, 1].map(int).to_vec());
        assert_eq!(
            llr_from_flips(7, &[1, 4, 5], &int(3)).unwrap().entries.iter().filter(|x| x.is_negative()).count(),
            3
        );
        assert_eq!(llr_from_flips(3, &[3], &one), Err(DecodeError::OutOfRange(3)));
    }

    #[test]
    fn zero_optimality_small_cases() {
        let h = fano();
        let clean = zero_optimal(&h, &llr_from_flips(7, &[], &int(1)).unwrap()).unwrap();
        assert_eq!(clean.status, DecodeStatus::ZeroStrictlyOptimal);
        assert_eq!(clean.objective, int(1));
        assert!(clean.certificate.is_none());
        let bad = zero_optimal(&h, &llr_from_flips(7, &[0, 1, 2], &int(1)).unwrap()).unwrap();
        assert_eq!(bad.status, DecodeStatus::Failure);
        let w = bad.certificate.unwrap();
        assert!(is_member(&h, &w).unwrap().member);
        assert!(w.dot(&llr_from_flips(7, &[0, 1, 2], &int(1)).unwrap().entries).is_negative());
    }

    #[test]
    fn canonical_completion_values() {
        let h = fano();
        let one = int(1);
        for (flips, expect) in [(vec![0], int(2)), (vec![0, 1, 2], int(-1))] {
            let w = canonical_completion(7, &flips, 2).unwrap();
            assert!(is_member(&h, &w).unwrap().member);
            let llr = llr_from_flips(7, &flips, &one).unwrap();
            assert_eq!(w.dot(&llr.entries), expect);
            assert_eq!(canonical_completion_objective(7, flips.len(), 2, &one), expect);
        }
        assert_eq!(canonical_completion_objective(21, 5, 4, &rat(1, 1)), int(-1));
        assert_eq!(canonical_completion(7, &[], 2), Err(DecodeError::EmptyFlips));
    }

    #[test]
    fn feldman_basics() {
        let h = fano();
        let clean = feldman_lp_decode(&h, &llr_from_flips(7, &[], &int(1)).unwrap()).unwrap();
        assert!(clean.integral);
        assert!(clean.solution.iter().all(Zero::is_zero));
        let bad = feldman_lp_decode(&h, &llr_from_flips(7, &[0, 1, 2], &int(1)).unwrap()).unwrap();
        assert!(bad.objective.is_negative());
        let wide = ParityCheck::from_rows(8, vec![(0..8).collect()]).unwrap();
        let llr = Llr::awgnc(vec![int(1); 8]);
        assert_eq!(feldman_lp_decode(&wide, &llr), Err(DecodeError::RowWeightTooLarge { row: 0, weight: 8 }));
    }

    #[test]
    fn erasures() {
        let h = fano();
        assert!(bec_decode(&h, &[0, 1, 2]).unwrap().success);
        let cw: Vec<usize> = (0..7).filter(|&i| ![1, 2, 4].contains(&i)).collect();
        let out = bec_decode(&h, &cw).unwrap();
        assert!(!out.success);
        assert_eq!(out.stopping_set, cw);
        assert!(crate::cone::is_stopping_set(&h, &out.stopping_set));
        let llr = Llr::bec(7, &cw).unwrap();
        assert_eq!(zero_optimal(&h, &llr).unwrap().status, DecodeStatus::Tie);
        let llr = Llr::bec(7, &[0, 1, 2]).unwrap();
        assert_eq!(zero_optimal(&h, &llr).unwrap().status, DecodeStatus::ZeroStrictlyOptimal);
    }

    #[test]
    fn sweeps() {
        let h = fano();
        let s1 = bsc_sweep(&h, 1, &int(1), SweepMode::Exhaustive).unwrap();
        assert_eq!((s1.patterns, s1.corrected), (7, 7));
        let s3 = bsc_sweep(&h, 3, &int(1), SweepMode::Exhaustive).unwrap();
        assert_eq!((s3.patterns, s3.corrected), (35, 0));
        let s = bsc_sweep(&h, 2, &int(1), SweepMode::Sampled { count: 5, seed: 1 }).unwrap();
        assert_eq!(s.patterns, 5);
        assert_eq!(binomial(73, 10), 621_324_937_376);
        assert!(matches!(flip_patterns(73, 10, SweepMode::Exhaustive), Err(DecodeError::TooManyPatterns(_))));
        assert_eq!(sweep_csv(&[s1]), "e,patterns,corrected,ties,failures\n1,7,7,0,0\n");
    }
}
