//! Effectiveness of minimal pseudo-codewords.
//!
//! A ray `ω` is effective of the first kind if some admissible LLR vector
//! `λ` gives `⟨ω, λ⟩ < 0` while every other ray `ω'` has `⟨ω', λ⟩ >= 0`;
//! of the second kind if `⟨ω, λ⟩ <= 0` suffices.

use crate::lp::{LinearProgram, LpStatus, Relation};
use crate::rational::{self, int, Rational};
use crate::rays::RaySet;
use crate::weights::{bsc_pw, WeightError};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `n` for the exhaustive `{±1}^n` scan.
pub const MAX_BSC_SCAN_N: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EffectError {
    #[error("ray set is incomplete")]
    IncompleteRaySet,
    #[error("ray index {0} out of range")]
    NoSuchRay(usize),
    #[error("n = {0} is too large for the exhaustive sign scan")]
    TooLarge(usize),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EffectChannel {
    Awgnc,
    Bsc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EffectKind {
    First,
    SecondOnly,
    NotEffective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectivenessReport {
    pub ray: usize,
    pub channel: EffectChannel,
    pub kind: EffectKind,
    pub witness: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ReportJson {
    ray: usize,
    canonical: Vec<i64>,
    channel: EffectChannel,
    kind: EffectKind,
    witness: Option<Vec<String>>,
}

impl EffectivenessReport {
    pub fn to_json_line(&self, set: &RaySet) -> String {
        let j = ReportJson {
            ray: self.ray,
            canonical: set.rays[self.ray].canonical_i64(),
            channel: self.channel,
            kind: self.kind,
            witness: self.witness.as_ref().map(|w| w.iter().map(rational::to_string).collect()),
        };
        serde_json::to_string(&j).expect("serializable")
    }
}

fn require_complete(set: &RaySet) -> Result<(), EffectError> {
    if set.complete {
        Ok(())
    } else {
        Err(EffectError::IncompleteRaySet)
    }
}

fn sign_vector(n: usize, mask: u64) -> Vec<i64> {
    (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()
}

/// Classifies every ray by scanning all `λ ∈ {±1}^n` (the value of `L`
/// does not affect signs). Witnesses are the first hits in mask order,
/// bit `i` set meaning `λ_i = -1`.
pub fn bsc_effectiveness_all(set: &RaySet) -> Result<Vec<EffectivenessReport>, EffectError> {
    require_complete(set)?;
    let n = set.n;
    if n > MAX_BSC_SCAN_N {
        return Err(EffectError::TooLarge(n));
    }
    let rays: Vec<Vec<i64>> = set.rays.iter().map(|r| r.canonical_i64()).collect();
    let r = rays.len();
    // per ray: first mask witnessing first kind, second kind
    let (first, second) = (0u64..1 << n)
        .into_par_iter()
        .fold(
            || (vec![u64::MAX; r], vec![u64::MAX; r]),
            |(mut first, mut second), mask| {
                let lambda = sign_vector(n, mask);
                let vals: Vec<i64> = rays.iter().map(|w| w.iter().zip(&lambda).map(|(a, b)| a * b).sum()).collect();
                let mut neg = vals.iter().enumerate().filter(|(_, &v)| v < 0).map(|(k, _)| k);
                match (neg.next(), neg.next()) {
                    (Some(k), None) => {
                        first[k] = first[k].min(mask);
                        second[k] = second[k].min(mask);
                    }
                    (None, _) => {
                        for (k, &v) in vals.iter().enumerate() {
                            if v == 0 {
                                second[k] = second[k].min(mask);
                            }
                        }
                    }
                    _ => {}
                }
                (first, second)
            },
        )
        .reduce(
            || (vec![u64::MAX; r], vec![u64::MAX; r]),
            |(a1, a2), (b1, b2)| {
                let m = |x: Vec<u64>, y: Vec<u64>| x.into_iter().zip(y).map(|(p, q)| p.min(q)).collect();
                (m(a1, b1), m(a2, b2))
            },
        );
    Ok((0..r)
        .map(|k| {
            let (kind, mask) = if first[k] != u64::MAX {
                (EffectKind::First, Some(first[k]))
            } else if second[k] != u64::MAX {
                (EffectKind::SecondOnly, Some(second[k]))
            } else {
                (EffectKind::NotEffective, None)
            };
            EffectivenessReport {
                ray: k,
                channel: EffectChannel::Bsc,
                kind,
                witness: mask.map(|m| sign_vector(n, m).into_iter().map(int).collect()),
            }
        })
        .collect())
}

pub fn bsc_effectiveness(set: &RaySet, ray: usize) -> Result<EffectivenessReport, EffectError> {
    if ray >= set.len() {
        return Err(EffectError::NoSuchRay(ray));
    }
    Ok(bsc_effectiveness_all(set)?.swap_remove(ray))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cor8 {
    PossiblyEffective,
    ExcludedByCor8,
}

/// Second-kind BSC effectiveness at PG(2, q) needs `q + 2 <= bsc_pw <= 2q + 2`.
pub fn cor8_screen(w: &crate::cone::PseudoCodeword, q: u64) -> Result<Cor8, EffectError> {
    let b = bsc_pw(w)? as u64;
    Ok(if (q + 2..=2 * q + 2).contains(&b) { Cor8::PossiblyEffective } else { Cor8::ExcludedByCor8 })
}

/// Minimizes `⟨ω, λ⟩` over `λ ∈ [-1, 1]^n` with `⟨ω', λ⟩ >= 0` for the
/// other rays; first kind iff the optimum is negative. Otherwise `λ = 0`
/// is a second-kind witness.
pub fn awgnc_first_kind(set: &RaySet, ray: usize) -> Result<EffectivenessReport, EffectError> {
    require_complete(set)?;
    let w = set.rays.get(ray).ok_or(EffectError::NoSuchRay(ray))?;
    let n = set.n;
    let mut lp = LinearProgram::new(n);
    lp.minimize(w.entries().to_vec());
    for i in 0..n {
        lp.bound(i, Some(-Rational::one()), Some(Rational::one()));
    }
    for (k, other) in set.rays.iter().enumerate() {
        if k != ray {
            lp.constrain(other.entries().to_vec(), Relation::Ge, Rational::zero());
        }
    }
    let r = lp.solve();
    assert_eq!(r.status, LpStatus::Optimal, "box-bounded LP containing λ = 0");
    let (kind, witness) = if r.value.is_negative() {
        (EffectKind::First, r.solution)
    } else {
        (EffectKind::SecondOnly, vec![Rational::zero(); n])
    };
    Ok(EffectivenessReport { ray, channel: EffectChannel::Awgnc, kind, witness: Some(witness) })
}
