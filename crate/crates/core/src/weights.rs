//! Pseudo-weights (AWGNC, BSC, BEC) and lower bounds on the AWGNC
//! pseudo-weight, all in exact arithmetic.

use crate::cone::{type_of, PseudoCodeword, TypeVector};
use crate::plane::log2_q;
use crate::rational::{int, rat, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("pseudo-weight undefined for the zero vector")]
    ZeroVector,
    #[error("eta must be nonzero")]
    ZeroEta,
    #[error("m must be at least 2, got {0}")]
    BadM(u64),
    #[error("q = {0} is not a supported power of two")]
    UnsupportedQ(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Awgnc,
    Bsc,
    Bec,
}

pub fn awgnc_pw(w: &PseudoCodeword) -> Rational {
    let l2 = w.l2_norm_sq();
    if l2.is_zero() {
        return Rational::zero();
    }
    let l1 = w.l1_norm();
    &l1 * &l1 / l2
}

pub fn bec_pw(w: &PseudoCodeword) -> usize {
    w.entries().iter().filter(|x| !x.is_zero()).count()
}

/// Smallest `e` such that the `e` largest entries carry at least half the
/// mass; `2e` on an exact half, `2e - 1` otherwise.
pub fn bsc_pw(w: &PseudoCodeword) -> Result<usize, WeightError> {
    if w.is_zero() {
        return Err(WeightError::ZeroVector);
    }
    let mut sorted: Vec<&Rational> = w.entries().iter().collect();
    sorted.sort_by(|a, b| b.cmp(a));
    let total = w.l1_norm();
    let mut acc = Rational::zero();
    for (k, x) in sorted.iter().enumerate() {
        acc += *x;
        let twice = &acc * int(2);
        if twice >= total {
            let e = k + 1;
            return Ok(if twice == total { 2 * e } else { 2 * e - 1 });
        }
    }
    unreachable!("prefix sums reach the total")
}

pub fn pseudo_weight(w: &PseudoCodeword, kind: WeightKind) -> Result<Rational, WeightError> {
    Ok(match kind {
        WeightKind::Awgnc => awgnc_pw(w),
        WeightKind::Bsc => int(bsc_pw(w)? as i64),
        WeightKind::Bec => int(bec_pw(w) as i64),
    })
}

pub fn pw_from_type(t: &TypeVector, kind: WeightKind) -> Result<Rational, WeightError> {
    match kind {
        WeightKind::Awgnc => {
            let (mut l1, mut l2) = (Rational::zero(), Rational::zero());
            for (v, c) in t.positive() {
                let c = int(c as i64);
                l1 += v * &c;
                l2 += v * v * c;
            }
            Ok(if l2.is_zero() { l2 } else { &l1 * &l1 / l2 })
        }
        WeightKind::Bec => Ok(int(t.support_size() as i64)),
        WeightKind::Bsc => pseudo_weight(&t.materialize(), kind),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundName {
    Lemma1,
    Lemma2,
    Cor3,
    Cor4,
    Thm5,
    Generalized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub name: BoundName,
    pub value: Rational,
    /// Named parameters: `eta`, `r`, `m`, `m_prime`, `q`, `beta_<l>`.
    pub params: BTreeMap<String, Rational>,
    pub applicable: bool,
    pub reason: Option<String>,
    /// Set when the bound is known to hold with equality.
    pub equality: bool,
}

impl BoundReport {
    fn new(name: BoundName, value: Rational) -> Self {
        Self { name, value, params: BTreeMap::new(), applicable: true, reason: None, equality: false }
    }

    fn param(mut self, key: &str, v: Rational) -> Self {
        self.params.insert(key.into(), v);
        self
    }

    fn inapplicable(mut self, reason: String) -> Self {
        self.applicable = false;
        self.reason = Some(reason);
        self
    }
}

/// Values outside `allowed`, if any.
fn stray_value(t: &TypeVector, allowed: impl Fn(&Rational) -> bool) -> Option<Rational> {
    t.positive().map(|(v, _)| v.clone()).find(|v| !allowed(v))
}

fn is_small_int(v: &Rational, max: u64) -> bool {
    v.is_integer() && v.is_positive() && *v <= int(max as i64)
}

pub fn bound_lemma1(t: &TypeVector) -> BoundReport {
    let (t1, t2) = (int(t.t(&int(1)) as i64), int(t.t(&int(2)) as i64));
    let a = rat(15, 16) * &t1 + rat(12, 16) * &t2;
    let b = rat(3, 4) * &t1 + &t2;
    let report = BoundReport::new(BoundName::Lemma1, a.max(b));
    match stray_value(t, |v| is_small_int(v, 2)) {
        Some(v) => report.inapplicable(format!("value {v} outside {{0, 1, 2}}")),
        None => report,
    }
}

/// The `η` at which [`bound_lemma2`] is tight.
pub fn eta_star(w: &PseudoCodeword) -> Option<Rational> {
    let l1 = w.l1_norm();
    (!l1.is_zero()).then(|| w.l2_norm_sq() / l1)
}

pub fn bound_lemma2(w: &PseudoCodeword, eta: &Rational) -> Result<BoundReport, WeightError> {
    if eta.is_zero() {
        return Err(WeightError::ZeroEta);
    }
    let value = (int(2) * eta * w.l1_norm() - w.l2_norm_sq()) / (eta * eta);
    let mut report = BoundReport::new(BoundName::Lemma2, value).param("eta", eta.clone());
    report.equality = w.is_zero() || eta_star(w).as_ref() == Some(eta);
    Ok(report)
}

/// `β_ℓ = ℓ(2η - ℓ)/η²`.
pub fn beta(eta: &Rational, l: &Rational) -> Rational {
    l * (int(2) * eta - l) / (eta * eta)
}

pub fn bound_cor3(t: &TypeVector, eta: &Rational) -> Result<BoundReport, WeightError> {
    if eta.is_zero() {
        return Err(WeightError::ZeroEta);
    }
    let mut report = BoundReport::new(BoundName::Cor3, Rational::zero()).param("eta", eta.clone());
    report = report.param("beta_0", Rational::zero());
    for (v, c) in t.positive() {
        let b = beta(eta, v);
        report.value += &b * int(c as i64);
        report.params.insert(format!("beta_{}", crate::rational::to_string(v)), b);
    }
    Ok(report)
}

pub fn bound_cor4(w: &PseudoCodeword) -> Result<BoundReport, WeightError> {
    let t = type_of(w);
    let (Some(lo), Some(hi)) = (t.min_positive(), t.max_value()) else {
        return Err(WeightError::ZeroVector);
    };
    let r = hi / lo;
    let one = Rational::one();
    let coeff = int(4) * &r / ((&r + &one) * (&r + &one));
    let value = coeff * int(t.support_size() as i64);
    let mut report = BoundReport::new(BoundName::Cor4, value)
        .param("r", r.clone())
        .param("m", hi.clone())
        .param("m_prime", lo.clone());
    report.equality = r.is_one();
    Ok(report)
}

/// `4(q + 2)/3`.
pub fn bound_thm5(q: u64) -> Rational {
    rat(4 * (q as i64 + 2), 3)
}

/// Type-level preconditions for [`bound_thm5`]; the vector must also lie in
/// the cone of the PG(2, q) incidence matrix.
pub fn thm5_applicability(t: &TypeVector, q: u64) -> Result<(), String> {
    if let Some(v) = stray_value(t, |v| is_small_int(v, 2)) {
        return Err(format!("value {v} outside {{0, 1, 2}}"));
    }
    let (t1, t2) = (t.t(&int(1)), t.t(&int(2)));
    if t1 < q as usize + 2 {
        return Err(format!("t_1 = {t1} < q + 2 = {}", q + 2));
    }
    if t2 == 0 {
        return Err("t_2 = 0".into());
    }
    Ok(())
}

pub fn bound_thm5_report(t: &TypeVector, q: u64) -> BoundReport {
    let report = BoundReport::new(BoundName::Thm5, bound_thm5(q)).param("q", int(q as i64));
    match thm5_applicability(t, q) {
        Ok(()) => report,
        Err(reason) => report.inapplicable(reason),
    }
}

/// `m²(q + 2)/(m² - m + 1)`.
pub fn bound_generalized(q: u64, m: u64) -> Result<Rational, WeightError> {
    if m < 2 {
        return Err(WeightError::BadM(m));
    }
    let (m, q) = (m as i64, q as i64);
    Ok(rat(m * m * (q + 2), m * m - m + 1))
}

/// Values in `{0..m}`, `t_m > 0`, at least `q + 2` odd entries, and
/// `t_1 >= q + 2`. Without the last condition the bound fails for odd `m`:
/// three times a weight-(q+2) codeword has pseudo-weight `q + 2`.
pub fn generalized_applicability(t: &TypeVector, q: u64, m: u64) -> Result<(), String> {
    if m < 2 {
        return Err(format!("m = {m} < 2"));
    }
    if let Some(v) = stray_value(t, |v| is_small_int(v, m)) {
        return Err(format!("value {v} outside {{0, .., {m}}}"));
    }
    if t.t(&int(m as i64)) == 0 {
        return Err(format!("t_{m} = 0"));
    }
    let odd: usize = t.positive().filter(|(v, _)| v.numer() % 2u32 == 1u32.into()).map(|(_, c)| c).sum();
    if odd < q as usize + 2 {
        return Err(format!("{odd} odd entries < q + 2 = {}", q + 2));
    }
    let t1 = t.t(&int(1));
    if t1 < q as usize + 2 {
        return Err(format!("t_1 = {t1} < q + 2 = {}", q + 2));
    }
    Ok(())
}

pub fn bound_generalized_report(t: &TypeVector, q: u64, m: u64) -> Result<BoundReport, WeightError> {
    let report = BoundReport::new(BoundName::Generalized, bound_generalized(q, m)?)
        .param("q", int(q as i64))
        .param("m", int(m as i64));
    Ok(match generalized_applicability(t, q, m) {
        Ok(()) => report,
        Err(reason) => report.inapplicable(reason),
    })
}

/// Every bound at its standard parameters for a nonzero `w` in the cone of
/// PG(2, q): `Lemma2` at `η*`, `Cor3` at `η ∈ {4/3, 2}`, `Generalized`
/// at `m ∈ {2, 3}`.
pub fn all_bounds(w: &PseudoCodeword, q: u64) -> Result<Vec<BoundReport>, WeightError> {
    let t = type_of(w);
    let eta = eta_star(w).ok_or(WeightError::ZeroVector)?;
    Ok(vec![
        bound_lemma1(&t),
        bound_lemma2(w, &eta)?,
        bound_cor3(&t, &rat(4, 3))?,
        bound_cor3(&t, &int(2))?,
        bound_cor4(w)?,
        bound_thm5_report(&t, q),
        bound_generalized_report(&t, q, 2)?,
        bound_generalized_report(&t, q, 3)?,
    ])
}

/// Pseudo-weight of the conjectured minimum-weight family at `q = 2^s`:
/// `(4/3)(q+2)(1+f)/(1 + f/(3(1+f)))` with `f = s/(q+2)`.
pub fn conjectured_wp(q: u64) -> Result<Rational, WeightError> {
    let s = log2_q(q).ok_or(WeightError::UnsupportedQ(q))?;
    let a = int(q as i64 + 2);
    let f = int(s as i64) / &a;
    let one = Rational::one();
    let g = &one + &f;
    Ok(rat(4, 3) * a * &g / (&one + f / (int(3) * &g)))
}

/// Type `t_1 = q + 2`, `t_2 = q/2 + s + 1` of the conjectured family.
pub fn conjectured_type(q: u64) -> Result<TypeVector, WeightError> {
    let s = log2_q(q).ok_or(WeightError::UnsupportedQ(q))? as usize;
    let q = q as usize;
    Ok(TypeVector::from_counts(q * q + q + 1, [(int(1), q + 2), (int(2), q / 2 + s + 1)]))
}
