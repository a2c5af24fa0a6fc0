//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Problems are rewritten into `A x = b, x >= 0, b >= 0` (shifting bounded
//! variables, splitting free ones, adding slacks) and solved on a dense
//! tableau that keeps one artificial column per row; the final reduced
//! costs of those columns give the row duals.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpConstraint {
    pub a: Vec<Rational>,
    pub rel: Relation,
    pub b: Rational,
}

/// Minimize `c·x` subject to the constraints and per-variable bounds.
/// Variables are free unless bounded.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    n: usize,
    objective: Vec<Rational>,
    constraints: Vec<LpConstraint>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Meaningful only when optimal.
    pub value: Rational,
    pub solution: Vec<Rational>,
    /// Constraints met with equality at the solution.
    pub tight: Vec<usize>,
    /// One multiplier per constraint: `c = Σ y_k a_k + (bound multipliers)`,
    /// with `y_k >= 0` for `≥` rows and `y_k <= 0` for `≤` rows.
    pub duals: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            objective: vec![Rational::zero(); n],
            constraints: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[LpConstraint] {
        &self.constraints
    }

    pub fn minimize(&mut self, c: Vec<Rational>) -> &mut Self {
        assert_eq!(c.len(), self.n, "objective length");
        self.objective = c;
        self
    }

    pub fn constrain(&mut self, a: Vec<Rational>, rel: Relation, b: Rational) -> &mut Self {
        assert_eq!(a.len(), self.n, "constraint length");
        self.constraints.push(LpConstraint { a, rel, b });
        self
    }

    pub fn bound(&mut self, i: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.lower[i] = lower;
        self.upper[i] = upper;
        self
    }

    pub fn nonnegative(&mut self) -> &mut Self {
        for i in 0..self.n {
            self.lower[i] = Some(Rational::zero());
        }
        self
    }

    pub fn solve(&self) -> LpResult {
        lp_solve(self)
    }
}

/// How an original variable is expressed in standard-form columns.
enum VarMap {
    Shift { col: usize, offset: Rational },
    Flip { col: usize, offset: Rational },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            self.rows[r].iter_mut().for_each(|x| *x /= &p);
            self.rhs[r] /= &p;
        }
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (dj, t) in d.iter_mut().zip(row) {
                if !t.is_zero() {
                    *dj -= cb * t;
                }
            }
        }
        d
    }

    /// Bland's rule over columns `< allowed`; `Err(())` when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Result<(), ()> {
        loop {
            let d = self.reduced_costs(cost);
            let Some(enter) = (0..allowed).find(|&j| d[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(());
            };
            self.pivot(r, enter);
        }
    }
}

pub fn lp_solve(p: &LinearProgram) -> LpResult {
    // standard-form columns for the original variables
    let mut maps = Vec::with_capacity(p.n);
    let mut n_cols = 0;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for i in 0..p.n {
        let m = match (&p.lower[i], &p.upper[i]) {
            (Some(l), u) => {
                if let Some(u) = u {
                    bound_rows.push((n_cols, u - l));
                }
                VarMap::Shift { col: n_cols, offset: l.clone() }
            }
            (None, Some(u)) => VarMap::Flip { col: n_cols, offset: u.clone() },
            (None, None) => {
                n_cols += 1;
                VarMap::Split { pos: n_cols - 1, neg: n_cols }
            }
        };
        n_cols += 1;
        maps.push(m);
    }
    let n_struct = n_cols;

    // rows: user constraints, then upper-bound rows (col ≤ u - l)
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &p.constraints {
        let mut a = vec![Rational::zero(); n_struct];
        let mut b = c.b.clone();
        for (i, coef) in c.a.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            match &maps[i] {
                VarMap::Shift { col, offset } => {
                    a[*col] += coef;
                    b -= coef * offset;
                }
                VarMap::Flip { col, offset } => {
                    a[*col] -= coef;
                    b -= coef * offset;
                }
                VarMap::Split { pos, neg } => {
                    a[*pos] += coef;
                    a[*neg] -= coef;
                }
            }
        }
        rows.push((a, c.rel, b));
    }
    for (col, width) in &bound_rows {
        let mut a = vec![Rational::zero(); n_struct];
        a[*col] = Rational::one();
        rows.push((a, Relation::Le, width.clone()));
    }

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let m = rows.len();
    let n_real = n_struct + n_slack;
    let width = n_real + m;
    let mut sign = Vec::with_capacity(m);
    let mut t = Tableau { rows: Vec::with_capacity(m), rhs: Vec::with_capacity(m), basis: Vec::with_capacity(m) };
    let mut slack = n_struct;
    for (i, (a, rel, b)) in rows.into_iter().enumerate() {
        let mut row = a;
        row.resize(width, Rational::zero());
        match rel {
            Relation::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        let mut b = b;
        let s = if b.is_negative() { -1 } else { 1 };
        if s < 0 {
            row.iter_mut().for_each(|x| *x = -x.clone());
            b = -b;
        }
        row[n_real + i] = Rational::one();
        sign.push(s);
        t.rows.push(row);
        t.rhs.push(b);
        t.basis.push(n_real + i);
    }

    // phase 1
    let mut cost1 = vec![Rational::zero(); width];
    cost1[n_real..].iter_mut().for_each(|c| *c = Rational::one());
    t.optimize(&cost1, width).expect("phase one is bounded");
    let infeasibility: Rational = (0..m).filter(|&i| t.basis[i] >= n_real).map(|i| t.rhs[i].clone()).sum();
    let n_user = p.constraints.len();
    if infeasibility.is_positive() {
        return LpResult {
            status: LpStatus::Infeasible,
            value: Rational::zero(),
            solution: vec![],
            tight: vec![],
            duals: vec![],
        };
    }
    for r in 0..m {
        if t.basis[r] >= n_real {
            if let Some(c) = (0..n_real).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    // phase 2
    let mut cost2 = vec![Rational::zero(); width];
    for (i, map) in maps.iter().enumerate() {
        let c = &p.objective[i];
        match map {
            VarMap::Shift { col, .. } => cost2[*col] = c.clone(),
            VarMap::Flip { col, .. } => cost2[*col] = -c.clone(),
            VarMap::Split { pos, neg } => {
                cost2[*pos] = c.clone();
                cost2[*neg] = -c.clone();
            }
        }
    }
    if t.optimize(&cost2, n_real).is_err() {
        return LpResult {
            status: LpStatus::Unbounded,
            value: Rational::zero(),
            solution: vec![],
            tight: vec![],
            duals: vec![],
        };
    }

    let mut col_value = vec![Rational::zero(); width];
    for (i, &b) in t.basis.iter().enumerate() {
        col_value[b] = t.rhs[i].clone();
    }
    let solution: Vec<Rational> = maps
        .iter()
        .map(|m| match m {
            VarMap::Shift { col, offset } => offset + &col_value[*col],
            VarMap::Flip { col, offset } => offset - &col_value[*col],
            VarMap::Split { pos, neg } => &col_value[*pos] - &col_value[*neg],
        })
        .collect();
    let value: Rational = p.objective.iter().zip(&solution).map(|(c, x)| c * x).sum();
    let tight = p
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.a.iter().zip(&solution).map(|(a, x)| a * x).sum::<Rational>() == c.b)
        .map(|(k, _)| k)
        .collect();
    let d = t.reduced_costs(&cost2);
    let duals = (0..n_user)
        .map(|k| {
            let y = -d[n_real + k].clone();
            if sign[k] < 0 {
                -y
            } else {
                y
            }
        })
        .collect();
    LpResult { status: LpStatus::Optimal, value, solution, tight, duals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn trivial_cases() {
        let mut p = LinearProgram::new(1);
        p.minimize(vec![int(1)]).constrain(vec![int(1)], Relation::Ge, int(3));
        let r = p.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, int(3));
        assert_eq!(r.tight, vec![0]);
        assert_eq!(r.duals, vec![int(1)]);

        let mut p = LinearProgram::new(1);
        p.minimize(vec![int(-1)]).constrain(vec![int(1)], Relation::Ge, int(0));
        assert_eq!(p.solve().status, LpStatus::Unbounded);

        let mut p = LinearProgram::new(1);
        p.constrain(vec![int(1)], Relation::Ge, int(1)).constrain(vec![int(1)], Relation::Le, int(0));
        assert_eq!(p.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn bounds_and_equalities() {
        // min -x - y, x + 2y = 4, x in [-1, 2], y <= 5
        let mut p = LinearProgram::new(2);
        p.minimize(vec![int(-1), int(-1)])
            .constrain(vec![int(1), int(2)], Relation::Eq, int(4))
            .bound(0, Some(int(-1)), Some(int(2)))
            .bound(1, None, Some(int(5)));
        let r = p.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.solution, vec![int(2), int(1)]);
        assert_eq!(r.value, int(-3));

        let mut p = LinearProgram::new(2);
        p.minimize(vec![int(1), int(1)]).constrain(vec![int(1), int(1)], Relation::Ge, rat(1, 2)).constrain(
            vec![int(1), int(-1)],
            Relation::Eq,
            int(0),
        );
        let r = p.solve();
        assert_eq!(r.solution, vec![rat(1, 4), rat(1, 4)]);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook rule; Bland terminates.
        let mut p = LinearProgram::new(4);
        p.nonnegative()
            .minimize(vec![rat(-3, 4), int(150), rat(-1, 50), int(6)])
            .constrain(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], Relation::Le, int(0))
            .constrain(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], Relation::Le, int(0))
            .constrain(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
        let r = p.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, rat(-1, 20));
    }

    #[test]
    fn deterministic() {
        let mut p = LinearProgram::new(3);
        p.nonnegative()
            .minimize(vec![int(1), int(1), int(1)])
            .constrain(vec![int(1), int(1), int(0)], Relation::Ge, int(1))
            .constrain(vec![int(0), int(1), int(1)], Relation::Ge, int(1));
        assert_eq!(p.solve(), p.solve());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        /// min c·x, A x >= b, x >= 0 with c >= 0 (bounded): the duals form a
        /// feasible dual certificate with equal objective.
        #[test]
        fn strong_duality(
            a in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..5),
            b in proptest::collection::vec(-3i64..=3, 5),
            c in proptest::collection::vec(0i64..=4, 3),
        ) {
            let mut p = LinearProgram::new(3);
            p.nonnegative().minimize(c.iter().map(|&x| int(x)).collect());
            for (row, &bk) in a.iter().zip(&b) {
                p.constrain(row.iter().map(|&x| int(x)).collect(), Relation::Ge, int(bk));
            }
            let r = p.solve();
            prop_assume!(r.status == LpStatus::Optimal);
            for con in p.constraints() {
                let lhs: Rational = con.a.iter().zip(&r.solution).map(|(x, y)| x * y).sum();
                prop_assert!(lhs >= con.b);
            }
            prop_assert!(r.solution.iter().all(|x| !x.is_negative()));
            prop_assert!(r.duals.iter().all(|y| !y.is_negative()));
            for j in 0..3 {
                let aty: Rational = a.iter().zip(&r.duals).map(|(row, y)| int(row[j]) * y).sum();
                prop_assert!(aty <= int(c[j]));
            }
            let by: Rational = b.iter().zip(&r.duals).map(|(&bk, y)| int(bk) * y).sum();
            prop_assert_eq!(by, r.value);
        }
    }
}
