//! The projective plane PG(2, q), q = 2^s, built from a Singer difference
//! set, its circulant incidence matrix, and arc/hyperoval tooling.
//!
//! Points are labelled by their Singer exponent `0..n`, n = q² + q + 1.
//! Line `j` is the translate `D + j (mod n)` of the difference set
//! `D = { i : Tr(α^i) = 0 }`, where `Tr` is the relative trace
//! GF(q³) → GF(q) and α is the generator of GF(q³).

pub mod gf2;
pub mod matrix;

pub use gf2::{gf2_nullspace, gf2_rank, min_weight_codewords, BitRow, CodeError};
pub use matrix::{MatrixError, ParityCheck};

use crate::gf2s::{CubicExtension, FieldError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("q = {0} is not a supported power of two (2 <= q <= 256)")]
    UnsupportedQ(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plane {
    q: usize,
    difference_set: Vec<usize>,
    lines: Vec<Vec<usize>>,
    point_lines: Vec<Vec<usize>>,
}

/// Returns `s` when `q = 2^s` with `1 <= s <= 8`.
pub fn log2_q(q: u64) -> Option<u32> {
    (q.is_power_of_two() && (2..=256).contains(&q)).then(|| q.trailing_zeros())
}

/// Builds PG(2, q) from the trace-zero Singer difference set.
pub fn build_plane(q: u64) -> Result<Plane, PlaneError> {
    build_plane_with(q, None, None)
}

/// As [`build_plane`], with optional primitive-polynomial overrides for
/// GF(q) and GF(q³).
pub fn build_plane_with(q: u64, small_poly: Option<u32>, big_poly: Option<u32>) -> Result<Plane, PlaneError> {
    let s = log2_q(q).ok_or(PlaneError::UnsupportedQ(q))?;
    let ext = CubicExtension::with_polynomials(s, small_poly, big_poly)?;
    let n = (q * q + q + 1) as usize;
    let big = ext.big();
    let mut d: Vec<usize> = (0..n as u64)
        .filter(|&i| ext.trace(big.exp(i)).map(|t| t.is_zero()).unwrap_or(false))
        .map(|i| i as usize)
        .collect();
    d.sort_unstable();
    Ok(Plane::from_difference_set(q as usize, d))
}

impl Plane {
    fn from_difference_set(q: usize, difference_set: Vec<usize>) -> Self {
        let n = q * q + q + 1;
        let lines = (0..n)
            .map(|j| {
                let mut line: Vec<usize> = difference_set.iter().map(|d| (d + j) % n).collect();
                line.sort_unstable();
                line
            })
            .collect();
        Self::with_lines(q, difference_set, lines)
    }

    /// Assembles a plane from explicit lines without checking the axioms;
    /// see [`Plane::verify_axioms`].
    pub fn with_lines(q: usize, difference_set: Vec<usize>, lines: Vec<Vec<usize>>) -> Self {
        let n = q * q + q + 1;
        let mut point_lines = vec![Vec::new(); n];
        for (j, line) in lines.iter().enumerate() {
            for &p in line {
                point_lines[p].push(j);
            }
        }
        Self { q, difference_set, lines, point_lines }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn s(&self) -> u32 {
        self.q.trailing_zeros()
    }

    /// Number of points (and of lines).
    pub fn n(&self) -> usize {
        self.q * self.q + self.q + 1
    }

    pub fn difference_set(&self) -> &[usize] {
        &self.difference_set
    }

    pub fn line(&self, j: usize) -> &[usize] {
        &self.lines[j]
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            return None;
        }
        self.point_lines[a].iter().copied().find(|j| self.lines[*j].binary_search(&b).is_ok())
    }

    /// The unique point on two distinct lines.
    pub fn intersection(&self, l1: usize, l2: usize) -> Option<usize> {
        if l1 == l2 {
            return None;
        }
        self.lines[l1].iter().copied().find(|p| self.lines[l2].binary_search(p).is_ok())
    }

    /// H with `h_{ji} = 1` iff point `i` lies on line `j`.
    pub fn incidence_matrix(&self) -> ParityCheck {
        ParityCheck::from_rows(self.n(), self.lines.clone()).expect("line points are in range")
    }

    /// Exhaustively checks the four incidence axioms; the first
    /// counterexample found is reported.
    pub fn verify_axioms(&self) -> AxiomReport {
        let n = self.n();
        let k = self.q + 1;
        let mut pair_lines = vec![0u32; n * n];
        for line in &self.lines {
            for (x, &a) in line.iter().enumerate() {
                for &b in &line[x + 1..] {
                    pair_lines[a * n + b] += 1;
                    pair_lines[b * n + a] += 1;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let count = pair_lines[a * n + b] as usize;
                if count != 1 {
                    return AxiomReport::fail(AxiomViolation::PointPair { points: (a, b), lines: count });
                }
            }
        }
        let mut membership = vec![false; n * n];
        for (j, line) in self.lines.iter().enumerate() {
            line.iter().for_each(|&p| membership[j * n + p] = true);
        }
        for l1 in 0..self.lines.len() {
            for l2 in l1 + 1..self.lines.len() {
                let count = (0..n).filter(|&p| membership[l1 * n + p] && membership[l2 * n + p]).count();
                if count != 1 {
                    return AxiomReport::fail(AxiomViolation::LinePair { lines: (l1, l2), points: count });
                }
            }
        }
        if let Some(p) = (0..n).find(|&p| self.point_lines[p].len() != k) {
            return AxiomReport::fail(AxiomViolation::PointDegree { point: p, lines: self.point_lines[p].len() });
        }
        if let Some(j) = (0..self.lines.len()).find(|&j| self.lines[j].len() != k) {
            return AxiomReport::fail(AxiomViolation::LineSize { line: j, points: self.lines[j].len() });
        }
        AxiomReport { passed: true, violation: None }
    }

    /// True iff every nonzero residue mod n is a difference of two elements
    /// of the difference set in exactly one way.
    pub fn is_perfect_difference_set(&self) -> bool {
        let n = self.n();
        let mut hits = vec![0u32; n];
        for &a in &self.difference_set {
            for &b in &self.difference_set {
                if a != b {
                    hits[(a + n - b) % n] += 1;
                }
            }
        }
        self.difference_set.len() == self.q + 1 && hits[1..].iter().all(|&h| h == 1)
    }

    /// Arc test: no line meets `points` in three or more points.
    pub fn arc_check(&self, points: &[usize]) -> ArcReport {
        let mut set: Vec<usize> = points.to_vec();
        set.sort_unstable();
        set.dedup();
        let mut count = vec![0usize; self.lines.len()];
        for &p in &set {
            self.point_lines[p].iter().for_each(|&j| count[j] += 1);
        }
        let violating_line = count.iter().position(|&c| c >= 3);
        let is_arc = violating_line.is_none();
        ArcReport { is_hyperoval: is_arc && set.len() == self.q + 2, point_set: set, is_arc, violating_line }
    }

    /// Hyperovals ((q+2)-arcs) in lexicographic order of their sorted point
    /// lists, found by backtracking; at most `limit` are returned.
    pub fn hyperovals(&self, limit: Option<usize>) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut on_line = vec![0u8; self.lines.len()];
        let mut chosen = Vec::with_capacity(self.q + 2);
        self.extend_arc(0, &mut chosen, &mut on_line, &mut out, limit.unwrap_or(usize::MAX));
        out
    }

    fn extend_arc(
        &self,
        start: usize,
        chosen: &mut Vec<usize>,
        on_line: &mut [u8],
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        let target = self.q + 2;
        if chosen.len() == target {
            out.push(chosen.clone());
            return;
        }
        let n = self.n();
        if n - start < target - chosen.len() {
            return;
        }
        for p in start..n {
            if out.len() >= limit {
                return;
            }
            if self.point_lines[p].iter().any(|&j| on_line[j] >= 2) {
                continue;
            }
            self.point_lines[p].iter().for_each(|&j| on_line[j] += 1);
            chosen.push(p);
            self.extend_arc(p + 1, chosen, on_line, out, limit);
            chosen.pop();
            self.point_lines[p].iter().for_each(|&j| on_line[j] -= 1);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxiomViolation {
    /// Two distinct points lie on `lines != 1` common lines.
    PointPair {
        points: (usize, usize),
        lines: usize,
    },
    /// Two distinct lines share `points != 1` points.
    LinePair {
        lines: (usize, usize),
        points: usize,
    },
    PointDegree {
        point: usize,
        lines: usize,
    },
    LineSize {
        line: usize,
        points: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    fn fail(v: AxiomViolation) -> Self {
        Self { passed: false, violation: Some(v) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcReport {
    pub point_set: Vec<usize>,
    pub is_arc: bool,
    pub is_hyperoval: bool,
    pub violating_line: Option<usize>,
}
