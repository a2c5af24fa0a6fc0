//! GF(2) linear algebra on parity-check matrices: rank, null space, and
//! exhaustive low-weight codeword enumeration.

use super::matrix::ParityCheck;
use thiserror::Error;

/// Largest code dimension enumerated exhaustively.
pub const MAX_ENUM_DIMENSION: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code dimension {0} exceeds the exhaustive limit {MAX_ENUM_DIMENSION}")]
    DimensionTooLarge(usize),
}

/// Packed bit row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut r = Self::zeros(len);
        support.iter().for_each(|&i| r.set(i));
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a ^= b);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
fn rref(h: &ParityCheck) -> (Vec<BitRow>, Vec<usize>) {
    let n = h.n_cols();
    let mut rows: Vec<BitRow> = h.rows().iter().map(|r| BitRow::from_support(n, r)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

pub fn gf2_rank(h: &ParityCheck) -> usize {
    rref(h).1.len()
}

/// A basis of the code `{x : Hx = 0}`, one vector per free column.
pub fn gf2_nullspace(h: &ParityCheck) -> Vec<BitRow> {
    let n = h.n_cols();
    let (rows, pivots) = rref(h);
    let mut is_pivot = vec![false; n];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitRow::zeros(n);
            v.set(f);
            for (row, &pc) in rows.iter().zip(&pivots) {
                if row.get(f) {
                    v.set(pc);
                }
            }
            v
        })
        .collect()
}

/// Every nonzero codeword of Hamming weight `<= w_max`, sorted by support.
pub fn min_weight_codewords(h: &ParityCheck, w_max: usize) -> Result<Vec<BitRow>, CodeError> {
    let basis = gf2_nullspace(h);
    let k = basis.len();
    if k > MAX_ENUM_DIMENSION {
        return Err(CodeError::DimensionTooLarge(k));
    }
    let mut found = Vec::new();
    let mut x = BitRow::zeros(h.n_cols());
    // Gray-code walk: step t flips basis vector trailing_zeros(t).
    for t in 1u64..(1u64 << k) {
        x.xor_assign(&basis[t.trailing_zeros() as usize]);
        if x.weight() <= w_max {
            found.push(x.clone());
        }
    }
    found.sort_by_key(BitRow::support);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> ParityCheck {
        let rows = (0..7).map(|j| [1, 2, 4].iter().map(|d| (d + j) % 7).collect()).collect();
        ParityCheck::from_rows(7, rows).unwrap()
    }

    #[test]
    fn fano_rank_and_basis() {
        let h = fano();
        assert_eq!(gf2_rank(&h), 4);
        let basis = gf2_nullspace(&h);
        assert_eq!(basis.len(), 3);
        for b in &basis {
            assert!(h.is_codeword(&b.to_bools()));
        }
    }

    #[test]
    fn fano_codebook_brute_force() {
        let h = fano();
        // brute force over all 2^7 words
        let mut brute: Vec<Vec<usize>> = (1u32..128)
            .map(|m| (0..7).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| {
                let mut x = vec![false; 7];
                s.iter().for_each(|&i| x[i] = true);
                h.is_codeword(&x) && s.len() <= 4
            })
            .collect();
        brute.sort();
        let got: Vec<Vec<usize>> = min_weight_codewords(&h, 4).unwrap().iter().map(BitRow::support).collect();
        assert_eq!(got, brute);
        assert_eq!(got.len(), 7);
        assert!(got.iter().all(|s| s.len() == 4));
    }

    #[test]
    fn dimension_limit() {
        let h = ParityCheck::from_rows(30, vec![]).unwrap();
        assert_eq!(min_weight_codewords(&h, 2), Err(CodeError::DimensionTooLarge(30)));
    }

    #[test]
    fn bitrow_ops() {
        let mut a = BitRow::from_support(70, &[0, 65, 69]);
        let b = BitRow::from_support(70, &[65]);
        a.xor_assign(&b);
        assert_eq!(a.support(), vec![0, 69]);
        assert_eq!(a.weight(), 2);
    }
}
