//! Exact rank of small integer matrices.
//!
//! Fraction-free (Bareiss) elimination runs in `i128` with checked
//! arithmetic and restarts in `BigInt` on overflow. A modular rank is also
//! provided: over any prime it never exceeds the rational rank, which makes
//! it a one-sided certificate.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// 2^61 - 1.
const MERSENNE_61: u64 = (1 << 61) - 1;

/// Exact rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_i128(wide) {
        Some(r) => r,
        None => {
            let big = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            bareiss_big(big)
        }
    }
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        // smallest-magnitude nonzero pivot keeps intermediates small
        let Some(p) = (r..n_rows).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].unsigned_abs()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c];
        let (top, below) = m.split_at_mut(r + 1);
        let pr = &top[r];
        for row in below {
            let f = row[c];
            for (x, &y) in row[c + 1..].iter_mut().zip(&pr[c + 1..]) {
                *x = pivot.checked_mul(*x)?.checked_sub(f.checked_mul(y)?)? / prev;
            }
            row[c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).filter(|&i| !m[i][c].is_zero()).min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
        else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let (top, below) = m.split_at_mut(r + 1);
        let pr = &top[r];
        for row in below {
            let f = row[c].clone();
            for (x, y) in row[c + 1..].iter_mut().zip(&pr[c + 1..]) {
                *x = (&pivot * &*x - &f * y) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Rank over GF(2^61 - 1).
pub fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let p = MERSENNE_61;
    let to_field = |x: i64| -> u64 {
        let v = (x as i128).rem_euclid(p as i128);
        v as u64
    };
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| to_field(x)).collect()).collect();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(piv) = (r..n_rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = pow_mod(m[r][c], p - 2, p);
        let (top, below) = m.split_at_mut(r + 1);
        let pr = &top[r];
        for row in below.iter_mut().filter(|row| row[c] != 0) {
            let f = mulmod(row[c], inv);
            for (x, &y) in row[c..].iter_mut().zip(&pr[c..]) {
                *x = (*x + p - mulmod(f, y)) % p;
            }
        }
        r += 1;
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}
