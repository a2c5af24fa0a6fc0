//! Exact rationals: parsing, `p/q` rendering, and canonical integer forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// Renders as `p` or `p/q`.
pub fn to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a finite decimal such as `-1.25`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(BigInt::from_str(p.trim()).ok()?, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_abs = BigInt::from_str(whole.trim_start_matches(['-', '+'])).unwrap_or_default();
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let mut numer = whole_abs * &scale + BigInt::from_str(frac).ok()?;
        if negative {
            numer = -numer;
        }
        return Some(BigRational::new(numer, scale));
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

/// Decimal rendering with `digits` significant digits, for human output.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let v = r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

/// The unique integer vector that is a positive multiple of `v` with entry
/// gcd 1 (the zero vector maps to itself).
pub fn canonical_integers(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let g = g.abs();
    ints.into_iter().map(|x| x / &g).collect()
}

/// Divides an integer vector by the gcd of its entries.
pub fn reduce_i64(v: &mut [i64]) {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse("25/4"), Some(rat(25, 4)));
        assert_eq!(parse(" -3 "), Some(int(-3)));
        assert_eq!(parse("6.25"), Some(rat(25, 4)));
        assert_eq!(parse("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
        assert_eq!(to_string(&rat(128, 13)), "128/13");
        assert_eq!(to_string(&rat(8, 2)), "4");
        assert_eq!(to_decimal(&rat(128, 13), 4), "9.846");
        assert_eq!(to_decimal(&rat(16, 3), 3), "5.33");
    }

    #[test]
    fn canonical_form() {
        let v = vec![rat(1, 2), rat(1, 3), int(0)];
        let c: Vec<i64> = canonical_integers(&v).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(c, vec![3, 2, 0]);
        let scaled: Vec<Rational> = v.iter().map(|x| x * rat(7, 5)).collect();
        assert_eq!(canonical_integers(&scaled), canonical_integers(&v));
        assert!(canonical_integers(&[int(0), int(0)]).iter().all(Zero::is_zero));
        let mut w = vec![4, 6, 0];
        reduce_i64(&mut w);
        assert_eq!(w, vec![2, 3, 0]);
    }
}
