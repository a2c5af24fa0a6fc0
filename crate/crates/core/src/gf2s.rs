//! Binary extension fields GF(2^s) with log/antilog tables, and the cubic
//! extension GF(2^{3s}) / GF(2^s) used to build Singer difference sets.
//!
//! Elements are stored as integers whose bits are the coefficients of a
//! polynomial in the primitive element `x`. Addition is XOR; multiplication
//! and inversion go through the tables.

use thiserror::Error;

/// Largest total field size handled (2^24 elements).
pub const MAX_BITS: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("polynomial {poly:#x} is not primitive of degree {s}")]
    RejectedPolynomial { s: u32, poly: u32 },
    #[error("no built-in primitive polynomial for s = {0}")]
    UnsupportedDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {value} does not belong to a field of size {q}")]
    FieldMismatch { value: u32, q: u32 },
}

/// Built-in primitive polynomials, leading term included.
pub fn builtin_polynomial(s: u32) -> Option<u32> {
    Some(match s {
        1 => 0b11,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_0011,
        8 => 0x11d,
        9 => 0x211,
        12 => 0x1053,
        15 => 0x8003,
        18 => 0x4_0081,
        21 => 0x20_0005,
        24 => 0x100_0087,
        _ => return None,
    })
}

/// An element of some [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(2^s), immutable after construction.
#[derive(Debug, Clone)]
pub struct Field {
    s: u32,
    poly: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Field {
    /// Builds GF(2^s). With `poly == None` the built-in table is used.
    pub fn new(s: u32, poly: Option<u32>) -> Result<Self, FieldError> {
        if s == 0 || s > MAX_BITS {
            return Err(FieldError::UnsupportedDegree(s));
        }
        let poly = match poly {
            Some(p) => p,
            None => builtin_polynomial(s).ok_or(FieldError::UnsupportedDegree(s))?,
        };
        let reject = FieldError::RejectedPolynomial { s, poly };
        if poly >> s != 1 {
            return Err(reject);
        }
        let q = 1u32 << s;
        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            if log[x as usize] != u32::MAX {
                // x has order k < q - 1
                return Err(reject);
            }
            log[x as usize] = k as u32;
            exp.push(x);
            x <<= 1;
            if x & q != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(reject);
        }
        log[0] = 0;
        Ok(Self { s, poly, exp, log })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        1 << self.s
    }

    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value < self.q() {
            Ok(FieldElement(value))
        } else {
            Err(FieldError::FieldMismatch { value, q: self.q() })
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The primitive element `x` (equal to 1 in GF(2)).
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.exp[1 % self.exp.len()])
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(FieldElement)
    }

    /// `generator()^k`.
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.exp[(k % self.exp.len() as u64) as usize])
    }

    /// Discrete log base `generator()`; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement(0);
        }
        let order = self.exp.len();
        let k = (self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize) % order;
        FieldElement(self.exp[k])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.exp.len();
        let k = (order - self.log[a.0 as usize] as usize) % order;
        Ok(FieldElement(self.exp[k]))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement(1);
        }
        if a.is_zero() {
            return FieldElement(0);
        }
        let order = self.exp.len() as u64;
        let e = (self.log[a.0 as usize] as u64 % order) * (k % order) % order;
        FieldElement(self.exp[e as usize])
    }

    /// Evaluates a GF(2)-coefficient polynomial (bit `i` = coefficient of `y^i`) at `a`.
    pub fn eval_binary_poly(&self, poly: u32, a: FieldElement) -> FieldElement {
        let mut acc = FieldElement(0);
        for i in (0..32 - poly.leading_zeros()).rev() {
            acc = self.mul(acc, a);
            if poly >> i & 1 == 1 {
                acc = self.add(acc, FieldElement(1));
            }
        }
        acc
    }
}

/// GF(q^3) together with a fixed embedding of GF(q), q = 2^s.
#[derive(Debug, Clone)]
pub struct CubicExtension {
    small: Field,
    big: Field,
    beta_log: u64,
    /// Indexed by big-field value; `u32::MAX` off the subfield.
    to_small: Vec<u32>,
}

impl CubicExtension {
    pub fn new(s: u32) -> Result<Self, FieldError> {
        Self::with_polynomials(s, None, None)
    }

    pub fn with_polynomials(s: u32, small_poly: Option<u32>, big_poly: Option<u32>) -> Result<Self, FieldError> {
        let small = Field::new(s, small_poly)?;
        let big = Field::new(3 * s, big_poly)?;
        let q = small.q() as u64;
        let n = q * q + q + 1;
        // The subfield is {0} ∪ {x^{kn}}; its generator must be a root of
        // the small field's polynomial, pick the one with smallest exponent.
        let beta_log = (1..q)
            .map(|k| k * n)
            .find(|&e| {
                small.exp.len() as u64 == (q - 1) / gcd(e / n, q - 1)
                    && big.eval_binary_poly(small.poly, big.exp(e)).is_zero()
            })
            .ok_or(FieldError::RejectedPolynomial { s, poly: small.poly })?;
        let mut to_small = vec![u32::MAX; big.q() as usize];
        to_small[0] = 0;
        for k in 0..small.exp.len() as u64 {
            let image = big.exp(beta_log * k);
            to_small[image.0 as usize] = small.exp(k).0;
        }
        Ok(Self { small, big, beta_log, to_small })
    }

    pub fn small(&self) -> &Field {
        &self.small
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    /// Embeds an element of GF(q) into GF(q^3).
    pub fn embed(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.small.element(a.0)?;
        Ok(match self.small.log(a) {
            None => FieldElement(0),
            Some(k) => self.big.exp(self.beta_log * k as u64),
        })
    }

    /// Relative trace `a + a^q + a^{q^2}`, expressed in GF(q).
    pub fn trace(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.big.element(a.0)?;
        let q = self.small.q() as u64;
        let t = self.big.add(a, self.big.add(self.big.pow(a, q), self.big.pow(a, q * q)));
        let v = self.to_small[t.0 as usize];
        debug_assert_ne!(v, u32::MAX, "trace left the subfield");
        Ok(FieldElement(v))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
