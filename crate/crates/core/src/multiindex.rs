//! Compositions, multinomial coefficients and their behaviour modulo a prime.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{is_prime, mul_mod, pow_mod, FieldSpec, Scalar};

/// An exponent vector `(a_1, …, a_d)` indexing a monomial symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct Composition {
    parts: Vec<u32>,
    degree: u32,
}

impl From<Vec<u32>> for Composition {
    fn from(parts: Vec<u32>) -> Self {
        let degree = parts.iter().sum();
        Composition { parts, degree }
    }
}

impl From<Composition> for Vec<u32> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        parts.into()
    }

    /// The exponent vector of the single variable `e_i` raised to `k`.
    pub fn unit(dim: usize, i: usize, k: u32) -> Self {
        let mut parts = vec![0; dim];
        parts[i] = k;
        Composition { parts, degree: k }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.parts.len()
    }

    /// Componentwise sum; panics on a dimension mismatch.
    pub fn add(&self, other: &Composition) -> Composition {
        assert_eq!(self.dim(), other.dim());
        Composition {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// Adds `delta` to coordinate `i`, returning `None` if it would go negative.
    pub fn shifted(&self, i: usize, delta: i64) -> Option<Composition> {
        let v = self.parts[i] as i64 + delta;
        if v < 0 {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i] = v as u32;
        Some(Composition { parts, degree: (self.degree as i64 + delta) as u32 })
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

/// All `d`-part compositions of `n`, lexicographically decreasing:
/// `(n,0,…,0)` first, `(0,…,0,n)` last.
pub fn compositions(n: u32, d: usize) -> Vec<Composition> {
    fn rec(n: u32, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if d == 1 {
            prefix.push(n);
            out.push(Composition::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=n).rev() {
            prefix.push(first);
            rec(n - first, d - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        if n == 0 {
            out.push(Composition::new(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `(Σ parts)! / Π parts_i!`.
pub fn multinomial(parts: &[u64]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// The exact `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigUint, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// `v_p(n)` for a positive machine integer.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn carries_in_sum(mut x: u64, mut y: u64, p: u64) -> u64 {
    let mut carry = 0u64;
    let mut count = 0u64;
    while x > 0 || y > 0 || carry > 0 {
        let digit = x % p + y % p + carry;
        carry = u64::from(digit >= p);
        count += carry;
        x /= p;
        y /= p;
    }
    count
}

/// Number of base-`p` carries when the parts are added one after another,
/// left to right.
pub fn carry_count(parts: &[u64], p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut acc = 0u64;
    let mut carries = 0u64;
    for &part in parts {
        carries += carries_in_sum(acc, part, p);
        acc += part;
    }
    Ok(carries)
}

fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

/// The multinomial coefficient reduced mod `p`, digit by digit.
pub fn multinomial_mod_p(parts: &[u64], p: u64) -> Result<Scalar> {
    let field = FieldSpec::prime(p)?;
    if carry_count(parts, p)? > 0 {
        return Ok(field.zero());
    }
    let digit_rows: Vec<Vec<u64>> = parts.iter().map(|&a| digits(a, p)).collect();
    let width = digit_rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut acc = 1u64 % p;
    for pos in 0..width {
        let column: Vec<u64> = digit_rows.iter().map(|d| d.get(pos).copied().unwrap_or(0)).collect();
        // No carries, so the column sum is below p and its factorials are units.
        let mut sum = 0u64;
        for &k in &column {
            for i in 1..=k {
                acc = mul_mod(acc, (sum + i) % p, p);
                acc = mul_mod(acc, pow_mod(i, p - 2, p), p);
            }
            sum += k;
        }
    }
    Ok(field.from_u64(acc))
}

/// Binomial coefficient `C(a+b, a)` as a scalar of `field`.
pub(crate) fn binomial_scalar(field: FieldSpec, a: u64, b: u64) -> Scalar {
    match field.characteristic() {
        0 => field.from_biguint(&binomial(a + b, a)),
        p => multinomial_mod_p(&[a, b], p).expect("field characteristic is prime"),
    }
}

/// Whether `seq` is disjoint for `field`: every prefix sum is smaller than
/// the next term, and in characteristic `p` also smaller than `p^{v_p}` of
/// the next term. Nonpositive entries make the sequence non-disjoint.
pub fn is_f_disjoint(seq: &[u64], field: FieldSpec) -> bool {
    if seq.contains(&0) {
        return false;
    }
    let mut prefix = 0u64;
    for (i, &next) in seq.iter().enumerate() {
        if i > 0 {
            if prefix >= next {
                return false;
            }
            if let Some(p) = field.order() {
                let bound = p.checked_pow(valuation_u64(next, p)).unwrap_or(u64::MAX);
                if prefix >= bound {
                    return false;
                }
            }
        }
        prefix = match prefix.checked_add(next) {
            Some(s) => s,
            None => return false,
        };
    }
    true
}

/// A disjoint sequence of `count` terms, optionally preceded by `1`:
/// consecutive powers `p, p², …` in characteristic `p`, `2, 4, 8, …` in
/// characteristic zero.
pub fn gen_f_disjoint(count: usize, field: FieldSpec, leading_one: bool) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let base = field.order().unwrap_or(2);
    let mut out = Vec::with_capacity(count + 1);
    if leading_one {
        out.push(1);
    }
    for k in 1..=count as u32 {
        let term = base
            .checked_pow(k)
            .ok_or_else(|| Error::InvalidArgument(format!("{base}^{k} overflows")))?;
        out.push(term);
    }
    Ok(out)
}

/// Number of `d`-part compositions of `n`, i.e. `C(n+d-1, d-1)`.
pub fn composition_count(n: u32, d: usize) -> u64 {
    if d == 0 {
        return u64::from(n == 0);
    }
    binomial(n as u64 + d as u64 - 1, d as u64 - 1).to_u64().expect("count fits in u64")
}
