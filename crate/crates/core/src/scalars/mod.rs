//! Exact scalars over a prime field `F_p` or over the rationals.
//!
//! Every [`Scalar`] is kept in canonical form: residues live in `0..p`,
//! fractions are reduced with a positive denominator. Equality is therefore
//! structural and scalars can be used as map values and compared directly.
//!
//! Mixing scalars of different fields in one arithmetic operation is a
//! programming error and panics; the fallible entry points further up
//! (elements, matrices) check [`FieldSpec`] agreement and return
//! [`Error::FieldMismatch`] instead.

mod local;
mod nakayama;

pub use local::{local_mul, make_dual_numbers, truncated_poly_algebra, LocalAlgebra, LocalElem};
pub use nakayama::{
    nakayama_verify, LocalMatrix, NakayamaMode, NakayamaOutcome, NakayamaReport, NAKAYAMA_ENUMERATION_LIMIT,
};

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut k = 5u64;
    while k.saturating_mul(k) <= n {
        if n % k == 0 || n % (k + 2) == 0 {
            return false;
        }
        k += 6;
    }
    true
}

/// The base field: `characteristic == 0` means the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    characteristic: u64,
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;

    fn try_from(c: u64) -> Result<Self> {
        FieldSpec::new(c)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.characteristic
    }
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(Error::InvalidCharacteristic(characteristic))
        }
    }

    pub const fn rationals() -> Self {
        FieldSpec { characteristic: 0 }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec { characteristic: p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        self.characteristic
    }

    pub fn is_finite(self) -> bool {
        self.characteristic != 0
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(self) -> Option<u64> {
        self.is_finite().then_some(self.characteristic)
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            p => Scalar::Fp {
                p,
                v: (v as i128).rem_euclid(p as i128) as u64,
            },
        }
    }

    pub fn from_u64(self, v: u64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            p => Scalar::Fp { p, v: v % p },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self.characteristic {
            0 => Scalar::Q(BigRational::from_integer(v.clone())),
            p => {
                let r = v.mod_floor_u64(p);
                Scalar::Fp { p, v: r }
            }
        }
    }

    pub fn from_biguint(self, v: &BigUint) -> Scalar {
        match self.characteristic {
            0 => Scalar::Q(BigRational::from_integer(BigInt::from(v.clone()))),
            p => Scalar::Fp {
                p,
                v: (v % p).to_u64().expect("residue fits in u64"),
            },
        }
    }

    /// `num / den`; fails when `den` vanishes in this field.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d.inv().ok_or(Error::ZeroElement)?;
        Ok(self.from_i64(num) * inv)
    }

    /// All field elements in the order `0, 1, …, p-1`.
    pub fn elements(self) -> Result<Vec<Scalar>> {
        match self.characteristic {
            0 => Err(Error::InfiniteField),
            p => Ok((0..p).map(|v| Scalar::Fp { p, v }).collect()),
        }
    }

    /// Builds a vector from small integers.
    pub fn vector(self, coords: &[i64]) -> Vec<Scalar> {
        coords.iter().map(|&c| self.from_i64(c)).collect()
    }

    /// Parses `"7"`, `"-3"` or `"-3/4"` into this field.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let bad = || Error::InvalidArgument(format!("cannot parse scalar {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        let den = self.from_bigint(&den).inv().ok_or_else(bad)?;
        Ok(self.from_bigint(&num) * den)
    }

    pub(crate) fn check(self, other: FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.characteristic, other.characteristic))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Residue `v` modulo the prime `p`, with `v < p`.
    Fp { p: u64, v: u64 },
    /// A reduced fraction.
    Q(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Fp { p, .. } => FieldSpec { characteristic: *p },
            Scalar::Q(_) => FieldSpec::rationals(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    /// The residue for prime-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Fp { v, .. } => Some(*v),
            Scalar::Q(_) => None,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: pow_mod(*v, *p - 2, *p),
            },
            Scalar::Q(q) => Scalar::Q(q.recip()),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        match self {
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: pow_mod(*v, e, *p),
            },
            Scalar::Q(q) => {
                let mut base = q.clone();
                let mut acc = BigRational::one();
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = &base * &base;
                    }
                }
                Scalar::Q(acc)
            }
        }
    }

    /// Multiplies by a nonnegative integer.
    pub fn scale_u64(&self, k: u64) -> Scalar {
        match self {
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: mul_mod(*v, k % *p, *p),
            },
            Scalar::Q(q) => Scalar::Q(q * BigRational::from_integer(BigInt::from(k))),
        }
    }

    fn expect_same(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "arithmetic between scalars of different fields"
        );
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Q(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Q(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs);
        match (self, rhs) {
            (Scalar::Fp { p, v }, Scalar::Fp { v: w, .. }) => {
                let s = (*v as u128 + *w as u128) % *p as u128;
                Scalar::Fp { p: *p, v: s as u64 }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs);
        match (self, rhs) {
            (Scalar::Fp { p, v }, Scalar::Fp { v: w, .. }) => Scalar::Fp {
                p: *p,
                v: mul_mod(*v, *w, *p),
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { *p - *v },
            },
            Scalar::Q(q) => Scalar::Q(-q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

/// Panics on division by zero.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) if p == q => {
                *v = ((*v as u128 + *w as u128) % *p as u128) as u64;
            }
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            _ => panic!("arithmetic between scalars of different fields"),
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self += &(-rhs);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) if p == q => {
                *v = mul_mod(*v, *w, *p);
            }
            (Scalar::Q(a), Scalar::Q(b)) => *a *= b,
            _ => panic!("arithmetic between scalars of different fields"),
        }
    }
}

/// Signed integer value of a rational scalar when it is integral.
pub fn as_integer(s: &Scalar) -> Option<BigInt> {
    match s {
        Scalar::Q(q) if q.is_integer() => Some(q.to_integer()),
        _ => None,
    }
}

/// True when the rational `s` is negative. Always false over `F_p`.
pub fn is_negative(s: &Scalar) -> bool {
    matches!(s, Scalar::Q(q) if q.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fields() -> Vec<FieldSpec> {
        vec![
            FieldSpec::rationals(),
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(5).unwrap(),
            FieldSpec::prime(7919).unwrap(),
        ]
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FieldSpec::new(4), Err(Error::InvalidCharacteristic(4)));
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
        assert!(FieldSpec::new(0).is_ok());
        assert!(FieldSpec::new(101).is_ok());
    }

    #[test]
    fn canonical_forms() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.from_i64(-1), f5.from_i64(4));
        assert_eq!(f5.from_i64(12).residue(), Some(2));
        let q = FieldSpec::rationals();
        assert_eq!(q.ratio(2, -4).unwrap(), q.ratio(-1, 2).unwrap());
        assert_eq!(q.ratio(2, -4).unwrap().to_string(), "-1/2");
        assert_eq!(f5.ratio(1, 5), Err(Error::ZeroElement));
    }

    #[test]
    fn parse_round_trip() {
        let q = FieldSpec::rationals();
        let x = q.ratio(-7, 12).unwrap();
        assert_eq!(q.parse_scalar(&x.to_string()).unwrap(), x);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(f3.parse_scalar("1/2").unwrap(), f3.from_i64(2));
        assert!(f3.parse_scalar("1/3").is_err());
        assert!(q.parse_scalar("abc").is_err());
    }

    #[test]
    fn fermat_inverse() {
        let f = FieldSpec::prime(7919).unwrap();
        for v in 1..200 {
            let x = f.from_i64(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mixed_fields_panic() {
        let _ = FieldSpec::prime(2).unwrap().one() + FieldSpec::prime(3).unwrap().one();
    }

    proptest! {
        #[test]
        fn field_axioms(fi in 0usize..5, a in -50i64..50, b in -50i64..50, c in -50i64..50) {
            let f = fields()[fi];
            let (a, b, c) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a - &a, f.zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn pow_matches_repeated_product(fi in 0usize..5, a in -9i64..9, e in 0u64..12) {
            let f = fields()[fi];
            let a = f.from_i64(a);
            let mut acc = f.one();
            for _ in 0..e {
                acc = &acc * &a;
            }
            prop_assert_eq!(a.pow(e), acc);
        }
    }
}
