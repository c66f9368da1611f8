//! Arbitrary-precision integers with an inline `i64` fast path.
//!
//! Boundary and relation matrices are overwhelmingly `0, ±1` with rare
//! growth, so every value that fits a machine word stays in one and only
//! overflowing results are promoted to a heap-backed [`BigInt`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone)]
enum Repr {
    Small(i64),
    // never holds a value that fits in i64
    Big(Box<BigInt>),
}

#[derive(Clone)]
pub struct Int(Repr);

impl Int {
    pub const ZERO: Int = Int(Repr::Small(0));
    pub const ONE: Int = Int(Repr::Small(1));

    #[inline]
    pub const fn small(v: i64) -> Int {
        Int(Repr::Small(v))
    }

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int(Repr::Small(v)),
            None => Int(Repr::Big(Box::new(b))),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v),
            Repr::Big(b) => (**b).clone(),
        }
    }

    #[inline]
    pub fn to_i64(&self) -> Option<i64> {
        match self.0 {
            Repr::Small(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1))
    }

    /// `±1`, the units of the integers.
    #[inline]
    pub fn is_unit(&self) -> bool {
        matches!(self.0, Repr::Small(1) | Repr::Small(-1))
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(v) => v.signum() as i32,
            Repr::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Number of bits in the magnitude.
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - v.unsigned_abs().leading_zeros() as u64,
            Repr::Big(b) => b.bits(),
        }
    }

    /// Floor division and the matching non-negative remainder for a positive
    /// divisor (Euclidean for `d > 0`).
    pub fn div_rem_floor(&self, d: &Int) -> (Int, Int) {
        assert!(!d.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &d.0) {
            if !(*a == i64::MIN && *b == -1) {
                let (q, r) = a.div_mod_floor(b);
                return (Int::small(q), Int::small(r));
            }
        }
        let (q, r) = self.to_bigint().div_mod_floor(&d.to_bigint());
        (Int::from_big(q), Int::from_big(r))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Int) -> Option<Int> {
        if d.is_zero() {
            return None;
        }
        if d.is_one() {
            return Some(self.clone());
        }
        let (q, r) = self.div_rem_floor(d);
        r.is_zero().then_some(q)
    }

    /// Non-negative remainder modulo a positive `m`.
    pub fn mod_u64(&self, m: u64) -> u64 {
        match &self.0 {
            Repr::Small(v) => (*v as i128).rem_euclid(m as i128) as u64,
            Repr::Big(b) => b
                .mod_floor(&BigInt::from(m))
                .to_u64()
                .expect("remainder fits"),
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            let g = a.unsigned_abs().gcd(&b.unsigned_abs());
            if let Ok(g) = i64::try_from(g) {
                return Int::small(g);
            }
        }
        Int::from_big(self.to_bigint().gcd(&other.to_bigint()))
    }

    /// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `x a + y b = g`.
    pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
        let (mut old_r, mut r) = (a.clone(), b.clone());
        let (mut old_s, mut s) = (Int::ONE, Int::ZERO);
        let (mut old_t, mut t) = (Int::ZERO, Int::ONE);
        while !r.is_zero() {
            let (q, rem) = old_r.div_rem_floor(&r);
            old_r = std::mem::replace(&mut r, rem);
            let ns = &old_s - &(&q * &s);
            old_s = std::mem::replace(&mut s, ns);
            let nt = &old_t - &(&q * &t);
            old_t = std::mem::replace(&mut t, nt);
        }
        if old_r.is_negative() {
            (-old_r, -old_s, -old_t)
        } else {
            (old_r, old_s, old_t)
        }
    }

    pub fn pow(&self, mut e: u32) -> Int {
        let mut base = self.clone();
        let mut acc = Int::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self + f * x`, the inner step of every row operation.
    #[inline]
    pub fn mul_add(&self, f: &Int, x: &Int) -> Int {
        if let (Repr::Small(a), Repr::Small(b), Repr::Small(c)) = (&self.0, &f.0, &x.0) {
            if let Some(v) = b.checked_mul(*c).and_then(|p| a.checked_add(p)) {
                return Int::small(v);
            }
        }
        self + &(f * x)
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for Int {
            #[inline]
            fn from(v: $t) -> Int {
                match i64::try_from(v) {
                    Ok(v) => Int::small(v),
                    Err(_) => Int::from_big(BigInt::from(v)),
                }
            }
        }
    )*};
}
from_prim!(i8, i16, i32, i64, i128, isize, u8, u16, u32, u64, u128, usize);

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Int {
        Int::from_big(b)
    }
}

impl From<&Int> for BigInt {
    fn from(v: &Int) -> BigInt {
        v.to_bigint()
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Int) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl PartialEq<i64> for Int {
    fn eq(&self, other: &i64) -> bool {
        matches!(self.0, Repr::Small(v) if v == *other)
    }
}

impl Hash for Int {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(v) => {
                0u8.hash(state);
                v.hash(state)
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state)
            }
        }
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Int) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Int) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match &self.0 {
            Repr::Small(v) => match v.checked_neg() {
                Some(n) => Int::small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Repr::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Int> for &Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: &Int) -> Int {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(v) = a.$checked(*b) {
                        return Int::small(v);
                    }
                }
                Int::from_big(self.to_bigint().$m(rhs.to_bigint()))
            }
        }
        impl $tr<Int> for Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: Int) -> Int {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Int> for Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: &Int) -> Int {
                (&self).$m(rhs)
            }
        }
        impl $tr<Int> for &Int {
            type Output = Int;
            #[inline]
            fn $m(self, rhs: Int) -> Int {
                self.$m(&rhs)
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for Int {
    fn sum<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::ZERO, |a, b| a + b)
    }
}

impl Zero for Int {
    fn zero() -> Int {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Int {
        Int::ONE
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid integer literal {0:?}")]
pub struct ParseIntError(pub String);

impl FromStr for Int {
    type Err = ParseIntError;
    fn from_str(s: &str) -> Result<Int, ParseIntError> {
        let t = s.trim();
        if let Ok(v) = t.parse::<i64>() {
            return Ok(Int::small(v));
        }
        t.parse::<BigInt>()
            .map(Int::from_big)
            .map_err(|_| ParseIntError(s.to_string()))
    }
}

// small values as JSON numbers, large ones as decimal strings
impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Small(v) => s.serialize_i64(*v),
            Repr::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            N(i64),
            S(String),
        }
        match Wire::deserialize(d)? {
            Wire::N(v) => Ok(Int::small(v)),
            Wire::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Int::from(i64::MAX) + Int::ONE;
        assert!(big.to_i64().is_none());
        assert_eq!(big.to_string(), "9223372036854775808");
        let back = &big - &Int::ONE;
        assert_eq!(back.to_i64(), Some(i64::MAX));
        assert_eq!(-Int::from(i64::MIN), big);
    }

    #[test]
    fn gcd_and_ext_gcd() {
        let (g, x, y) = Int::ext_gcd(&Int::from(240), &Int::from(46));
        assert_eq!(g, Int::from(2));
        assert_eq!(&x * &Int::from(240) + &y * &Int::from(46), g);
        let (g, _, _) = Int::ext_gcd(&Int::from(-6), &Int::from(0));
        assert_eq!(g, Int::from(6));
        assert_eq!(Int::from(-12).gcd(&Int::from(18)), Int::from(6));
    }

    #[test]
    fn floor_division() {
        let (q, r) = Int::from(-7).div_rem_floor(&Int::from(3));
        assert_eq!((q, r), (Int::from(-3), Int::from(2)));
        assert_eq!(Int::from(12).div_exact(&Int::from(4)), Some(Int::from(3)));
        assert_eq!(Int::from(13).div_exact(&Int::from(4)), None);
        assert_eq!(Int::from(-5).mod_u64(3), 1);
    }

    #[test]
    fn parse_and_pow() {
        let v: Int = "-123456789012345678901234567890".parse().unwrap();
        assert!(v.is_negative());
        assert_eq!(v.to_string(), "-123456789012345678901234567890");
        assert_eq!(Int::from(3).pow(40).to_string(), "12157665459056928801");
        assert!("12x".parse::<Int>().is_err());
    }
}
