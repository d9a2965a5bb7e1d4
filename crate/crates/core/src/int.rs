//! Exact integers that stay on the machine word until they overflow.
//!
//! Boundary matrices of rack complexes have entries in `{-2, ..., 2}` and the
//! elimination rarely produces anything large, but nothing guarantees that.
//! [`Int`] keeps an `i64` inline and promotes to a heap `BigInt` on overflow,
//! demoting again whenever a result fits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    // Invariant: the value does not fit in an i64.
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Int::Small(v) if *v >= 0 => Some(*v as u64),
            _ => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    /// `true` for `1` and `-1`.
    #[inline]
    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, exp: u32) -> Int {
        if let Int::Small(v) = self {
            if let Some(r) = v.checked_pow(exp) {
                return Int::Small(r);
            }
        }
        Int::from_big(num_traits::pow(self.to_big(), exp as usize))
    }

    /// Truncating division (rounds toward zero), the remainder takes the
    /// sign of `self`.
    pub fn div_rem_trunc(&self, other: &Int) -> (Int, Int) {
        assert!(!other.is_zero(), "division by zero");
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if let (Some(q), Some(r)) = (a.checked_div(*b), a.checked_rem(*b)) {
                return (Int::Small(q), Int::Small(r));
            }
        }
        let (q, r) = self.to_big().div_rem(&other.to_big());
        (Int::from_big(q), Int::from_big(r))
    }

    /// Floor division and the matching non-negative (for positive divisor)
    /// remainder.
    pub fn div_mod_floor(&self, other: &Int) -> (Int, Int) {
        assert!(!other.is_zero(), "division by zero");
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            if let (Some(q), Some(r)) = (a.checked_div_euclid(*b), a.checked_rem_euclid(*b)) {
                if *b > 0 {
                    return (Int::Small(q), Int::Small(r));
                }
            }
        }
        let (q, r) = self.to_big().div_mod_floor(&other.to_big());
        (Int::from_big(q), Int::from_big(r))
    }

    /// Exact division; panics if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Int) -> Int {
        let (q, r) = self.div_rem_trunc(other);
        assert!(r.is_zero(), "inexact division {self} / {other}");
        q
    }

    pub fn is_divisible_by(&self, other: &Int) -> bool {
        if other.is_zero() {
            return self.is_zero();
        }
        self.div_rem_trunc(other).1.is_zero()
    }

    /// Least non-negative residue modulo `m > 0`.
    pub fn rem_u64(&self, m: u64) -> u64 {
        assert!(m > 0);
        match self {
            Int::Small(v) => (*v as i128).rem_euclid(m as i128) as u64,
            Int::Big(b) => b.mod_floor(&BigInt::from(m)).to_u64().unwrap(),
        }
    }

    /// Non-negative gcd.
    pub fn gcd(&self, other: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, other) {
            let g = (*a as i128).gcd(&(*b as i128));
            if let Ok(g) = i64::try_from(g) {
                return Int::Small(g);
            }
        }
        Int::from_big(self.to_big().gcd(&other.to_big()))
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other`, `g >= 0`.
    pub fn extended_gcd(&self, other: &Int) -> (Int, Int, Int) {
        let e = self.to_big().extended_gcd(&other.to_big());
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        (Int::from_big(g), Int::from_big(s), Int::from_big(t))
    }

    /// `self - c * b`, the inner update of every elimination step.
    #[inline]
    pub fn sub_mul(&self, c: &Int, b: &Int) -> Int {
        if let (Int::Small(a), Int::Small(c), Int::Small(b)) = (self, c, b) {
            if let Some(p) = c.checked_mul(*b) {
                if let Some(r) = a.checked_sub(p) {
                    return Int::Small(r);
                }
            }
        }
        Int::from_big(self.to_big() - c.to_big() * b.to_big())
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(Box::new(BigInt::from(v))),
        }
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        Int::from(v as u64)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.strip_prefix('+').unwrap_or(s);
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        s.parse::<BigInt>().map(Int::from_big)
    }
}

/// Serialized as a JSON number when it fits an `i64`, as a decimal string
/// otherwise.
impl serde::Serialize for Int {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Int::Small(v) => s.serialize_i64(*v),
            Int::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Int {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int::Small(v))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int::from(v))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Int, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(Visitor)
    }
}

fn add_ref(a: &Int, b: &Int) -> Int {
    if let (Int::Small(x), Int::Small(y)) = (a, b) {
        if let Some(r) = x.checked_add(*y) {
            return Int::Small(r);
        }
    }
    Int::from_big(a.to_big() + b.to_big())
}

fn sub_ref(a: &Int, b: &Int) -> Int {
    if let (Int::Small(x), Int::Small(y)) = (a, b) {
        if let Some(r) = x.checked_sub(*y) {
            return Int::Small(r);
        }
    }
    Int::from_big(a.to_big() - b.to_big())
}

fn mul_ref(a: &Int, b: &Int) -> Int {
    if let (Int::Small(x), Int::Small(y)) = (a, b) {
        if let Some(r) = x.checked_mul(*y) {
            return Int::Small(r);
        }
    }
    Int::from_big(a.to_big() * b.to_big())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $f:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<&Int> for &Int {
            type Output = Int;
            fn $method(self, rhs: &Int) -> Int {
                $f(self, rhs)
            }
        }
        impl $trait<Int> for &Int {
            type Output = Int;
            fn $method(self, rhs: Int) -> Int {
                $f(self, &rhs)
            }
        }
        impl $trait<&Int> for Int {
            type Output = Int;
            fn $method(self, rhs: &Int) -> Int {
                $f(&self, rhs)
            }
        }
        impl $trait<Int> for Int {
            type Output = Int;
            fn $method(self, rhs: Int) -> Int {
                $f(&self, &rhs)
            }
        }
        impl $assign_trait<&Int> for Int {
            fn $assign_method(&mut self, rhs: &Int) {
                *self = $f(self, rhs);
            }
        }
        impl $assign_trait<Int> for Int {
            fn $assign_method(&mut self, rhs: Int) {
                *self = $f(self, &rhs);
            }
        }
    };
}

binop!(Add, add, add_ref, AddAssign, add_assign);
binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
binop!(Mul, mul, mul_ref, MulAssign, mul_assign);

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(r) => Int::Small(r),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

impl std::iter::Sum for Int {
    fn sum<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::ZERO, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Int::from(i64::MAX) + Int::ONE;
        assert!(matches!(big, Int::Big(_)));
        let back = &big - &Int::ONE;
        assert_eq!(back, Int::Small(i64::MAX));
        let sq = Int::from(1i64 << 40) * Int::from(1i64 << 40);
        assert_eq!(sq.to_string(), "1208925819614629174706176");
        assert_eq!(-Int::from(i64::MIN), Int::from_big(BigInt::from(i64::MAX) + 1));
    }

    #[test]
    fn floor_and_trunc_division() {
        let (q, r) = Int::from(-7).div_mod_floor(&Int::from(3));
        assert_eq!((q, r), (Int::from(-3), Int::from(2)));
        let (q, r) = Int::from(-7).div_rem_trunc(&Int::from(3));
        assert_eq!((q, r), (Int::from(-2), Int::from(-1)));
        assert_eq!(Int::from(-7).rem_u64(5), 3);
    }

    #[test]
    fn extended_gcd_is_bezout() {
        let (g, s, t) = Int::from(-12).extended_gcd(&Int::from(18));
        assert_eq!(g, Int::from(6));
        assert_eq!(s * Int::from(-12) + t * Int::from(18), Int::from(6));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("+5".parse::<Int>().unwrap(), Int::from(5));
        let s = "123456789012345678901234567890";
        assert_eq!(s.parse::<Int>().unwrap().to_string(), s);
    }

    proptest! {
        #[test]
        fn agrees_with_bigint(a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let (ia, ib, ic) = (Int::from(a), Int::from(b), Int::from(c));
            let (ba, bb, bc) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
            prop_assert_eq!((&ia + &ib).to_big(), &ba + &bb);
            prop_assert_eq!((&ia - &ib).to_big(), &ba - &bb);
            prop_assert_eq!((&ia * &ib).to_big(), &ba * &bb);
            prop_assert_eq!(ia.sub_mul(&ib, &ic).to_big(), &ba - &bb * &bc);
            prop_assert_eq!(ia.cmp(&ib), ba.cmp(&bb));
        }
    }
}
