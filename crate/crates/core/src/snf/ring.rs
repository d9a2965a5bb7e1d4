use std::fmt::Debug;

use crate::int::Int;

/// Coefficient ring for sparse unit-pivot elimination.
pub trait PivotRing: Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn from_int(&self, a: &Int) -> Self::E;

    fn is_zero(&self, a: &Self::E) -> bool;

    fn is_unit(&self, a: &Self::E) -> bool;

    /// `a - c * b`
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E;

    /// The `c` with `a = c * u`, for a unit `u`.
    fn div_unit(&self, a: &Self::E, u: &Self::E) -> Self::E;

    fn neg(&self, a: &Self::E) -> Self::E;

    /// Tie-break weight when several unit pivots are equally sparse.
    fn weight(&self, _a: &Self::E) -> u32 {
        0
    }
}

/// The integers; the units are `±1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl PivotRing for Integers {
    type E = Int;

    fn from_int(&self, a: &Int) -> Int {
        a.clone()
    }

    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }

    fn is_unit(&self, a: &Int) -> bool {
        a.is_unit()
    }

    #[inline]
    fn sub_mul(&self, a: &Int, c: &Int, b: &Int) -> Int {
        a.sub_mul(c, b)
    }

    fn div_unit(&self, a: &Int, u: &Int) -> Int {
        if u.is_negative() {
            -a
        } else {
            a.clone()
        }
    }

    fn neg(&self, a: &Int) -> Int {
        -a
    }

    fn weight(&self, a: &Int) -> u32 {
        u32::from(!matches!(a, Int::Small(_)))
    }
}

/// `Z/p^e` for a prime `p`; `e = 1` is the field `F_p`.
#[derive(Clone, Copy, Debug)]
pub struct PrimePower {
    p: u64,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Self {
        let q = p.checked_pow(e).expect("p^e overflows u64");
        assert!(q <= u32::MAX as u64, "p^e must fit 32 bits");
        PrimePower { p, q }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn inverse(&self, a: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        debug_assert_eq!(r0, 1, "{a} is not a unit mod {}", self.q);
        t0.rem_euclid(self.q as i64) as u64
    }

    /// Largest `v` with `p^v | a`, capped at the exponent for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.q.ilog(self.p);
        }
        let mut v = 0;
        let mut a = a;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }
}

impl PivotRing for PrimePower {
    type E = u64;

    fn from_int(&self, a: &Int) -> u64 {
        a.rem_u64(self.q)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn is_unit(&self, a: &u64) -> bool {
        a % self.p != 0
    }

    #[inline]
    fn sub_mul(&self, a: &u64, c: &u64, b: &u64) -> u64 {
        let prod = c * b % self.q;
        (a + self.q - prod) % self.q
    }

    fn div_unit(&self, a: &u64, u: &u64) -> u64 {
        a * self.inverse(*u) % self.q
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.q - a) % self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverse_and_valuation() {
        let r = PrimePower::new(3, 2);
        for a in 1..9u64 {
            if a % 3 != 0 {
                assert_eq!(a * r.inverse(a) % 9, 1);
            }
        }
        assert_eq!(r.valuation(3), 1);
        assert_eq!(r.valuation(0), 2);
        assert_eq!(r.sub_mul(&1, &2, &5), (1 + 81 - 10) % 9);
    }
}
