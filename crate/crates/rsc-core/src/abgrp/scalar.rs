//! Scalar abstraction for the sparse elimination routines.
//!
//! The routines run over `i64` first; any overflow aborts the attempt and the
//! caller re-runs over `BigInt`, so results are always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub trait ExactInt: Clone + Eq + Ord + std::fmt::Debug + Zero + One {
    fn from_i64(v: i64) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn neg(&self) -> Self;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    /// Quotient `o / self`; caller guarantees `self != 0` and exact division.
    fn exact_div_into(&self, o: &Self) -> Self;
    /// Whether `self` divides `o` (`self != 0`).
    fn divides(&self, o: &Self) -> bool;
    /// Extended gcd: `(g, s, t)` with `s*a + t*b = g > 0`. `None` on overflow.
    fn gcd_ext(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    /// Nearest quotient: `|o - q*self| <= |self|/2`, `self != 0`. `None` on overflow.
    fn div_round(&self, o: &Self) -> Option<Self>;
}

impl ExactInt for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        i64::try_from(v).ok()
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i64::checked_add(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i64::checked_sub(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i64::checked_mul(*self, *o)
    }
    fn exact_div_into(&self, o: &Self) -> Self {
        debug_assert!(*self != 0 && o % self == 0);
        o / self
    }
    fn divides(&self, o: &Self) -> bool {
        debug_assert!(*self != 0);
        o % self == 0
    }
    fn gcd_ext(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        // Run in i128: Bezout coefficients of i64 inputs always fit back.
        let (mut r0, mut r1) = (*a as i128, *b as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 < 0 {
            r0 = -r0;
            s0 = -s0;
            t0 = -t0;
        }
        Some((
            i64::try_from(r0).ok()?,
            i64::try_from(s0).ok()?,
            i64::try_from(t0).ok()?,
        ))
    }
    fn div_round(&self, o: &Self) -> Option<Self> {
        debug_assert!(*self != 0);
        let (a, b) = (*self as i128, *o as i128);
        let mut q = b.div_euclid(a.abs());
        let r = b.rem_euclid(a.abs());
        if 2 * r > a.abs() {
            q += 1;
        }
        if a < 0 {
            q = -q;
        }
        i64::try_from(q).ok()
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn exact_div_into(&self, o: &Self) -> Self {
        debug_assert!(!Zero::is_zero(self) && Zero::is_zero(&(o % self)));
        o / self
    }
    fn divides(&self, o: &Self) -> bool {
        debug_assert!(!Zero::is_zero(self));
        Zero::is_zero(&(o % self))
    }
    fn gcd_ext(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_round(&self, o: &Self) -> Option<Self> {
        debug_assert!(!Zero::is_zero(self));
        let m = self.abs();
        let (mut q, r) = o.div_mod_floor(&m);
        if &r * 2 > m {
            q += 1;
        }
        if self.is_negative() {
            q = -q;
        }
        Some(q)
    }
}
