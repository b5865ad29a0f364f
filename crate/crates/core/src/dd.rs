//! Double-double arithmetic: an unevaluated sum `hi + lo` of two binary64
//! values with `|lo| ≤ ulp(hi)/2`, giving roughly 32 significant decimal
//! digits.
//!
//! Used for the compensated running sums of the prime engine and for the
//! high-precision re-evaluation of criterion values near zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

// requires |a| >= |b|
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    /// Builds a normalised pair from two arbitrary components.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    /// Exact for every `u64`.
    pub fn from_u64(x: u64) -> Self {
        let hi = x as f64;
        // hi is x rounded; the remainder is exact in i128 and fits f64 exactly
        let rem = x as i128 - hi as i128;
        DoubleDouble::new(hi, rem as f64)
    }

    /// Exact for values below 2^106, correctly rounded to ~106 bits above.
    pub fn from_u128(x: u128) -> Self {
        let hi = x as f64;
        let rem = x as i128 - hi as i128;
        DoubleDouble::new(hi, rem as f64)
    }

    /// Parses a plain decimal literal such as `"0.5772156649015328606"`.
    /// Digits beyond ~34 significant places are accepted but only affect
    /// the result through rounding.
    pub fn from_decimal(s: &str) -> Option<Self> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let mut acc = DoubleDouble::ZERO;
        let mut scale = 0i32;
        for (pos, c) in int_part.chars().chain(frac_part.chars()).enumerate() {
            let d = c.to_digit(10)?;
            acc = acc * 10.0 + DoubleDouble::from_f64(d as f64);
            if pos >= int_part.len() {
                scale += 1;
            }
        }
        let mut pow = DoubleDouble::ONE;
        for _ in 0..scale {
            pow = pow * 10.0;
        }
        let v = acc / pow;
        Some(if neg { -v } else { v })
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    /// Multiplies by `2^k` exactly (barring over/underflow).
    pub fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        DoubleDouble {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn square(self) -> Self {
        self * self
    }

    /// Natural exponential, relative error around 1e-31 for |x| < 700.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleDouble::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self - LN2 * k;
        // shrink the argument so the series converges in a handful of terms
        const HALVINGS: i32 = 10;
        let r = r.ldexp(-HALVINGS);

        // s = expm1(r) by Taylor series
        let mut s = r;
        let mut term = r;
        for i in 2..=20 {
            term = term * r / (i as f64);
            s += term;
            if term.hi.abs() <= 1e-34 * s.hi.abs() {
                break;
            }
        }
        // expm1(2r) = 2 expm1(r) + expm1(r)^2 keeps the small quantity intact
        for _ in 0..HALVINGS {
            s = s * 2.0 + s.square();
        }
        (s + DoubleDouble::ONE).ldexp(k as i32)
    }

    /// Natural logarithm by Newton refinement of the binary64 estimate.
    /// Returns NaN for non-positive input.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(f64::NAN);
        }
        let mut y = DoubleDouble::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - DoubleDouble::ONE;
        }
        y
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum_ordering()
    }

    fn signum_ordering(self) -> Ordering {
        if self.is_sign_negative() {
            Ordering::Less
        } else if self.hi == 0.0 && self.lo == 0.0 {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DoubleDouble { hi, lo }
    }
}

impl Add<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        DoubleDouble { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl AddAssign<f64> for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, rhs: f64) {
        *self = *self + rhs;
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        DoubleDouble { hi: q1, lo: q2 } + q3
    }
}

impl Div<f64> for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self / DoubleDouble::from_f64(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_u64_is_exact() {
        for x in [u64::MAX, (1 << 53) + 1, 123_456_789_012_345_678] {
            let d = DoubleDouble::from_u64(x);
            assert_eq!(d.hi as i128 + d.lo as i128, x as i128);
        }
    }

    #[test]
    fn decimal_parse_recovers_binary64_value() {
        let d = DoubleDouble::from_decimal("0.1").unwrap();
        assert_eq!(d.hi, 0.1);
        // 0.1 - fl(0.1) ≈ -5.551115123125783e-18
        assert!((d.lo + 5.551_115_123_125_783e-18).abs() < 1e-33);
        assert_eq!(DoubleDouble::from_decimal("-2.5").unwrap().hi, -2.5);
        assert!(DoubleDouble::from_decimal("1.2x").is_none());
        assert!(DoubleDouble::from_decimal(".").is_none());
    }

    #[test]
    fn ln_inverts_exp() {
        for x in [1e-3, 0.5, 1.0, 2.0, 10.0, 1234.5, 1e10] {
            let d = DoubleDouble::from_f64(x);
            let back = d.ln().exp();
            let rel = ((back - d) / d).to_f64().abs();
            assert!(rel < 1e-30, "x={x} rel={rel:e}");
        }
    }

    #[test]
    fn ln2_constant_matches_series() {
        let two = DoubleDouble::from_f64(2.0);
        let diff = (two.ln() - LN2).to_f64().abs();
        assert!(diff < 1e-31, "{diff:e}");
    }

    #[test]
    fn division_round_trips() {
        let a = DoubleDouble::from_u128(19344);
        let b = DoubleDouble::from_u64(5040);
        let q = a / b;
        let back = q * b;
        assert!((back - a).to_f64().abs() < 1e-27);
    }

    #[test]
    fn ordering_uses_both_components() {
        let a = DoubleDouble::new(1.0, 1e-20);
        let b = DoubleDouble::new(1.0, -1e-20);
        assert_eq!(a.total_cmp(&b), Ordering::Greater);
        assert_eq!(b.total_cmp(&a), Ordering::Less);
        assert_eq!(a.total_cmp(&a), Ordering::Equal);
    }
}
