//! Closed intervals with outward rounding.
//!
//! Stable Rust has no control over the FPU rounding mode, so every operation
//! is computed in round-to-nearest and then widened: one ulp for the
//! correctly rounded operations (`+ − × ÷ √`), and a relative `4ε` plus one
//! ulp for `ln`/`log2`, whose libm implementations are not correctly rounded.
//! The result always contains the exact image of the operands.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

/// Widening applied to results of transcendental functions.
const LIBM_SLACK: f64 = 4.0 * f64::EPSILON;

impl Interval {
    /// Panics unless `lo ≤ hi` and neither is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_subset_of(self, other: Interval) -> bool {
        other.contains_interval(self)
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Intersection, or `None` when disjoint.
    pub fn meet(self, other: Interval) -> Option<Interval> {
        Interval::try_new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Square for intervals with `lo ≥ 0` (monotone there).
    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval::new(down(self.lo * self.lo).max(0.0), up(self.hi * self.hi))
        } else {
            self * self
        }
    }

    pub fn sqrt(self) -> Interval {
        assert!(self.lo >= 0.0, "sqrt of {self:?}");
        Interval::new(down(self.lo.sqrt()).max(0.0), up(self.hi.sqrt()))
    }

    pub fn recip(self) -> Interval {
        assert!(self.lo > 0.0 || self.hi < 0.0, "reciprocal of {self:?}");
        Interval::new(down(1.0 / self.hi), up(1.0 / self.lo))
    }

    /// Natural logarithm of a positive interval; `ln 0 = −∞`.
    pub fn ln(self) -> Interval {
        assert!(self.lo >= 0.0, "ln of {self:?}");
        Interval::new(lower_transcendental(self.lo.ln()), upper_transcendental(self.hi.ln()))
    }

    pub fn log2(self) -> Interval {
        assert!(self.lo >= 0.0, "log2 of {self:?}");
        Interval::new(lower_transcendental(self.lo.log2()), upper_transcendental(self.hi.log2()))
    }

    /// Encloses `√5`.
    pub fn sqrt5() -> Interval {
        Interval::point(5.0).sqrt()
    }

    /// Encloses `ln 2`.
    pub fn ln2() -> Interval {
        Interval::point(2.0).ln()
    }
}

fn lower_transcendental(r: f64) -> f64 {
    if r.is_infinite() {
        return r;
    }
    down(r - r.abs() * LIBM_SLACK)
}

fn upper_transcendental(r: f64) -> f64 {
    if r.is_infinite() {
        return r;
    }
    up(r + r.abs() * LIBM_SLACK)
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo + rhs.lo), up(self.hi + rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo - rhs.hi), up(self.hi - rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        assert!(rhs.lo > 0.0 || rhs.hi < 0.0, "division by {rhs:?}");
        let p = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $m(self, rhs: f64) -> Interval {
                self.$m(Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                Interval::point(self).$m(rhs)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(-3.0, 0.5);
        let p = a * b;
        assert!(p.lo() <= -6.0 && p.hi() >= 1.0);
        let s = a - b;
        assert!(s.lo() <= 0.5 && s.hi() >= 5.0);
        let d = a / Interval::new(2.0, 4.0);
        assert!(d.contains(0.25) && d.contains(1.0));
    }

    #[test]
    fn tenth_is_enclosed() {
        // 0.1 + 0.2 rounds above 0.3; the enclosure still straddles it
        let x = Interval::point(0.1) + Interval::point(0.2);
        assert!(x.lo() < 0.30000000000000004 && x.hi() > 0.3);
        let third = Interval::point(1.0) / Interval::point(3.0);
        assert!(third.lo() < third.hi());
    }

    #[test]
    fn constants() {
        let s = Interval::sqrt5();
        assert!(s.contains(5f64.sqrt()) && s.width() < 1e-15);
        assert!(Interval::ln2().contains(std::f64::consts::LN_2));
        let l = Interval::point(1.0).log2();
        assert!(l.contains(0.0) && l.width() < 1e-300);
        assert_eq!(Interval::point(0.0).log2().lo(), f64::NEG_INFINITY);
    }

    #[test]
    fn sqr_is_tight_on_nonnegative() {
        let x = Interval::new(0.5, 0.75).sqr();
        assert!(x.contains(0.25) && x.contains(0.5625) && x.lo() > 0.24);
        let y = Interval::new(-1.0, 2.0).sqr();
        assert!(y.contains(0.0) && y.contains(4.0));
    }

    #[test]
    #[should_panic]
    fn inverted_bounds_panic() {
        let _ = Interval::new(1.0, 0.0);
    }
}
