use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with exact rational endpoints.
///
/// Endpoint arithmetic is exact, so every operation returns the tightest
/// enclosure of the image and is trivially outward-rounded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn interval_arith(a: &RationalInterval, b: &RationalInterval, op: IntervalOp) -> Result<RationalInterval> {
    Ok(match op {
        IntervalOp::Add => a + b,
        IntervalOp::Sub => a - b,
        IntervalOp::Mul => a * b,
        IntervalOp::Div => a.checked_div(b)?,
    })
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub(crate) fn from_ordered(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RationalInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    fn hull(values: [Rational; 4]) -> Self {
        let [a, b, c, d] = values;
        let lo = a.clone().min(b.clone()).min(c.clone()).min(d.clone());
        let hi = a.max(b).max(c).max(d);
        RationalInterval { lo, hi }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &RationalInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &RationalInterval) -> Option<RationalInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(RationalInterval { lo, hi })
    }

    /// Every point lies within `tol` of `x`.
    pub fn is_near(&self, x: &Rational, tol: &Rational) -> bool {
        (x - tol) <= self.lo && self.hi <= (x + tol)
    }

    pub fn overlaps(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign shared by every point, or `None` if the interval straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Every point lies in the open interval `(lo, hi)`.
    pub fn within_open(&self, lo: &Rational, hi: &Rational) -> bool {
        lo < &self.lo && &self.hi < hi
    }

    /// Every point lies outside the closed interval `[lo, hi]`.
    pub fn outside_closed(&self, lo: &Rational, hi: &Rational) -> bool {
        &self.hi < lo || hi < &self.lo
    }

    pub fn scale(&self, c: &Rational) -> RationalInterval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    pub fn shift(&self, c: &Rational) -> RationalInterval {
        RationalInterval { lo: &self.lo + c, hi: &self.hi + c }
    }

    pub fn abs(&self) -> RationalInterval {
        match self.sign() {
            Some(Ordering::Less) => -self,
            Some(_) => self.clone(),
            None => RationalInterval { lo: Rational::zero(), hi: self.lo.abs().max(self.hi.clone()) },
        }
    }

    pub fn recip(&self) -> Result<RationalInterval> {
        if self.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        Ok(RationalInterval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn checked_div(&self, other: &RationalInterval) -> Result<RationalInterval> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: u32) -> RationalInterval {
        if e == 0 {
            return RationalInterval::point(Rational::from_integer(1.into()));
        }
        let a = num_traits::Pow::pow(&self.lo, e);
        let b = num_traits::Pow::pow(&self.hi, e);
        if e % 2 == 1 || !self.lo.is_negative() {
            RationalInterval { lo: a, hi: b }
        } else if !self.hi.is_positive() {
            RationalInterval { lo: b, hi: a }
        } else {
            RationalInterval { lo: Rational::zero(), hi: a.max(b) }
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RationalInterval {
    type Output = RationalInterval;
    fn add(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &RationalInterval {
    type Output = RationalInterval;
    fn sub(self, rhs: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &RationalInterval {
    type Output = RationalInterval;
    fn mul(self, rhs: &RationalInterval) -> RationalInterval {
        if !self.lo.is_negative() && !rhs.lo.is_negative() {
            return RationalInterval { lo: &self.lo * &rhs.lo, hi: &self.hi * &rhs.hi };
        }
        RationalInterval::hull([&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi])
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval { lo: -&self.hi, hi: -&self.lo }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalInterval {
            type Output = RationalInterval;
            fn $m(self, rhs: RationalInterval) -> RationalInterval {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
