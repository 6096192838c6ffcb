use std::fmt;

use serde::{Deserialize, Serialize};

/// Closed integer interval `[lo, hi]`; empty when `hi < lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Interval { lo, hi }
    }

    /// `[-r, r]`.
    pub const fn centered(r: i64) -> Self {
        Interval { lo: -r, hi: r }
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.hi as i128 - self.lo as i128 + 1) as u64
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `-A = [-hi, -lo]`.
    pub fn reflect(&self) -> Self {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn shift(&self, x: i64) -> Self {
        Interval::new(self.lo + x, self.hi + x)
    }

    pub fn intersect(&self, other: &Interval) -> Self {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Smallest interval containing both (empty operands are ignored).
    pub fn hull(&self, other: &Interval) -> Self {
        match (self.is_empty(), other.is_empty()) {
            (true, _) => *other,
            (_, true) => *self,
            _ => Interval::new(self.lo.min(other.lo), self.hi.max(other.hi)),
        }
    }

    /// Minkowski sum `A + K`.
    pub fn minkowski(&self, k: &Interval) -> Self {
        if self.is_empty() || k.is_empty() {
            return Interval::new(0, -1);
        }
        Interval::new(self.lo + k.lo, self.hi + k.hi)
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
