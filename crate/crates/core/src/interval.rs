use std::fmt;

use crate::error::{IetError, Result};
use crate::scalar::{parse_rat, Scalar};
use crate::Rat;

/// A nonempty half-open interval `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfOpenInterval<S = Rat> {
    lo: S,
    hi: S,
}

impl<S: Scalar> HalfOpenInterval<S> {
    pub fn new(lo: S, hi: S) -> Result<Self> {
        if lo >= hi {
            return Err(IetError::EmptyInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn length(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, x: &S) -> bool {
        &self.lo <= x && x < &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn translate(&self, t: &S) -> Self {
        Self {
            lo: self.lo.clone() + t.clone(),
            hi: self.hi.clone() + t.clone(),
        }
    }

    /// Intersection, `None` when empty.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        (lo < hi).then_some(Self { lo, hi })
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub(crate) fn check_member(&self, x: &S) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(IetError::OutOfDomain {
                value: x.to_string(),
                domain: self.to_string(),
            })
        }
    }

    /// Parses `lo,hi`.
    pub fn parse(text: &str) -> Result<Self> {
        let (lo, hi) = text
            .split_once(',')
            .ok_or_else(|| IetError::Parse(format!("expected \"lo,hi\", got {text:?}")))?;
        Self::new(parse_rat(lo)?, parse_rat(hi)?)
    }
}

impl<S: Scalar> fmt::Display for HalfOpenInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn iv(a: (i64, i64), b: (i64, i64)) -> HalfOpenInterval {
        HalfOpenInterval::new(ratio(a.0, a.1).unwrap(), ratio(b.0, b.1).unwrap()).unwrap()
    }

    #[test]
    fn empty_rejected() {
        let half: Rat = ratio(1, 2).unwrap();
        assert!(matches!(
            HalfOpenInterval::new(half.clone(), half),
            Err(IetError::EmptyInterval { .. })
        ));
    }

    #[test]
    fn membership_is_half_open() {
        let i = iv((0, 1), (1, 2));
        assert!(i.contains(&ratio(0, 1).unwrap()));
        assert!(!i.contains(&ratio(1, 2).unwrap()));
    }

    #[test]
    fn parse_lo_hi() {
        let i: HalfOpenInterval = HalfOpenInterval::parse("1/42,1/7").unwrap();
        assert_eq!(i, iv((1, 42), (1, 7)));
        assert!(HalfOpenInterval::<Rat>::parse("1/7,1/42").is_err());
        assert!(HalfOpenInterval::<Rat>::parse("1/7").is_err());
    }

    #[test]
    fn intersection() {
        let a = iv((0, 1), (1, 2));
        let b = iv((1, 3), (1, 1));
        assert_eq!(a.intersect(&b), Some(iv((1, 3), (1, 2))));
        assert_eq!(a.intersect(&iv((1, 2), (1, 1))), None);
    }
}
