//! Exact scalar abstraction.
//!
//! Every algorithm in this crate is written against [`Scalar`], an exact
//! ordered field with access to the integer numerator and denominator of each
//! value. Any `num_rational::Ratio<T>` over a signed integer type qualifies;
//! the crate root exports aliases for the common choices. Floating point types
//! deliberately do not implement the trait: floors, equality tests and
//! measure sums must be exact.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{IetError, Result};

pub trait Scalar:
    Clone + Debug + Display + Ord + Hash + Send + Sync + 'static + Num + Signed
{
    /// Numerator in lowest terms (sign carried here).
    fn numer_big(&self) -> BigInt;

    /// Denominator in lowest terms, always positive.
    fn denom_big(&self) -> BigInt;

    /// `n / d`, or `None` when `d` is zero or the value does not fit.
    fn from_ratio(n: &BigInt, d: &BigInt) -> Option<Self>;

    fn from_bigint(n: &BigInt) -> Option<Self> {
        Self::from_ratio(n, &BigInt::one())
    }

    /// Greatest integer `<= self`.
    fn floor_big(&self) -> BigInt {
        self.numer_big().div_floor(&self.denom_big())
    }

    /// Nearest `f64`, for drawing only.
    fn to_f64_lossy(&self) -> f64 {
        Ratio::new(self.numer_big(), self.denom_big())
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
        + Into<BigInt>
        + TryFrom<BigInt>,
{
    fn numer_big(&self) -> BigInt {
        self.numer().clone().into()
    }

    fn denom_big(&self) -> BigInt {
        self.denom().clone().into()
    }

    fn from_ratio(n: &BigInt, d: &BigInt) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        // reduce in big integers first so that representable values never
        // overflow on the way in
        let g = n.gcd(d);
        let (mut n, mut d) = (n / &g, d / &g);
        if d.sign() == Sign::Minus {
            n = -n;
            d = -d;
        }
        let n = T::try_from(n).ok()?;
        let d = T::try_from(d).ok()?;
        Some(Ratio::new_raw(n, d))
    }
}

/// Converts an unsigned big integer into the scalar type.
pub fn from_biguint<S: Scalar>(n: &BigUint) -> Result<S> {
    S::from_bigint(&BigInt::from(n.clone())).ok_or_else(|| IetError::Unrepresentable(n.to_string()))
}

pub fn from_int<S: Scalar>(n: i64) -> Result<S> {
    S::from_bigint(&BigInt::from(n)).ok_or_else(|| IetError::Unrepresentable(n.to_string()))
}

/// `n / d` for machine integers.
pub fn ratio<S: Scalar>(n: i64, d: i64) -> Result<S> {
    S::from_ratio(&BigInt::from(n), &BigInt::from(d))
        .ok_or_else(|| IetError::Unrepresentable(format!("{n}/{d}")))
}

/// `1 / n` for a positive big integer.
pub fn recip_big<S: Scalar>(n: &BigUint) -> Result<S> {
    S::from_ratio(&BigInt::one(), &BigInt::from(n.clone()))
        .ok_or_else(|| IetError::Unrepresentable(format!("1/{n}")))
}

/// Parses the canonical text form `p/q` or `p` (ASCII, optional leading `-`,
/// no whitespace, positive denominator).
pub fn parse_rat<S: Scalar>(text: &str) -> Result<S> {
    let bad = || IetError::Parse(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        None => BigInt::one(),
        Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
            d.parse().map_err(|_| bad())?
        }
        Some(_) => return Err(bad()),
    };
    if d.is_zero() {
        return Err(IetError::Parse(format!("zero denominator in {text:?}")));
    }
    S::from_ratio(&n, &d).ok_or_else(|| IetError::Unrepresentable(text.to_string()))
}

/// Canonical text form; `Ratio`'s `Display` already prints `p/q` or `p`.
pub fn format_rat<S: Scalar>(x: &S) -> String {
    x.to_string()
}

pub(crate) fn biguint_of(n: &BigInt) -> Option<BigUint> {
    n.to_biguint()
}

pub(crate) fn half<S: Scalar>() -> S {
    S::one() / (S::one() + S::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rat, Rat128, Rat64};

    #[test]
    fn parse_and_print_canonical() {
        let x: Rat = parse_rat("6/4").unwrap();
        assert_eq!(format_rat(&x), "3/2");
        let y: Rat = parse_rat("-7").unwrap();
        assert_eq!(format_rat(&y), "-7");
        let z: Rat = parse_rat("0/5").unwrap();
        assert_eq!(format_rat(&z), "0");
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in [
            "", " 1/2", "1/2 ", "1/", "/2", "1/0", "a/b", "1.5", "1/-2", "+1",
        ] {
            assert!(parse_rat::<Rat>(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn fixed_width_overflow_is_reported() {
        let big = "1/100000000000000000000000";
        assert!(matches!(
            parse_rat::<Rat64>(big),
            Err(IetError::Unrepresentable(_))
        ));
        assert!(parse_rat::<Rat128>(big).is_ok());
    }

    #[test]
    fn floor_of_negative() {
        let x: Rat = parse_rat("-5/2").unwrap();
        assert_eq!(x.floor_big(), BigInt::from(-3));
        let y: Rat64 = parse_rat("7/3").unwrap();
        assert_eq!(y.floor_big(), BigInt::from(2));
    }

    #[test]
    fn from_ratio_normalizes_sign() {
        let x: Rat64 = Rat64::from_ratio(&BigInt::from(2), &BigInt::from(-4)).unwrap();
        assert_eq!(format_rat(&x), "-1/2");
    }
}
