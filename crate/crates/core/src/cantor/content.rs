//! Upper bounds on the Hausdorff content of the level-`k` cover.
//!
//! The `2^k` intervals of level `k` each have length `l_k`, so covering by
//! balls of radius `l_k / 2` bounds the `d`-dimensional content by
//! `2^k (l_k/2)^d`. For integer `d` this is an exact rational. Otherwise the
//! bound is returned as a rational upper bound on its base-2 logarithm,
//! computed from bit lengths so that rounding only ever goes up.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::spec::CantorSpec;
use crate::error::{IetError, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContentBound<S> {
    Exact(S),
    /// `log2(2^k (l_k/2)^d) <= log2_upper`.
    Log2Upper(S),
}

fn bits(n: &BigInt) -> i64 {
    n.bits() as i64
}

/// `floor(log2(p/q))` is at least `bits(p) - 1 - bits(q)`.
fn log2_lower<S: Scalar>(x: &S) -> i64 {
    bits(&x.numer_big()) - 1 - bits(&x.denom_big())
}

impl<S: Scalar> ContentBound<S> {
    /// Whether the bound proves the quantity is below `eps > 0`.
    pub fn certified_below(&self, eps: &S) -> bool {
        match self {
            ContentBound::Exact(v) => v < eps,
            ContentBound::Log2Upper(u) => {
                let threshold =
                    S::from_bigint(&BigInt::from(log2_lower(eps))).expect("small integer");
                u < &threshold
            }
        }
    }
}

pub fn content_bound<S: Scalar>(spec: &CantorSpec<S>, d: &S, k: usize) -> Result<ContentBound<S>> {
    if !d.is_positive() {
        return Err(IetError::InvalidArgument(format!(
            "dimension {d} must be positive"
        )));
    }
    let lk = spec.length(k)?;
    if d.denom_big().is_one() {
        let e = d
            .numer_big()
            .to_i32()
            .ok_or_else(|| IetError::InvalidArgument(format!("dimension {d} too large")))?;
        let two = S::one() + S::one();
        let half_len = lk.clone() / two.clone();
        let v = num_traits::pow(two, k) * num_traits::pow(half_len, e as usize);
        return Ok(ContentBound::Exact(v));
    }
    // l_k = p/q < 2^bits(p) / 2^(bits(q)-1), so
    // log2(2^k (l_k/2)^d) < k + d (bits(p) - bits(q))
    let slack = bits(&lk.numer_big()) - bits(&lk.denom_big());
    let to_s = |n: i64| S::from_bigint(&BigInt::from(n)).expect("small integer");
    Ok(ContentBound::Log2Upper(
        to_s(k as i64) + d.clone() * to_s(slack),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::spec::TnCantorSpec;
    use crate::scalar::ratio;
    use crate::Rat;

    fn r(n: i64, d: i64) -> Rat {
        ratio(n, d).unwrap()
    }

    #[test]
    fn integer_dimension_examples() {
        let t: TnCantorSpec = TnCantorSpec::new(1u32, 16).unwrap();
        let s = t.spec();
        let one = r(1, 1);
        assert_eq!(
            content_bound(s, &one, 0).unwrap(),
            ContentBound::Exact(r(1, 2))
        );
        assert_eq!(
            content_bound(s, &one, 2).unwrap(),
            ContentBound::Exact(r(1, 3))
        );
        assert_eq!(
            content_bound(s, &one, 3).unwrap(),
            ContentBound::Exact(r(2, 21))
        );
    }

    #[test]
    fn ratio_of_consecutive_levels() {
        let t: TnCantorSpec = TnCantorSpec::new(2u32, 16).unwrap();
        let s = t.spec();
        for d in 1..4 {
            let d = r(d, 1);
            for k in 0..8 {
                let (ContentBound::Exact(a), ContentBound::Exact(b)) = (
                    content_bound(s, &d, k).unwrap(),
                    content_bound(s, &d, k + 1).unwrap(),
                ) else {
                    panic!("integer dimension is exact")
                };
                let expected = r(2, 1)
                    * num_traits::pow(
                        s.ratio(k).unwrap().clone(),
                        d.to_integer().try_into().unwrap(),
                    );
                assert_eq!(b / a, expected);
            }
        }
    }

    #[test]
    fn fractional_dimension_bound_is_sound() {
        let t: TnCantorSpec = TnCantorSpec::new(1u32, 16).unwrap();
        let s = t.spec();
        let d = r(1, 8);
        let ContentBound::Log2Upper(u) = content_bound(s, &d, 12).unwrap() else {
            panic!("fractional dimension gives a log bound")
        };
        // the true log2 is k + d (log2 l_k - 1) with l_k = 1/N_12
        let nk_bits = t.n_k(12).unwrap().bits() as i64;
        let true_upper = r(12, 1) - d.clone() * r(nk_bits, 1);
        assert!(u <= true_upper + d.clone() * r(1, 1));
        assert!(content_bound(s, &d, 12)
            .unwrap()
            .certified_below(&r(1, 1_000_000)));
        // a bound that is too weak is not certified
        assert!(!content_bound(s, &d, 0)
            .unwrap()
            .certified_below(&r(1, 1_000_000)));
        assert!(content_bound(s, &r(0, 1), 3).is_err());
    }
}
