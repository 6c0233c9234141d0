//! The infinite reversal maps `T_N` on `[0, 1/N)`.
//!
//! `T_N` cuts its domain at the points `1/N - 1/k` (`k >= N`) and reverses the
//! order of the resulting intervals: the piece `[1/N - 1/k, 1/N - 1/(k+1))`
//! lands on `[1/(k+1), 1/k)`. Pieces accumulate at `1/N`, so the map is only
//! ever evaluated through the closed-form piece index, never enumerated.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{IetError, Result};
use crate::iet::Piece;
use crate::interval::HalfOpenInterval;
use crate::map::IntervalMap;
use crate::orbit::{least_period_generic, PeriodOutcome};
use crate::scalar::{biguint_of, recip_big, Scalar};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReversalMap<S = Rat> {
    n: BigUint,
    inv_n: S,
    domain: HalfOpenInterval<S>,
}

impl<S: Scalar> ReversalMap<S> {
    pub fn new(n: impl Into<BigUint>) -> Result<Self> {
        let n = n.into();
        if n.is_zero() {
            return Err(IetError::InvalidArgument("T_N needs N >= 1".into()));
        }
        let inv_n: S = recip_big(&n)?;
        let domain = HalfOpenInterval::new(S::zero(), inv_n.clone())?;
        Ok(Self { n, inv_n, domain })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// The index `k >= N` of the piece containing `x`.
    pub fn piece_index(&self, x: &S) -> Result<BigUint> {
        self.domain.check_member(x)?;
        let gap = self.inv_n.clone() - x.clone();
        let k = (S::one() / gap).floor_big();
        Ok(biguint_of(&k).expect("1/(1/N - x) is positive"))
    }

    /// The `k`-th piece, `[1/N - 1/k, 1/N - 1/(k+1))`, with its translation.
    pub fn piece(&self, k: &BigUint) -> Result<Piece<S>> {
        if k < &self.n {
            return Err(IetError::InvalidArgument(format!(
                "piece index {k} is below N = {}",
                self.n
            )));
        }
        let ik: S = recip_big(k)?;
        let ik1: S = recip_big(&(k + 1u32))?;
        let interval = HalfOpenInterval::new(
            self.inv_n.clone() - ik.clone(),
            self.inv_n.clone() - ik1.clone(),
        )?;
        Ok(Piece::new(interval, ik + ik1 - self.inv_n.clone()))
    }

    /// The first `count` pieces, `k = N, ..., N + count - 1`.
    pub fn pieces_truncated(&self, count: usize) -> Result<Vec<Piece<S>>> {
        (0..count)
            .map(|i| self.piece(&(&self.n + BigUint::from(i))))
            .collect()
    }

    /// `T_N^{-1}(y)` for `0 < y < 1/N`.
    pub fn inverse(&self, y: &S) -> Result<S> {
        if y <= &S::zero() || y >= &self.inv_n {
            return Err(IetError::NoPreimage {
                value: y.to_string(),
            });
        }
        // y lies in [1/(k+1), 1/k)
        let recip = S::one() / y.clone();
        let ceil = -((-recip).floor_big());
        let k = biguint_of(&(ceil - 1)).expect("1/y > N >= 1");
        let piece = self.piece(&k)?;
        Ok(y.clone() - piece.translation)
    }
}

impl<S: Scalar> IntervalMap<S> for ReversalMap<S> {
    fn domain(&self) -> &HalfOpenInterval<S> {
        &self.domain
    }

    fn piece_at(&self, x: &S) -> Result<(HalfOpenInterval<S>, S)> {
        let k = self.piece_index(x)?;
        let p = self.piece(&k)?;
        Ok((p.interval, p.translation))
    }

    fn apply(&self, x: &S) -> Result<S> {
        let (_, t) = self.piece_at(x)?;
        Ok(x.clone() + t)
    }

    fn least_period(&self, x: &S, cap: u64) -> Result<PeriodOutcome> {
        self.domain.check_member(x)?;
        match scaled_period(&self.n, x, cap) {
            Some(outcome) => Ok(outcome),
            None => least_period_generic(self, x, cap),
        }
    }
}

/// `piece_index` for a big-rational point.
pub fn piece_index(n: u64, x: &Rat) -> Result<BigUint> {
    ReversalMap::<Rat>::new(n)?.piece_index(x)
}

/// `T_N(x)` for a big-rational point.
pub fn tn_eval(n: u64, x: &Rat) -> Result<Rat> {
    ReversalMap::<Rat>::new(n)?.apply(x)
}

/// `T_N^{-1}(y)` for a big-rational point.
pub fn tn_inverse(n: u64, y: &Rat) -> Result<Rat> {
    ReversalMap::<Rat>::new(n)?.inverse(y)
}

/// Iterates `T_N` on integers: the current point is `a / scale`, and
/// `scale` grows to absorb each new piece's denominators `k(k+1)`. Visited
/// pieces are cached by their scaled left endpoint so the steady state needs
/// a binary search instead of wide divisions. `None` when `u128` overflows.
fn scaled_period<S: Scalar>(n: &BigUint, x: &S, cap: u64) -> Option<PeriodOutcome> {
    let n = n.to_u128()?;
    let num = x.numer_big().to_u128()?;
    let den = x.denom_big().to_u128()?;
    let mut scale = den.lcm(&n);
    let mut start = num.checked_mul(scale / den)?;
    let mut cur = start;
    let mut inv_n = scale / n;
    // scaled lo -> (scaled hi, scaled image lo); image lo = 1/(k+1)
    let mut cache: BTreeMap<u128, (u128, u128)> = BTreeMap::new();

    for step in 1..=cap {
        let hit = cache
            .range(..=cur)
            .next_back()
            .filter(|(_, (hi, _))| cur < *hi)
            .map(|(lo, (_, img))| (*lo, *img));
        cur = match hit {
            Some((lo, img)) => cur - lo + img,
            None => {
                let k = scale / (inv_n - cur);
                let kk = k.checked_mul(k + 1)?;
                if scale % kk != 0 {
                    let grown = scale.checked_mul(kk / scale.gcd(&kk))?;
                    let f = grown / scale;
                    scale = grown;
                    start = start.checked_mul(f)?;
                    cur = cur.checked_mul(f)?;
                    inv_n = scale / n;
                    cache = cache
                        .into_iter()
                        .map(|(lo, (hi, img))| {
                            Some((
                                lo.checked_mul(f)?,
                                (hi.checked_mul(f)?, img.checked_mul(f)?),
                            ))
                        })
                        .collect::<Option<_>>()?;
                }
                let lo = inv_n - scale / k;
                let hi = inv_n - scale / (k + 1);
                let img = scale / (k + 1);
                cache.insert(lo, (hi, img));
                cur - lo + img
            }
        };
        if cur == start {
            return Some(PeriodOutcome::Found(step));
        }
    }
    Some(PeriodOutcome::CapReached(cap))
}
