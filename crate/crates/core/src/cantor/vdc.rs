//! The Van der Corput map: the binary odometer as an IET of `[0, 1)`.
//!
//! On `[1 - 2^(1-j), 1 - 2^(-j))`, `j >= 1`, it translates by
//! `-1 + 2^(1-j) + 2^(-j)`. Reading `x = Σ α_k 2^-(k+1)`, this adds one to
//! the digit sequence `α` with carry, so the halving Cantor spec on `[0, 1]`
//! conjugates it to the odometer.

use num_bigint::BigInt;

use super::spec::{h_eval, CantorSpec};
use super::word::{odometer_step, AdicSeq};
use crate::error::{IetError, Result};
use crate::scalar::Scalar;

/// The piece index `j >= 1` of `x ∈ [0, 1)`.
fn piece_of<S: Scalar>(x: &S) -> u64 {
    let gap = S::one() - x.clone();
    // 2^-j < gap <= 2^(1-j)  <=>  j - 1 = floor(log2(1/gap))
    let (p, q) = (gap.numer_big(), gap.denom_big());
    let mut e = q.bits() as i64 - p.bits() as i64;
    // p * 2^e <= q < p * 2^(e+1) for the right e
    let shifted = |e: i64| -> BigInt {
        if e >= 0 {
            &p << (e as u64)
        } else {
            &p >> ((-e) as u64)
        }
    };
    while shifted(e) > q {
        e -= 1;
    }
    while shifted(e + 1) <= q {
        e += 1;
    }
    e as u64 + 1
}

fn pow2<S: Scalar>(e: i64) -> S {
    let two = S::one() + S::one();
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        S::one() / num_traits::pow(two, (-e) as usize)
    }
}

pub fn vdc_eval<S: Scalar>(x: &S) -> Result<S> {
    if x < &S::zero() || x >= &S::one() {
        return Err(IetError::OutOfDomain {
            value: x.to_string(),
            domain: "[0,1)".into(),
        });
    }
    let j = piece_of(x) as i64;
    Ok(x.clone() - S::one() + pow2::<S>(1 - j) + pow2::<S>(-j))
}

/// The halving spec on `[0, 1]`; its address map reads binary digits.
pub fn dyadic_spec<S: Scalar>(depth: usize) -> Result<CantorSpec<S>> {
    let half = S::one() / (S::one() + S::one());
    CantorSpec::constant(S::zero(), S::one(), half, depth)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VdcCheck<S> {
    pub alpha: AdicSeq,
    pub x: S,
    pub image: S,
    pub expected: S,
}

impl<S: Scalar> VdcCheck<S> {
    pub fn passed(&self) -> bool {
        self.image == self.expected
    }
}

/// Compares `vdc(h(α))` with `h(α + 1)` for the halving spec.
pub fn vdc_conjugacy_check<S: Scalar>(alpha: &AdicSeq) -> Result<VdcCheck<S>> {
    let spec = dyadic_spec::<S>(alpha.prefix().len() + 2)?;
    let x = h_eval(&spec, alpha)?;
    if x.is_one() {
        return Err(IetError::OutOfDomain {
            value: alpha.to_string(),
            domain: "sequences with h < 1".into(),
        });
    }
    let image = vdc_eval(&x)?;
    let expected = h_eval(&spec, &odometer_step(alpha)?)?;
    Ok(VdcCheck {
        alpha: alpha.clone(),
        x,
        image,
        expected,
    })
}
