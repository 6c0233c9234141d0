//! Brute-force cycle decomposition on an arithmetic lattice.
//!
//! With `D` a common denominator of all endpoints and translations, the IET
//! permutes each coset `offset + (1/D)Z` inside its domain. Cycle lengths of
//! that finite permutation are least periods of the lattice points, and a
//! cycle of length `p` stands for a set of measure `p / D`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{IetError, Result};
use crate::iet::FiniteIet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOracleResult<S> {
    pub modulus: BigUint,
    pub offset: S,
    pub point_count: u64,
    /// Cycle length to number of cycles of that length.
    pub cycle_lengths: BTreeMap<u64, u64>,
}

impl<S: Scalar> LatticeOracleResult<S> {
    /// Measure attributed to each cycle length.
    pub fn measures<T: Scalar>(&self) -> Result<BTreeMap<u64, T>> {
        let d = BigInt::from(self.modulus.clone());
        self.cycle_lengths
            .iter()
            .map(|(len, mult)| {
                let num = BigInt::from(*len) * BigInt::from(*mult);
                let m = T::from_ratio(&num, &d)
                    .ok_or_else(|| IetError::Unrepresentable(format!("{num}/{d}")))?;
                Ok((*len, m))
            })
            .collect()
    }
}

/// Cycle structure on the lattice through `offset`; the default offset puts
/// the points half a cell above the lattice of endpoints, away from every
/// discontinuity. Fails when the lattice has more than `cap` points.
pub fn lattice_oracle<S: Scalar>(
    iet: &FiniteIet<S>,
    offset: Option<&S>,
    cap: u64,
) -> Result<LatticeOracleResult<S>> {
    let report = iet.validate();
    if !report.is_valid() {
        return Err(IetError::InvalidIet(report.to_string()));
    }
    let mut d = BigInt::one();
    for p in iet.pieces() {
        for v in [p.interval.lo(), p.interval.hi(), &p.translation] {
            d = d.lcm(&v.denom_big());
        }
    }
    let scaled = |v: &S| v.numer_big() * (&d / v.denom_big());
    let lo = scaled(iet.domain().lo());
    let count = scaled(iet.domain().hi()) - &lo;
    let count_u = count
        .to_u64()
        .filter(|c| *c <= cap)
        .ok_or_else(|| IetError::OracleTooLarge {
            points: count.to_string(),
            cap,
        })?;
    let offset = match offset {
        Some(o) => o.clone(),
        None => S::from_ratio(&BigInt::one(), &(&d * 2))
            .ok_or_else(|| IetError::Unrepresentable(format!("1/{}", &d * 2)))?,
    };

    // lattice point j is lo/D + (frac + j)/D with frac in [0,1); its piece is
    // decided by the integer part alone
    let mut next = vec![0u32; count_u as usize];
    for p in iet.pieces() {
        let start = (scaled(p.interval.lo()) - &lo)
            .to_u64()
            .expect("inside domain");
        let end = (scaled(p.interval.hi()) - &lo)
            .to_u64()
            .expect("inside domain");
        let shift = scaled(&p.translation)
            .to_i64()
            .ok_or_else(|| IetError::OracleTooLarge {
                points: count.to_string(),
                cap,
            })?;
        for j in start..end {
            next[j as usize] = (j as i64 + shift) as u32;
        }
    }

    let mut seen = vec![false; count_u as usize];
    let mut cycle_lengths = BTreeMap::new();
    for s in 0..count_u as usize {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut j = s;
        while !seen[j] {
            seen[j] = true;
            j = next[j] as usize;
            len += 1;
        }
        *cycle_lengths.entry(len).or_insert(0) += 1;
    }

    Ok(LatticeOracleResult {
        modulus: d.to_biguint().expect("positive"),
        offset,
        point_count: count_u,
        cycle_lengths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::rmn_build;
    use crate::interval::HalfOpenInterval;
    use crate::scalar::ratio;
    use crate::Rat;

    #[test]
    fn r63_lattice() {
        let iet: FiniteIet = rmn_build(6, 3).unwrap();
        let off: Rat = ratio(1, 120).unwrap();
        let o = lattice_oracle(&iet, Some(&off), 10_000_000).unwrap();
        assert_eq!(o.modulus, BigUint::from(60u32));
        assert_eq!(o.point_count, 10);
        assert_eq!(o.cycle_lengths, BTreeMap::from([(10, 1)]));
    }

    #[test]
    fn r124_lattice() {
        let iet: FiniteIet = rmn_build(12, 4).unwrap();
        let o = lattice_oracle(&iet, None, 10_000_000).unwrap();
        assert_eq!(o.modulus, BigUint::from(27720u32));
        assert_eq!(o.point_count, 4620);
        assert_eq!(o.offset, ratio::<Rat>(1, 55440).unwrap());
        assert_eq!(
            o.cycle_lengths.keys().copied().collect::<Vec<_>>(),
            vec![920, 930]
        );
        let total: u64 = o.cycle_lengths.iter().map(|(l, m)| l * m).sum();
        assert_eq!(total, 4620);
    }

    #[test]
    fn identity_lattice() {
        let d = HalfOpenInterval::new(ratio::<Rat>(0, 1).unwrap(), ratio(1, 1).unwrap()).unwrap();
        let o = lattice_oracle(&FiniteIet::identity(d), None, 100).unwrap();
        assert_eq!(o.cycle_lengths, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn cap_enforced() {
        let iet: FiniteIet = rmn_build(42, 7).unwrap();
        assert!(matches!(
            lattice_oracle(&iet, None, 10_000_000),
            Err(IetError::OracleTooLarge { .. })
        ));
    }
}
