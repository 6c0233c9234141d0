//! Reports that check a spectrum against other sources: the lcm divisibility
//! pattern and direct iteration.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{periods_of_points, Decomposition, PeriodSpectrum};
use crate::error::{IetError, Result};
use crate::iet::FiniteIet;
use crate::interval::HalfOpenInterval;
use crate::map::IntervalMap;
use crate::orbit::PeriodOutcome;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityRow {
    #[serde(serialize_with = "as_decimal")]
    pub period: BigUint,
    pub divides: bool,
    #[serde(serialize_with = "as_decimal")]
    pub remainder: BigUint,
}

/// Whether each least period divides `lcm(n, n+1, ..., m)`. Informational:
/// the pattern holds for some IETs and fails for others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityReport {
    #[serde(serialize_with = "as_decimal")]
    pub m: u64,
    #[serde(serialize_with = "as_decimal")]
    pub n: u64,
    #[serde(serialize_with = "as_decimal")]
    pub lcm: BigUint,
    pub rows: Vec<DivisibilityRow>,
}

fn as_decimal<T: fmt::Display, Ser: serde::Serializer>(
    v: &T,
    s: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    s.serialize_str(&v.to_string())
}

impl DivisibilityReport {
    pub fn all_divide(&self) -> bool {
        self.rows.iter().all(|r| r.divides)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

impl fmt::Display for DivisibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lcm({}..{}) = {}", self.n, self.m, self.lcm)?;
        for r in &self.rows {
            let verdict = if r.divides { "yes" } else { "no" };
            writeln!(
                f,
                "{:>16} | lcm: {verdict} (remainder {})",
                r.period, r.remainder
            )?;
        }
        Ok(())
    }
}

pub fn divisibility_report<S: Scalar>(
    spectrum: &PeriodSpectrum<S>,
    m: u64,
    n: u64,
) -> Result<DivisibilityReport> {
    if n == 0 || m <= n {
        return Err(IetError::InvalidArgument(format!(
            "need m > n > 0, got m={m}, n={n}"
        )));
    }
    let lcm = (n..=m).fold(BigUint::from(1u32), |acc, k| acc.lcm(&BigUint::from(k)));
    let rows = spectrum
        .entries
        .iter()
        .map(|e| {
            let remainder = &lcm % &e.period;
            DivisibilityRow {
                period: e.period.clone(),
                divides: remainder.is_zero(),
                remainder,
            }
        })
        .collect();
    Ok(DivisibilityReport { m, n, lcm, rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleStatus {
    Matched,
    /// The expected period exceeds the iteration cap; not checked.
    Skipped,
    Mismatch(PeriodOutcome),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome<S> {
    pub x: S,
    pub expected: BigUint,
    pub status: SampleStatus,
}

/// Agreement between the induction and direct iteration on sampled points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossValidation<S> {
    pub seed: u64,
    pub cap: u64,
    pub outcomes: Vec<SampleOutcome<S>>,
}

impl<S: Scalar> CrossValidation<S> {
    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &SampleOutcome<S>> {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.status, SampleStatus::Mismatch(_)))
    }

    pub fn matched(&self) -> usize {
        self.count(|s| *s == SampleStatus::Matched)
    }

    pub fn skipped(&self) -> usize {
        self.count(|s| *s == SampleStatus::Skipped)
    }

    fn count(&self, pred: impl Fn(&SampleStatus) -> bool) -> usize {
        self.outcomes.iter().filter(|o| pred(&o.status)).count()
    }

    /// Matched sample counts per expected period.
    pub fn matched_by_period(&self) -> std::collections::BTreeMap<BigUint, usize> {
        let mut out = std::collections::BTreeMap::new();
        for o in &self.outcomes {
            if o.status == SampleStatus::Matched {
                *out.entry(o.expected.clone()).or_insert(0) += 1;
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for CrossValidation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed {}: {} matched, {} skipped (period > {}), {} mismatched",
            self.seed,
            self.matched(),
            self.skipped(),
            self.cap,
            self.outcomes.len() - self.matched() - self.skipped()
        )?;
        for o in self.mismatches() {
            write!(
                f,
                "\n  x = {}: expected {}, got {:?}",
                o.x, o.expected, o.status
            )?;
        }
        Ok(())
    }
}

/// A random rational in `iv`.
fn sample_in<S: Scalar>(rng: &mut ChaCha8Rng, iv: &HalfOpenInterval<S>) -> Result<S> {
    let den: i64 = rng.gen_range(1..=1_000_000);
    let num: i64 = rng.gen_range(0..den);
    let u = crate::scalar::ratio::<S>(num, den)?;
    Ok(iv.lo().clone() + iv.length() * u)
}

fn check_points<S: Scalar>(
    iet: &FiniteIet<S>,
    points: Vec<S>,
    expected: Vec<BigUint>,
    cap: u64,
) -> Result<Vec<SampleOutcome<S>>> {
    points
        .into_par_iter()
        .zip(expected)
        .map(|(x, expected)| {
            let status = match expected.to_u64().filter(|p| *p <= cap) {
                None => SampleStatus::Skipped,
                Some(p) => match iet.least_period(&x, cap)? {
                    PeriodOutcome::Found(q) if q == p => SampleStatus::Matched,
                    other => SampleStatus::Mismatch(other),
                },
            };
            Ok(SampleOutcome {
                x,
                expected,
                status,
            })
        })
        .collect()
}

/// Draws `samples` seeded random points of the domain and compares the
/// spectrum's verdict for each with direct iteration up to `cap`.
pub fn cross_validate<S: Scalar>(
    iet: &FiniteIet<S>,
    spectrum: &PeriodSpectrum<S>,
    samples: usize,
    cap: u64,
    seed: u64,
) -> Result<CrossValidation<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..samples)
        .map(|_| sample_in(&mut rng, iet.domain()))
        .collect::<Result<Vec<_>>>()?;
    let expected = periods_of_points(iet, &points)?;
    // a period the spectrum does not list can never match
    for p in &expected {
        if spectrum.measure_of(p).is_none() {
            return Err(IetError::InvalidArgument(format!(
                "spectrum does not belong to this IET (period {p} missing)"
            )));
        }
    }
    Ok(CrossValidation {
        seed,
        cap,
        outcomes: check_points(iet, points, expected, cap)?,
    })
}

/// Samples `per_component` points in the base of every component whose
/// period is at most `cap` and checks them by iteration; larger components
/// contribute one skipped entry each.
pub fn cross_validate_components<S: Scalar>(
    iet: &FiniteIet<S>,
    decomposition: &Decomposition<S>,
    per_component: usize,
    cap: u64,
    seed: u64,
) -> Result<CrossValidation<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let mut expected = Vec::new();
    for c in &decomposition.components {
        let n = if c.period.to_u64().is_some_and(|p| p <= cap) {
            per_component
        } else {
            1
        };
        for _ in 0..n {
            points.push(sample_in(&mut rng, &c.base)?);
            expected.push(c.period.clone());
        }
    }
    Ok(CrossValidation {
        seed,
        cap,
        outcomes: check_points(iet, points, expected, cap)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{decompose, decompose_with_components};
    use crate::iet::rmn_build;
    use crate::Rat;

    #[test]
    fn divisibility_examples() {
        let s = decompose(&rmn_build::<Rat>(6, 3).unwrap()).unwrap();
        let rep = divisibility_report(&s, 6, 3).unwrap();
        assert_eq!(rep.lcm, BigUint::from(60u32));
        assert!(rep.all_divide());

        let s = decompose(&rmn_build::<Rat>(12, 4).unwrap()).unwrap();
        let rep = divisibility_report(&s, 12, 4).unwrap();
        assert_eq!(rep.lcm, BigUint::from(27720u32));
        let r920 = &rep.rows[0];
        assert_eq!(r920.period, BigUint::from(920u32));
        assert!(!r920.divides);
        assert_eq!(r920.remainder, BigUint::from(120u32));
        assert!(rep.to_json().contains(r#""lcm":"27720""#));
    }

    #[test]
    fn cross_validation_small() {
        let iet: FiniteIet = rmn_build(6, 3).unwrap();
        let s = decompose(&iet).unwrap();
        let cv = cross_validate(&iet, &s, 50, 100, 0).unwrap();
        assert!(cv.passed(), "{cv}");
        assert_eq!(cv.matched(), 50);

        let iet: FiniteIet = rmn_build(12, 4).unwrap();
        let s = decompose(&iet).unwrap();
        let cv = cross_validate(&iet, &s, 50, 2000, 1).unwrap();
        assert!(cv.passed(), "{cv}");
        assert_eq!(cv.matched(), 50);
    }

    #[test]
    fn cross_validation_is_reproducible() {
        let iet: FiniteIet = rmn_build(12, 4).unwrap();
        let s = decompose(&iet).unwrap();
        let a = cross_validate(&iet, &s, 10, 2000, 42).unwrap();
        let b = cross_validate(&iet, &s, 10, 2000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn component_sampling_skips_large_periods() {
        let iet: FiniteIet = rmn_build(12, 4).unwrap();
        let d = decompose_with_components(&iet).unwrap();
        let cv = cross_validate_components(&iet, &d, 3, 925, 5).unwrap();
        assert!(cv.passed(), "{cv}");
        assert!(cv.skipped() > 0);
        assert!(cv
            .matched_by_period()
            .keys()
            .all(|p| *p == BigUint::from(920u32)));
    }

    #[test]
    fn mismatched_spectrum_rejected() {
        let iet: FiniteIet = rmn_build(12, 4).unwrap();
        let wrong = decompose(&rmn_build::<Rat>(6, 3).unwrap()).unwrap();
        assert!(cross_validate(&iet, &wrong, 5, 2000, 0).is_err());
    }
}
