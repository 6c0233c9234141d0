//! Forward orbits and least periods by exact iteration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::Result;
use crate::iet::FiniteIet;
use crate::map::IntervalMap;
use crate::scalar::Scalar;

/// Result of scanning for the least period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PeriodOutcome {
    Found(u64),
    /// No return to the start within the given number of steps.
    CapReached(u64),
}

impl PeriodOutcome {
    pub fn period(self) -> Option<u64> {
        match self {
            PeriodOutcome::Found(p) => Some(p),
            PeriodOutcome::CapReached(_) => None,
        }
    }
}

/// A stored forward orbit. `points[0]` is the start; when the status is
/// `Found(p)` the list ends with `points[p] == points[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord<S> {
    pub start: S,
    pub points: Vec<S>,
    pub status: PeriodOutcome,
}

#[derive(Serialize)]
struct OrbitRepr<'a> {
    start: String,
    points: Vec<String>,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<String>,
}

impl<S: Scalar> OrbitRecord<S> {
    pub fn to_json(&self) -> String {
        let (status, period, cap) = match self.status {
            PeriodOutcome::Found(p) => ("period_found", Some(p.to_string()), None),
            PeriodOutcome::CapReached(c) => ("cap_reached", None, Some(c.to_string())),
        };
        let repr = OrbitRepr {
            start: self.start.to_string(),
            points: self.points.iter().map(ToString::to_string).collect(),
            status,
            period,
            cap,
        };
        serde_json::to_string(&repr).expect("string-only JSON")
    }
}

/// Iterates `map` from `x` until the orbit returns to `x` or `max_steps`
/// steps have been taken, keeping every point.
pub fn orbit<S, M>(map: &M, x: &S, max_steps: u64) -> Result<OrbitRecord<S>>
where
    S: Scalar,
    M: IntervalMap<S> + ?Sized,
{
    map.domain().check_member(x)?;
    let mut points = vec![x.clone()];
    let mut cur = x.clone();
    for step in 1..=max_steps {
        cur = map.apply(&cur)?;
        points.push(cur.clone());
        if &cur == x {
            return Ok(OrbitRecord {
                start: x.clone(),
                points,
                status: PeriodOutcome::Found(step),
            });
        }
    }
    Ok(OrbitRecord {
        start: x.clone(),
        points,
        status: PeriodOutcome::CapReached(max_steps),
    })
}

/// Least period by plain iteration in the scalar type; constant memory.
pub fn least_period_generic<S, M>(map: &M, x: &S, cap: u64) -> Result<PeriodOutcome>
where
    S: Scalar,
    M: IntervalMap<S> + ?Sized,
{
    map.domain().check_member(x)?;
    let mut cur = x.clone();
    for step in 1..=cap {
        cur = map.apply(&cur)?;
        if &cur == x {
            return Ok(PeriodOutcome::Found(step));
        }
    }
    Ok(PeriodOutcome::CapReached(cap))
}

/// Least period using the fastest exact iteration the map offers.
pub fn least_period_direct<S, M>(map: &M, x: &S, cap: u64) -> Result<PeriodOutcome>
where
    S: Scalar,
    M: IntervalMap<S> + ?Sized,
{
    map.least_period(x, cap)
}

/// A finite IET rescaled to integers: every endpoint, translation and the
/// start point are multiples of `1/scale`, so the orbit lives in `i128`.
pub(crate) struct ScaledIet {
    los: Vec<i128>,
    shifts: Vec<i128>,
}

/// Keeps scaled values comfortably inside `i128` so additions cannot overflow.
const SCALED_LIMIT: i128 = 1 << 120;

impl ScaledIet {
    pub(crate) fn new<S: Scalar>(iet: &FiniteIet<S>, x: &S) -> Option<(Self, i128)> {
        let mut scale = x.denom_big();
        for p in iet.pieces() {
            for v in [p.interval.lo(), p.interval.hi(), &p.translation] {
                scale = scale.lcm(&v.denom_big());
            }
            if scale.bits() > 100 {
                return None;
            }
        }
        let conv = |v: &S| -> Option<i128> {
            let n: BigInt = v.numer_big() * (&scale / v.denom_big());
            let n = n.to_i128()?;
            (n.abs() < SCALED_LIMIT).then_some(n)
        };
        let mut los = Vec::with_capacity(iet.pieces().len());
        let mut shifts = Vec::with_capacity(iet.pieces().len());
        for p in iet.pieces() {
            los.push(conv(p.interval.lo())?);
            shifts.push(conv(&p.translation)?);
        }
        Some((Self { los, shifts }, conv(x)?))
    }

    pub(crate) fn least_period(&self, start: i128, cap: u64) -> PeriodOutcome {
        let mut cur = start;
        for step in 1..=cap {
            // the caller checked membership and the IET is a bijection of its
            // domain, so the orbit never leaves the pieces
            let i = self.los.partition_point(|lo| *lo <= cur) - 1;
            cur += self.shifts[i];
            if cur == start {
                return PeriodOutcome::Found(step);
            }
        }
        PeriodOutcome::CapReached(cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::rmn_build;
    use crate::reversal::ReversalMap;
    use crate::scalar::ratio;
    use crate::{Rat, Rat64};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        ratio(n, d).unwrap()
    }

    #[test]
    fn t2_quarter_has_period_ten() {
        let t2 = ReversalMap::new(2u32).unwrap();
        let rec = orbit(&t2, &r(1, 4), 100).unwrap();
        assert_eq!(rec.status, PeriodOutcome::Found(10));
        assert_eq!(rec.points.len(), 11);
        assert_eq!(rec.points[10], rec.points[0]);
        assert!(rec.points[1..10].iter().all(|p| p != &rec.start));
    }

    #[test]
    fn t1_quarter_has_period_twenty() {
        let t1 = ReversalMap::new(1u32).unwrap();
        assert_eq!(
            orbit(&t1, &r(1, 4), 100).unwrap().status,
            PeriodOutcome::Found(20)
        );
    }

    #[test]
    fn orbit_of_zero_never_returns() {
        let t1 = ReversalMap::new(1u32).unwrap();
        let rec = orbit(&t1, &r(0, 1), 100).unwrap();
        assert_eq!(rec.status, PeriodOutcome::CapReached(100));
        assert_eq!(rec.points.len(), 101);
        assert!(rec.points[1..].iter().all(|p| !p.is_zero()));
        assert_eq!(
            least_period_direct(&t1, &r(1, 2), 1000).unwrap(),
            PeriodOutcome::CapReached(1000)
        );
    }

    #[test]
    fn r63_period_ten() {
        let iet: FiniteIet = rmn_build(6, 3).unwrap();
        assert_eq!(
            least_period_direct(&iet, &r(1, 5), 100).unwrap(),
            PeriodOutcome::Found(10)
        );
    }

    #[test]
    fn t3_on_r124_window() {
        let t3 = ReversalMap::new(3u32).unwrap();
        for (n, d) in [
            (1, 11),
            (1, 10),
            (1, 7),
            (2, 13),
            (1, 5),
            (7, 30),
            (99, 1000),
        ] {
            let p = least_period_direct(&t3, &r(n, d), 2000).unwrap();
            assert!(
                matches!(p, PeriodOutcome::Found(920) | PeriodOutcome::Found(930)),
                "{n}/{d}: {p:?}"
            );
        }
    }

    #[test]
    fn out_of_domain_rejected() {
        let t1 = ReversalMap::new(1u32).unwrap();
        assert!(orbit(&t1, &r(1, 1), 10).is_err());
        assert!(least_period_direct(&t1, &r(-1, 3), 10).is_err());
    }

    #[test]
    fn orbit_json() {
        let t2 = ReversalMap::new(2u32).unwrap();
        let rec = orbit(&t2, &r(0, 1), 2).unwrap();
        assert_eq!(
            rec.to_json(),
            r#"{"start":"0","points":["0","1/3","1/7"],"status":"cap_reached","cap":"2"}"#
        );
    }

    #[test]
    fn fixed_width_scalar_iterates_too() {
        let iet: FiniteIet<Rat64> = rmn_build(12, 4).unwrap();
        let x: Rat64 = ratio(1, 7).unwrap();
        let p = least_period_direct(&iet, &x, 2000).unwrap();
        assert!(matches!(
            p,
            PeriodOutcome::Found(920) | PeriodOutcome::Found(930)
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // the scaled-integer fast paths must agree with plain iteration
        #[test]
        fn fast_finite_path_matches_generic(num in 0i64..1000) {
            let iet: FiniteIet = rmn_build(12, 4).unwrap();
            let x = r(1, 12) + r(num, 1000) * r(1, 6);
            prop_assert_eq!(
                least_period_direct(&iet, &x, 2000).unwrap(),
                least_period_generic(&iet, &x, 2000).unwrap()
            );
        }

        #[test]
        fn fast_reversal_path_matches_generic(n in 1u32..4, num in 0i64..500, den in 1i64..500) {
            let t = ReversalMap::new(n).unwrap();
            let x = r(num % den, den) / r(n as i64, 1);
            let cap = 400;
            let fast = least_period_direct(&t, &x, cap).unwrap();
            prop_assert_eq!(fast, least_period_generic(&t, &x, cap).unwrap());
            if let PeriodOutcome::Found(p) = fast {
                let rec = orbit(&t, &x, cap).unwrap();
                prop_assert_eq!(rec.status, fast);
                prop_assert_eq!(&rec.points[p as usize], &x);
            }
        }
    }
}
