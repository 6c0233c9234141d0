//! First-return maps, computed by following whole subintervals.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{IetError, Result};
use crate::iet::{FiniteIet, Piece};
use crate::interval::HalfOpenInterval;
use crate::map::{push_forward, IntervalMap, Segment};
use crate::reversal::ReversalMap;
use crate::scalar::{biguint_of, Scalar};

/// The induced map on a target interval together with the return time of
/// each of its pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnMapResult<S> {
    pub induced: FiniteIet<S>,
    pub return_times: Vec<u64>,
}

impl<S: Scalar> ReturnMapResult<S> {
    /// The common return time, if all pieces share one.
    pub fn constant_time(&self) -> Option<u64> {
        let first = *self.return_times.first()?;
        self.return_times
            .iter()
            .all(|t| *t == first)
            .then_some(first)
    }

    /// Recognizes the induced map as an initial run of pieces of some `T_M`
    /// and returns `M`.
    pub fn as_reversal(&self) -> Option<BigUint> {
        let first = self.induced.pieces().first()?;
        if !first.interval.lo().is_zero() || first.translation <= S::zero() {
            return None;
        }
        // the first piece of T_M moves by 1/(M+1)
        let recip = S::one() / first.translation.clone();
        if !recip.denom_big().is_one() {
            return None;
        }
        let m = biguint_of(&(recip.numer_big() - 1))?;
        if m.is_zero() {
            return None;
        }
        let t = ReversalMap::<S>::new(m.clone()).ok()?;
        let expected = t.pieces_truncated(self.induced.pieces().len()).ok()?;
        (expected == self.induced.pieces()).then_some(m)
    }
}

#[derive(Clone)]
struct Tracked<S> {
    seg: Segment<S>,
    time: u64,
}

/// First-return map of `map` to `target`.
pub fn first_return_map<S, M>(
    map: &M,
    target: &HalfOpenInterval<S>,
    step_cap: u64,
    piece_cap: usize,
) -> Result<ReturnMapResult<S>>
where
    S: Scalar,
    M: IntervalMap<S> + ?Sized,
{
    first_return_map_on(map, target, target, step_cap, piece_cap)
}

/// First-return map to `target`, computed only for points starting in
/// `source ⊆ target`. Useful when the full return map has infinitely many
/// pieces: a source away from the accumulation point gives a finite prefix.
pub fn first_return_map_on<S, M>(
    map: &M,
    target: &HalfOpenInterval<S>,
    source: &HalfOpenInterval<S>,
    step_cap: u64,
    piece_cap: usize,
) -> Result<ReturnMapResult<S>>
where
    S: Scalar,
    M: IntervalMap<S> + ?Sized,
{
    if !map.domain().contains_interval(target) || !target.contains_interval(source) {
        return Err(IetError::InvalidArgument(format!(
            "need {source} ⊆ {target} ⊆ {}",
            map.domain()
        )));
    }
    let mut active = vec![Tracked {
        seg: Segment::new(source.clone(), S::zero()),
        time: 0,
    }];
    let mut done: Vec<Tracked<S>> = Vec::new();
    let mut total = 1usize;

    while let Some(cur) = active.pop() {
        if cur.time >= step_cap {
            return Err(IetError::StepCapExceeded { cap: step_cap });
        }
        for seg in push_forward(map, &cur.seg, piece_cap)? {
            for part in split_at_target(seg, target) {
                let image = part.image();
                let next = Tracked {
                    seg: part,
                    time: cur.time + 1,
                };
                if target.contains_interval(&image) {
                    done.push(next);
                } else {
                    active.push(next);
                }
                total += 1;
                if total > piece_cap.saturating_mul(4) || done.len() + active.len() > piece_cap {
                    return Err(IetError::RefinementOverflow { cap: piece_cap });
                }
            }
        }
    }

    done.sort_by(|a, b| a.seg.source.lo().cmp(b.seg.source.lo()));
    let mut merged: Vec<Tracked<S>> = Vec::with_capacity(done.len());
    for t in done {
        if let Some(last) = merged.last_mut() {
            if last.seg.source.hi() == t.seg.source.lo()
                && last.seg.shift == t.seg.shift
                && last.time == t.time
            {
                last.seg.source =
                    HalfOpenInterval::new(last.seg.source.lo().clone(), t.seg.source.hi().clone())?;
                continue;
            }
        }
        merged.push(t);
    }
    let return_times = merged.iter().map(|t| t.time).collect();
    let pieces = merged
        .into_iter()
        .map(|t| Piece::new(t.seg.source, t.seg.shift))
        .collect();
    Ok(ReturnMapResult {
        induced: FiniteIet::from_parts(source.clone(), pieces),
        return_times,
    })
}

/// Cuts a segment where its image crosses the target's endpoints.
fn split_at_target<S: Scalar>(seg: Segment<S>, target: &HalfOpenInterval<S>) -> Vec<Segment<S>> {
    let image = seg.image();
    let mut cuts: Vec<S> = [target.lo(), target.hi()]
        .into_iter()
        .filter(|c| image.lo() < *c && *c < image.hi())
        .map(|c| c.clone() - seg.shift.clone())
        .collect();
    if cuts.is_empty() {
        return vec![seg];
    }
    cuts.sort();
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = seg.source.lo().clone();
    for c in cuts
        .into_iter()
        .chain(std::iter::once(seg.source.hi().clone()))
    {
        let iv = HalfOpenInterval::new(lo, c.clone()).expect("cuts lie strictly inside");
        out.push(Segment::new(iv, seg.shift.clone()));
        lo = c;
    }
    out
}

/// Outcome of comparing a computed return map with a closed-form `T_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnLemmaReport {
    pub n: BigUint,
    /// The map `T_M` the return map should equal.
    pub m: BigUint,
    pub expected_time: u64,
    pub pieces_compared: usize,
    pub first_discrepancy: Option<String>,
}

impl ReturnLemmaReport {
    pub fn passed(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// The recurrence `N_0 = N`, `N_{k+1} = N_k (1 + N_k)`.
pub fn n_sequence(n: &BigUint, len: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(len);
    let mut cur = n.clone();
    for _ in 0..len {
        out.push(cur.clone());
        cur = &cur * (&cur + 1u32);
    }
    out
}

/// Checks that the first return of `T_N` to `[0, 1/N_levels)` is
/// `T_{N_levels}` with return time `2^levels`, on the first `budget` pieces
/// of `T_{N_levels}` (the rest accumulate at the right endpoint).
pub fn verify_return_levels<S: Scalar>(
    n: &BigUint,
    levels: u32,
    budget: usize,
) -> ReturnLemmaReport {
    let m = n_sequence(n, levels as usize + 1).pop().expect("nonempty");
    let expected_time = 1u64 << levels;
    let mut report = ReturnLemmaReport {
        n: n.clone(),
        m: m.clone(),
        expected_time,
        pieces_compared: 0,
        first_discrepancy: None,
    };
    let outcome = (|| -> Result<Option<String>> {
        let ambient = ReversalMap::<S>::new(n.clone())?;
        let induced = ReversalMap::<S>::new(m.clone())?;
        let expected = induced.pieces_truncated(budget)?;
        let source = HalfOpenInterval::new(
            S::zero(),
            expected.last().expect("budget > 0").interval.hi().clone(),
        )?;
        let got = first_return_map_on(
            &ambient,
            induced.domain(),
            &source,
            expected_time.saturating_mul(4),
            budget.saturating_mul(8).max(64),
        )?;
        report.pieces_compared = got.induced.pieces().len().min(expected.len());
        for (i, (g, e)) in got.induced.pieces().iter().zip(&expected).enumerate() {
            if g != e {
                return Ok(Some(format!(
                    "piece {i}: got {} by {}, expected {} by {}",
                    g.interval, g.translation, e.interval, e.translation
                )));
            }
        }
        if got.induced.pieces().len() != expected.len() {
            return Ok(Some(format!(
                "got {} pieces, expected {}",
                got.induced.pieces().len(),
                expected.len()
            )));
        }
        if let Some((i, t)) = got
            .return_times
            .iter()
            .enumerate()
            .find(|(_, t)| **t != expected_time)
        {
            return Ok(Some(format!(
                "piece {i} returns after {t} steps, expected {expected_time}"
            )));
        }
        Ok(None)
    })();
    report.first_discrepancy = match outcome {
        Ok(d) => d,
        Err(e) => Some(e.to_string()),
    };
    report
}

/// The first return of `T_N` to `[0, 1/(N(N+1)))` against `T_{N(N+1)}`.
pub fn verify_return_lemma<S: Scalar>(n: &BigUint, budget: usize) -> ReturnLemmaReport {
    verify_return_levels::<S>(n, 1, budget)
}

/// Runs [`verify_return_lemma`] for several `N` in parallel, in input order.
pub fn verify_return_lemma_many<S: Scalar>(
    ns: &[BigUint],
    budget: usize,
) -> Vec<ReturnLemmaReport> {
    ns.par_iter()
        .map(|n| verify_return_lemma::<S>(n, budget))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::Rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rat {
        ratio(n, d).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn lemma_small_n() {
        for n in [1, 2, 10] {
            let rep = verify_return_lemma::<Rat>(&big(n), 20);
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.pieces_compared, 20);
            assert_eq!(rep.m, big(n * (n + 1)));
        }
    }

    #[test]
    fn corollary_levels() {
        for (n, k) in [(1, 2), (1, 3), (2, 2), (3, 3)] {
            let rep = verify_return_levels::<Rat>(&big(n), k, 10);
            assert!(rep.passed(), "N={n} k={k}: {rep:?}");
            assert_eq!(rep.expected_time, 1 << k);
        }
        assert_eq!(
            n_sequence(&big(1), 5),
            [1u32, 2, 6, 42, 1806].map(BigUint::from)
        );
    }

    #[test]
    fn finite_return_map_of_t1_to_left_half() {
        let t1: ReversalMap = ReversalMap::new(1u32).unwrap();
        let target = HalfOpenInterval::new(r(0, 1), r(1, 2)).unwrap();
        let source = HalfOpenInterval::new(r(0, 1), r(1, 2) - r(1, 30)).unwrap();
        let got = first_return_map_on(&t1, &target, &source, 100, 1000).unwrap();
        assert_eq!(got.constant_time(), Some(2));
        assert_eq!(got.as_reversal(), Some(big(2)));
    }

    #[test]
    fn return_map_of_an_iet_to_its_whole_domain_is_itself() {
        let iet: FiniteIet = crate::iet::rmn_build(12, 4).unwrap();
        let got = first_return_map(&iet, iet.domain(), 10, 1000).unwrap();
        assert_eq!(got.induced, iet);
        assert_eq!(got.constant_time(), Some(1));
    }

    #[test]
    fn step_cap_reported() {
        let iet: FiniteIet = crate::iet::rmn_build(6, 3).unwrap();
        // R_{6,3} has period 10 everywhere, so a short window needs many steps
        let target = HalfOpenInterval::new(r(1, 6), r(1, 6) + r(1, 600)).unwrap();
        assert_eq!(
            first_return_map(&iet, &target, 3, 1000),
            Err(IetError::StepCapExceeded { cap: 3 })
        );
    }

    #[test]
    fn return_map_round_trip_on_random_points() {
        let t1: ReversalMap = ReversalMap::new(1u32).unwrap();
        let target = HalfOpenInterval::new(r(0, 1), r(1, 6)).unwrap();
        let source = HalfOpenInterval::new(r(0, 1), r(1, 6) - r(1, 20)).unwrap();
        let got = first_return_map_on(&t1, &target, &source, 100, 1000).unwrap();
        assert_eq!(got.constant_time(), Some(4));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, time) in got.induced.pieces().iter().zip(&got.return_times) {
            for _ in 0..100 {
                let u = r(rng.gen_range(0..1_000_000), 1_000_000);
                let x = p.interval.lo().clone() + p.interval.length() * u;
                let mut y = x.clone();
                for step in 1..=*time {
                    y = t1.apply(&y).unwrap();
                    assert_eq!(target.contains(&y), step == *time);
                }
                assert_eq!(y, got.induced.apply(&x).unwrap());
            }
        }
    }
}
