//! How `T_N` acts on the word intervals, and the checks built on it.
//!
//! For a word `w` that is not all ones, with `j` the position of its first
//! zero, `T_N` translates `I_w^⋆` onto `I_{f(w)}^⋆` by
//! `-1/N_0 + 1/N_j + 1/(1 + N_j)`. Applied to nested intervals this gives
//! `T_N(h(α)) = h(f(α))` on sequences that do not end in ones.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::spec::{address, h_eval, interval_of_word, AddressResult, TnCantorSpec};
use super::word::{odometer_step, word_step, AdicSeq, Tail, Word};
use crate::error::{IetError, Result};
use crate::map::IntervalMap;
use crate::orbit::PeriodOutcome;
use crate::reversal::ReversalMap;
use crate::scalar::{recip_big, Scalar};

/// The translation `T_N` applies on `I_w^⋆` when `w` first has a 0 at `j`.
pub fn key_translation<S: Scalar>(spec: &TnCantorSpec<S>, j: usize) -> Result<S> {
    let nj = spec.n_k(j)?;
    Ok(recip_big::<S>(nj)? + recip_big::<S>(&(nj + 1u32))? - recip_big::<S>(spec.n())?)
}

/// Failures collected by a verification suite.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn from_results(results: Vec<Option<String>>) -> Self {
        Self {
            cases: results.len(),
            failures: results.into_iter().flatten().collect(),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cases, {} failures", self.cases, self.failures.len())?;
        for msg in self.failures.iter().take(10) {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

/// Checks one word: `I_w^⋆` sits inside a single piece of `T_N`, that piece
/// moves it by the key translation, and the image is `I_{f(w)}^⋆`.
fn check_key_word<S: Scalar>(
    spec: &TnCantorSpec<S>,
    map: &ReversalMap<S>,
    w: &Word,
) -> Result<Option<String>> {
    let j = w.first_zero().expect("caller skips all-ones words");
    let tau = key_translation(spec, j)?;
    let src = interval_of_word(spec.spec(), w)?.star();
    let dst = interval_of_word(spec.spec(), &word_step(w)?)?.star();
    if src.translate(&tau) != dst {
        return Ok(Some(format!("{w}: {src} + {tau} is not {dst}")));
    }
    let (piece, shift) = map.piece_at(src.lo())?;
    if !piece.contains_interval(&src) {
        return Ok(Some(format!(
            "{w}: {src} crosses a cut of T_N inside {piece}"
        )));
    }
    if shift != tau {
        return Ok(Some(format!(
            "{w}: T_N moves it by {shift}, expected {tau}"
        )));
    }
    // interior samples through the public evaluation path as well
    for (num, den) in [(1, 3), (1, 2), (5, 7)] {
        let x = src.lo().clone() + src.length() * crate::scalar::ratio::<S>(num, den)?;
        if map.apply(&x)? != x.clone() + tau.clone() {
            return Ok(Some(format!("{w}: T_N({x}) is off")));
        }
    }
    Ok(None)
}

/// Runs the key translation check for every word of length `1..=max_len`
/// that is not all ones, in parallel.
pub fn verify_key_lemma<S: Scalar>(spec: &TnCantorSpec<S>, max_len: usize) -> Result<CheckReport> {
    if max_len > spec.spec().depth() {
        return Err(IetError::DepthExceeded {
            depth: max_len,
            max: spec.spec().depth(),
        });
    }
    let map = ReversalMap::<S>::new(spec.n().clone())?;
    let words: Vec<Word> = (1..=max_len)
        .flat_map(Word::all_of_length)
        .filter(|w| !w.is_all_ones())
        .collect();
    let results = words
        .par_iter()
        .map(|w| check_key_word(spec, &map, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_results(results))
}

/// Checks `T_N(h(w0̄)) = h(f(w)0̄)` for each word; words without a 0 are
/// rejected.
pub fn verify_conjugacy<S: Scalar>(spec: &TnCantorSpec<S>, words: &[Word]) -> Result<CheckReport> {
    let map = ReversalMap::<S>::new(spec.n().clone())?;
    let results = words
        .par_iter()
        .map(|w| {
            if w.first_zero().is_none() {
                return Err(IetError::InvalidArgument(format!("{w} has no zero")));
            }
            let alpha = AdicSeq::new(w.clone(), Tail::AllZeros);
            let x = h_eval(spec.spec(), &alpha)?;
            let lhs = map.apply(&x)?;
            let rhs = h_eval(spec.spec(), &odometer_step(&alpha)?)?;
            Ok((lhs != rhs).then(|| format!("{alpha}: T_N(h) = {lhs}, h(f) = {rhs}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_results(results))
}

/// `count` seeded random words of length `1..=max_len`, each with a 0.
pub fn sample_words(count: usize, max_len: usize, seed: u64) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let len = rng.gen_range(1..=max_len.max(1));
        let w = Word::from_digits((0..len).map(|_| rng.gen_range(0..2u8)).collect())
            .expect("binary digits");
        if !w.is_all_ones() {
            out.push(w);
        }
    }
    out
}

/// What the address of `x` says about its orbit under `T_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// `x` lies in a gap of the Cantor construction and is periodic; the
    /// period comes from iteration and may exceed the cap.
    Periodic { word: Word, period: PeriodOutcome },
    /// `x` is a right endpoint of a left child, also periodic.
    BoundaryPeriodic { word: Word, period: PeriodOutcome },
    /// `x` stayed inside the construction down to the requested depth; no
    /// verdict either way.
    InCantorPrefix(Word),
}

impl Classification {
    pub fn is_periodic(&self) -> bool {
        !matches!(self, Classification::InCantorPrefix(_))
    }

    pub fn period(&self) -> Option<PeriodOutcome> {
        match self {
            Classification::Periodic { period, .. }
            | Classification::BoundaryPeriodic { period, .. } => Some(*period),
            Classification::InCantorPrefix(_) => None,
        }
    }
}

/// Classifies `x ∈ [0, 1/N)` by its address up to `depth`, iterating at most
/// `iteration_cap` steps to find the period of periodic points.
pub fn classify<S: Scalar>(
    spec: &TnCantorSpec<S>,
    x: &S,
    depth: usize,
    iteration_cap: u64,
) -> Result<Classification> {
    let map = ReversalMap::<S>::new(spec.n().clone())?;
    map.domain().check_member(x)?;
    Ok(match address(spec.spec(), x, depth)? {
        AddressResult::Prefix(word) => Classification::InCantorPrefix(word),
        AddressResult::Gap { word, .. } => Classification::Periodic {
            word,
            period: map.least_period(x, iteration_cap)?,
        },
        AddressResult::RightEndpoint(word) => Classification::BoundaryPeriodic {
            word,
            period: map.least_period(x, iteration_cap)?,
        },
    })
}

/// The spec of `T_N` at the default depth; `N` as a machine integer.
pub fn tn_spec<S: Scalar>(n: u64, depth: usize) -> Result<TnCantorSpec<S>> {
    TnCantorSpec::new(BigUint::from(n), depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reversal::tn_eval;
    use crate::scalar::ratio;
    use crate::Rat;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        ratio(n, d).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn key_translation_examples() {
        let t1: TnCantorSpec = tn_spec(1, 8).unwrap();
        assert_eq!(key_translation(&t1, 0).unwrap(), r(1, 2));
        assert_eq!(key_translation(&t1, 1).unwrap(), r(-1, 6));
        let t2: TnCantorSpec = tn_spec(2, 8).unwrap();
        assert_eq!(key_translation(&t2, 0).unwrap(), r(1, 3));
    }

    #[test]
    fn key_lemma_examples() {
        let t1: TnCantorSpec = tn_spec(1, 8).unwrap();
        let s = t1.spec();
        let i0 = interval_of_word(s, &w("0")).unwrap().star();
        let i1 = interval_of_word(s, &w("1")).unwrap().star();
        assert_eq!(i0.translate(&r(1, 2)), i1);
        let i10 = interval_of_word(s, &w("10")).unwrap().star();
        let i01 = interval_of_word(s, &w("01")).unwrap().star();
        assert_eq!((i10.lo().clone(), i10.hi().clone()), (r(1, 2), r(2, 3)));
        assert_eq!(i10.translate(&r(-1, 6)), i01);
        assert_eq!(tn_eval(1, &r(1, 2)).unwrap(), r(1, 3));
    }

    #[test]
    fn key_lemma_small() {
        for n in 1..=3 {
            let spec: TnCantorSpec = tn_spec(n, 8).unwrap();
            let rep = verify_key_lemma(&spec, 6).unwrap();
            assert!(rep.passed(), "N={n}: {rep}");
            assert_eq!(rep.cases, (1..=6).map(|k| (1usize << k) - 1).sum::<usize>());
        }
    }

    #[test]
    fn conjugacy_examples() {
        let t1: TnCantorSpec = tn_spec(1, 8).unwrap();
        let rep = verify_conjugacy(&t1, &[w("0"), w("1"), w("1100")]);
        // "1" has no zero
        assert!(rep.is_err());
        let rep = verify_conjugacy(&t1, &[w("0"), w("10"), w("1100")]).unwrap();
        assert!(rep.passed(), "{rep}");
        let h = |a: &str| h_eval(t1.spec(), &a.parse().unwrap()).unwrap();
        assert_eq!(tn_eval(1, &h("+0")).unwrap(), h("1+0"));
        assert_eq!(tn_eval(1, &h("1+0")).unwrap(), h("01+0"));
        assert_eq!(h("11+0"), r(5, 6));
        assert_eq!(h("001+0"), r(1, 7));
    }

    #[test]
    fn sampled_words_are_reproducible() {
        let a = sample_words(50, 10, 7);
        assert_eq!(a, sample_words(50, 10, 7));
        assert!(a
            .iter()
            .all(|w| (1..=10).contains(&w.len()) && !w.is_all_ones()));
        assert_ne!(a, sample_words(50, 10, 8));
    }

    #[test]
    fn classification_examples() {
        let t1: TnCantorSpec = tn_spec(1, 16).unwrap();
        assert_eq!(
            classify(&t1, &r(1, 4), 8, 100_000).unwrap(),
            Classification::Periodic {
                word: w("0"),
                period: PeriodOutcome::Found(20)
            }
        );
        assert_eq!(
            classify(&t1, &r(0, 1), 12, 1000).unwrap(),
            Classification::InCantorPrefix(Word::zeros(12))
        );
        let b = classify(&t1, &r(1, 6), 8, 100_000).unwrap();
        assert!(
            matches!(
                b,
                Classification::BoundaryPeriodic { ref word, period: PeriodOutcome::Found(_) } if *word == w("00")
            ),
            "{b:?}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn deeper_classification_never_overturns(num in 0i64..400, den in 1i64..400) {
            let t1: TnCantorSpec = tn_spec(1, 16).unwrap();
            let x = r(num % den, den);
            let shallow = classify(&t1, &x, 4, 5000).unwrap();
            let deep = classify(&t1, &x, 12, 5000).unwrap();
            if shallow.is_periodic() {
                prop_assert_eq!(shallow, deep);
            }
        }
    }
}
