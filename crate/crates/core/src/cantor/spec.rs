//! Nested-interval Cantor sets and the address map.
//!
//! Start from `[a0, b0]`. At level `k`, each interval `I_w` keeps a left
//! child `I_{w0}` and a right child `I_{w1}`, each of relative length `s_k`,
//! and drops the open middle. Level lengths are `l_0 = b0 - a0` and
//! `l_{k+1} = s_k l_k`. The address map sends a digit sequence `α` to
//! `a0 + Σ α_k (l_k - l_{k+1})`.

use num_bigint::BigUint;
use num_traits::Zero;

use super::word::{AdicSeq, Tail, Word};
use crate::error::{IetError, Result};
use crate::interval::HalfOpenInterval;
use crate::scalar::{half, recip_big, Scalar};
use crate::Rat;

/// Depth used when none is given.
pub const DEFAULT_DEPTH: usize = 16;
/// Deepest level ever computed; `N_k` has about `2^k` bits.
pub const MAX_DEPTH: usize = 24;

/// The data `(a0, b0, s_0, ..., s_depth)` with the derived level lengths.
/// Levels are computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorSpec<S = Rat> {
    a0: S,
    b0: S,
    ratios: Vec<S>,
    lengths: Vec<S>,
    degenerate: bool,
}

impl<S: Scalar> CantorSpec<S> {
    /// Builds the spec from the ratio generator `k ↦ s_k`, evaluated for
    /// `k <= depth`. Each ratio must satisfy `0 < s_k <= 1/2`.
    ///
    /// A finite prefix cannot certify `limsup s_k < 1/2`; the spec is flagged
    /// degenerate when the deepest computed ratio equals `1/2`.
    pub fn new(a0: S, b0: S, depth: usize, mut ratio: impl FnMut(usize) -> S) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(IetError::DepthExceeded {
                depth,
                max: MAX_DEPTH,
            });
        }
        if a0 >= b0 {
            return Err(IetError::EmptyInterval {
                lo: a0.to_string(),
                hi: b0.to_string(),
            });
        }
        let ratios: Vec<S> = (0..=depth).map(&mut ratio).collect();
        let mut lengths = Vec::with_capacity(depth + 2);
        lengths.push(b0.clone() - a0.clone());
        for s in &ratios {
            let next = lengths.last().expect("nonempty").clone() * s.clone();
            lengths.push(next);
        }
        Self::from_levels(a0, b0, ratios, lengths)
    }

    /// Takes precomputed lengths; `lengths[k + 1] = ratios[k] * lengths[k]`
    /// is the caller's responsibility.
    fn from_levels(a0: S, b0: S, ratios: Vec<S>, lengths: Vec<S>) -> Result<Self> {
        debug_assert_eq!(lengths.len(), ratios.len() + 1);
        if let Some((k, s)) = ratios
            .iter()
            .enumerate()
            .find(|(_, s)| **s <= S::zero() || **s > half())
        {
            return Err(IetError::InvalidArgument(format!(
                "ratio s_{k} = {s} is outside (0, 1/2]"
            )));
        }
        let degenerate = ratios.last() == Some(&half());
        Ok(Self {
            a0,
            b0,
            ratios,
            lengths,
            degenerate,
        })
    }

    /// Constant ratio `s` at every level.
    pub fn constant(a0: S, b0: S, s: S, depth: usize) -> Result<Self> {
        Self::new(a0, b0, depth, |_| s.clone())
    }

    pub fn a0(&self) -> &S {
        &self.a0
    }

    pub fn b0(&self) -> &S {
        &self.b0
    }

    /// Deepest level whose ratio is known.
    pub fn depth(&self) -> usize {
        self.ratios.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn ratio(&self, k: usize) -> Result<&S> {
        self.ratios.get(k).ok_or(IetError::DepthExceeded {
            depth: k,
            max: self.depth(),
        })
    }

    /// `l_k`, known for `k <= depth + 1`.
    pub fn length(&self, k: usize) -> Result<&S> {
        self.lengths.get(k).ok_or(IetError::DepthExceeded {
            depth: k,
            max: self.depth() + 1,
        })
    }

    /// Whether level `k` leaves a gap between the two children.
    pub fn has_gap(&self, k: usize) -> Result<bool> {
        Ok(self.ratio(k)? < &half())
    }
}

/// The Cantor spec attached to `T_N`: `N_0 = N`, `N_{k+1} = N_k (1 + N_k)`,
/// `s_k = 1/(1 + N_k)` on `[0, 1/N]`, so that `l_k = 1/N_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnCantorSpec<S = Rat> {
    n_seq: Vec<BigUint>,
    spec: CantorSpec<S>,
}

impl<S: Scalar> TnCantorSpec<S> {
    pub fn new(n: impl Into<BigUint>, depth: usize) -> Result<Self> {
        let n = n.into();
        if n.is_zero() {
            return Err(IetError::InvalidArgument("N must be positive".into()));
        }
        if depth > MAX_DEPTH {
            return Err(IetError::DepthExceeded {
                depth,
                max: MAX_DEPTH,
            });
        }
        let n_seq = crate::return_map::n_sequence(&n, depth + 2);
        let ratios = n_seq[..=depth]
            .iter()
            .map(|nk| recip_big::<S>(&(nk + 1u32)))
            .collect::<Result<Vec<S>>>()?;
        // l_k = 1/N_k directly, avoiding gcds of products of huge fractions
        let lengths = n_seq
            .iter()
            .map(recip_big::<S>)
            .collect::<Result<Vec<S>>>()?;
        let spec = CantorSpec::from_levels(S::zero(), lengths[0].clone(), ratios, lengths)?;
        Ok(Self { n_seq, spec })
    }

    pub fn n(&self) -> &BigUint {
        &self.n_seq[0]
    }

    /// `N_k` for `k <= depth + 1`.
    pub fn n_k(&self, k: usize) -> Result<&BigUint> {
        self.n_seq.get(k).ok_or(IetError::DepthExceeded {
            depth: k,
            max: self.n_seq.len() - 1,
        })
    }

    pub fn spec(&self) -> &CantorSpec<S> {
        &self.spec
    }
}

impl<S> AsRef<CantorSpec<S>> for CantorSpec<S> {
    fn as_ref(&self) -> &CantorSpec<S> {
        self
    }
}

impl<S> AsRef<CantorSpec<S>> for TnCantorSpec<S> {
    fn as_ref(&self) -> &CantorSpec<S> {
        &self.spec
    }
}

/// The closed interval `I_w = [lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordInterval<S = Rat> {
    pub word: Word,
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> WordInterval<S> {
    /// `I_w` with its right endpoint removed.
    pub fn star(&self) -> HalfOpenInterval<S> {
        HalfOpenInterval::new(self.lo.clone(), self.hi.clone()).expect("positive length")
    }
}

pub fn interval_of_word<S: Scalar>(spec: &CantorSpec<S>, w: &Word) -> Result<WordInterval<S>> {
    let (mut a, mut b) = (spec.a0.clone(), spec.b0.clone());
    for (k, d) in w.digits().iter().enumerate() {
        let child = spec.ratio(k)?.clone() * (b.clone() - a.clone());
        if *d == 0 {
            b = a.clone() + child;
        } else {
            a = b.clone() - child;
        }
    }
    debug_assert_eq!(
        (a.clone(), b.clone()),
        (
            h_eval(spec, &AdicSeq::new(w.clone(), Tail::AllZeros))?,
            h_eval(spec, &AdicSeq::new(w.clone(), Tail::AllOnes))?
        ),
        "I_w must equal [h(w0̄), h(w1̄)]"
    );
    Ok(WordInterval {
        word: w.clone(),
        lo: a,
        hi: b,
    })
}

/// `a0 + Σ α_k (l_k - l_{k+1})`; a tail of ones after `m` digits adds `l_m`.
pub fn h_eval<S: Scalar>(spec: &CantorSpec<S>, alpha: &AdicSeq) -> Result<S> {
    let mut x = spec.a0.clone();
    let prefix = alpha.prefix().digits();
    for (k, d) in prefix.iter().enumerate() {
        if *d == 1 {
            x = x + spec.length(k)?.clone() - spec.length(k + 1)?.clone();
        }
    }
    if alpha.tail() == Tail::AllOnes {
        x = x + spec.length(prefix.len())?.clone();
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AddressResult<S = Rat> {
    /// `x` lies in `I_w^⋆` for this word of the requested depth.
    Prefix(Word),
    /// `x` lies in the open gap `(lo, hi)` between the children of `I_w`.
    Gap { word: Word, lo: S, hi: S },
    /// `x` is the right endpoint of `I_w`, where `w` ends in 0 and the
    /// parent level has a gap.
    RightEndpoint(Word),
}

/// Descends the star intervals containing `x` for up to `depth` levels.
pub fn address<S: Scalar>(spec: &CantorSpec<S>, x: &S, depth: usize) -> Result<AddressResult<S>> {
    if x < &spec.a0 || x >= &spec.b0 {
        return Err(IetError::OutOfDomain {
            value: x.to_string(),
            domain: format!("[{},{})", spec.a0, spec.b0),
        });
    }
    let (mut a, mut b) = (spec.a0.clone(), spec.b0.clone());
    let mut word = Word::empty();
    for k in 0..depth {
        let s = spec.ratio(k)?.clone();
        let child = s.clone() * (b.clone() - a.clone());
        let left_hi = a.clone() + child.clone();
        let right_lo = b.clone() - child;
        if x < &left_hi {
            b = left_hi;
            word.push(0);
        } else if x >= &right_lo {
            a = right_lo;
            word.push(1);
        } else if x == &left_hi {
            return Ok(AddressResult::RightEndpoint(word.pushed(0)));
        } else {
            return Ok(AddressResult::Gap {
                word,
                lo: left_hi,
                hi: right_lo,
            });
        }
    }
    Ok(AddressResult::Prefix(word))
}

impl<S: Scalar> CantorSpec<S> {
    /// The level-`k` intervals `I_w`, `|w| = k`, in left-to-right order.
    pub fn level(&self, k: usize) -> Result<Vec<WordInterval<S>>> {
        if k > self.depth() + 1 {
            return Err(IetError::DepthExceeded {
                depth: k,
                max: self.depth() + 1,
            });
        }
        let mut out = vec![WordInterval {
            word: Word::empty(),
            lo: self.a0.clone(),
            hi: self.b0.clone(),
        }];
        for j in 0..k {
            let s = self.ratios[j].clone();
            out = out
                .into_iter()
                .flat_map(|iv| {
                    let child = s.clone() * (iv.hi.clone() - iv.lo.clone());
                    [
                        WordInterval {
                            word: iv.word.pushed(0),
                            lo: iv.lo.clone(),
                            hi: iv.lo.clone() + child.clone(),
                        },
                        WordInterval {
                            word: iv.word.pushed(1),
                            lo: iv.hi.clone() - child,
                            hi: iv.hi,
                        },
                    ]
                })
                .collect();
        }
        Ok(out)
    }
}
