//! The common interface of the finite IETs and the reversal maps `T_N`.

use crate::error::{IetError, Result};
use crate::interval::HalfOpenInterval;
use crate::orbit::{least_period_generic, PeriodOutcome};
use crate::scalar::Scalar;

/// A one-to-one piecewise translation of a half-open interval.
pub trait IntervalMap<S: Scalar>: Sync {
    fn domain(&self) -> &HalfOpenInterval<S>;

    /// The maximal piece of continuity containing `x` and the translation
    /// applied on it.
    fn piece_at(&self, x: &S) -> Result<(HalfOpenInterval<S>, S)>;

    fn apply(&self, x: &S) -> Result<S> {
        let (_, t) = self.piece_at(x)?;
        Ok(x.clone() + t)
    }

    /// Least period of `x`, scanning at most `cap` iterates.
    ///
    /// Implementations may substitute a faster exact iteration; the result
    /// must agree with [`least_period_generic`].
    fn least_period(&self, x: &S, cap: u64) -> Result<PeriodOutcome> {
        least_period_generic(self, x, cap)
    }
}

impl<S: Scalar, M: IntervalMap<S> + ?Sized> IntervalMap<S> for &M {
    fn domain(&self) -> &HalfOpenInterval<S> {
        (**self).domain()
    }

    fn piece_at(&self, x: &S) -> Result<(HalfOpenInterval<S>, S)> {
        (**self).piece_at(x)
    }

    fn apply(&self, x: &S) -> Result<S> {
        (**self).apply(x)
    }

    fn least_period(&self, x: &S, cap: u64) -> Result<PeriodOutcome> {
        (**self).least_period(x, cap)
    }
}

/// A source segment together with the accumulated translation that carries
/// it to its current image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment<S> {
    pub source: HalfOpenInterval<S>,
    pub shift: S,
}

impl<S: Scalar> Segment<S> {
    pub fn new(source: HalfOpenInterval<S>, shift: S) -> Self {
        Self { source, shift }
    }

    pub fn image(&self) -> HalfOpenInterval<S> {
        self.source.translate(&self.shift)
    }
}

/// Applies `map` once to the image of `seg`, splitting the segment wherever
/// its image crosses a discontinuity. Fails once more than `cap` pieces are
/// produced, which is how accumulation points of infinite maps surface.
pub fn push_forward<S, M>(map: &M, seg: &Segment<S>, cap: usize) -> Result<Vec<Segment<S>>>
where
    S: Scalar,
    M: IntervalMap<S> + ?Sized,
{
    let image = seg.image();
    let mut out = Vec::new();
    let mut cur = image.lo().clone();
    while &cur < image.hi() {
        if out.len() >= cap {
            return Err(IetError::RefinementOverflow { cap });
        }
        let (piece, tau) = map.piece_at(&cur)?;
        let end = std::cmp::min(piece.hi(), image.hi()).clone();
        let source = HalfOpenInterval::new(
            cur.clone() - seg.shift.clone(),
            end.clone() - seg.shift.clone(),
        )?;
        out.push(Segment::new(source, seg.shift.clone() + tau));
        cur = end;
    }
    Ok(out)
}

/// Joins neighbouring segments that carry the same translation.
pub(crate) fn merge_segments<S: Scalar>(mut segs: Vec<Segment<S>>) -> Vec<Segment<S>> {
    segs.sort_by(|a, b| a.source.lo().cmp(b.source.lo()));
    let mut out: Vec<Segment<S>> = Vec::with_capacity(segs.len());
    for seg in segs {
        if let Some(last) = out.last_mut() {
            if last.source.hi() == seg.source.lo() && last.shift == seg.shift {
                last.source =
                    HalfOpenInterval::new(last.source.lo().clone(), seg.source.hi().clone())
                        .expect("abutting nonempty intervals");
                continue;
            }
        }
        out.push(seg);
    }
    out
}
