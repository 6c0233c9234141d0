//! Iterates of a map restricted to a subinterval, by partition refinement.

use crate::error::{IetError, Result};
use crate::iet::{FiniteIet, Piece};
use crate::interval::HalfOpenInterval;
use crate::map::{merge_segments, push_forward, IntervalMap, Segment};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComposeOptions {
    /// Refinement stops with an error beyond this many pieces.
    pub piece_cap: usize,
    /// Fail unless the iterate maps the target into itself.
    pub require_invariant: bool,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        Self {
            piece_cap: 10_000,
            require_invariant: false,
        }
    }
}

/// `map^steps` on `target`, as a piecewise translation with maximal pieces.
///
/// The result has `target` as its domain. Without `require_invariant` its
/// images may leave the target; [`FiniteIet::validate`] then says so.
pub fn compose_restricted<S, M>(
    map: &M,
    target: &HalfOpenInterval<S>,
    steps: u64,
    opts: ComposeOptions,
) -> Result<FiniteIet<S>>
where
    S: Scalar,
    M: IntervalMap<S> + ?Sized,
{
    if steps == 0 {
        return Err(IetError::InvalidArgument("steps must be positive".into()));
    }
    if !map.domain().contains_interval(target) {
        return Err(IetError::OutOfDomain {
            value: target.to_string(),
            domain: map.domain().to_string(),
        });
    }
    let mut segs = vec![Segment::new(target.clone(), S::zero())];
    for _ in 0..steps {
        let mut next = Vec::with_capacity(segs.len());
        for seg in &segs {
            let budget = opts.piece_cap.saturating_sub(next.len());
            if budget == 0 {
                return Err(IetError::RefinementOverflow {
                    cap: opts.piece_cap,
                });
            }
            next.extend(push_forward(map, seg, budget).map_err(|e| match e {
                IetError::RefinementOverflow { .. } => IetError::RefinementOverflow {
                    cap: opts.piece_cap,
                },
                other => other,
            })?);
        }
        segs = next;
    }
    let pieces = merge_segments(segs)
        .into_iter()
        .map(|s| Piece::new(s.source, s.shift))
        .collect();
    let iet = FiniteIet::from_parts(target.clone(), pieces);
    if opts.require_invariant && !iet.validate().is_valid() {
        return Err(IetError::NotInvariant);
    }
    Ok(iet)
}
