//! Accelerated right-end induction on a finite IET with integer data.
//!
//! All endpoints and translations are scaled by a common denominator so the
//! induction runs on integers. Each piece carries a height: the number of
//! original-map steps its points take to return to the current window. A
//! move shrinks the window `[a, b)` from the right and replaces the map by
//! its first return to the smaller window. When the rightmost piece ends up
//! mapped onto itself (translation zero) it is a periodic component: every
//! point in it has least period equal to its height, and the orbit sweeps a
//! set of measure `height * length`.
//!
//! Consecutive moves that would repeatedly cut by the same amount are
//! batched with an integer quotient, so the number of moves stays small even
//! when heights reach `10^13`.

use std::marker::PhantomData;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{IetError, Result};
use crate::iet::FiniteIet;
use crate::interval::HalfOpenInterval;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Slot {
    lo: BigInt,
    hi: BigInt,
    shift: BigInt,
    height: BigUint,
}

impl Slot {
    fn len(&self) -> BigInt {
        &self.hi - &self.lo
    }

    fn image_hi(&self) -> BigInt {
        &self.hi + &self.shift
    }

    fn image_lo(&self) -> BigInt {
        &self.lo + &self.shift
    }
}

/// A piece of the tower: the first-return map on the current window sends
/// `interval` by `translation`, after `height` steps of the original map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerPiece<S> {
    pub interval: HalfOpenInterval<S>,
    pub translation: S,
    pub height: BigUint,
}

/// A periodic component found by the induction. `base` is the piece that
/// became fixed; its orbit covers `height * |base|` of the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component<S> {
    pub base: HalfOpenInterval<S>,
    pub period: BigUint,
    pub measure: S,
}

/// The kind of induction move taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// The rightmost piece is fixed by the induced map and leaves as a
    /// component.
    Component,
    /// The rightmost piece is longer; it is cut `times` times at once.
    Top { times: BigInt },
    /// The piece landing at the right end is longer; cut `times` times.
    Bottom { times: BigInt },
    /// Both candidates have equal length and are composed.
    Tie,
}

/// Where a tracked point currently stands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Track {
    /// Scaled position of some point on the orbit, inside the window.
    Active(BigInt),
    Period(BigUint),
}

#[derive(Clone, Debug)]
pub struct TowerIet<S> {
    scale: BigInt,
    b: BigInt,
    slots: Vec<Slot>,
    components: Vec<(BigInt, BigInt, BigUint)>,
    moves: u64,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> TowerIet<S> {
    /// Starts the induction on a valid IET; every height is 1.
    pub fn new(iet: &FiniteIet<S>) -> Result<Self> {
        Self::with_points(iet, &[]).map(|(t, _)| t)
    }

    /// Also scales `points` so they can be tracked through the induction.
    pub(crate) fn with_points(iet: &FiniteIet<S>, points: &[S]) -> Result<(Self, Vec<Track>)> {
        let report = iet.validate();
        if !report.is_valid() {
            return Err(IetError::InvalidIet(report.to_string()));
        }
        let mut scale = BigInt::one();
        for p in iet.pieces() {
            for v in [p.interval.lo(), p.interval.hi(), &p.translation] {
                scale = scale.lcm(&v.denom_big());
            }
        }
        for x in points {
            iet.domain().check_member(x)?;
            scale = scale.lcm(&x.denom_big());
        }
        let up = |v: &S| v.numer_big() * (&scale / v.denom_big());
        let slots = iet
            .pieces()
            .iter()
            .map(|p| Slot {
                lo: up(p.interval.lo()),
                hi: up(p.interval.hi()),
                shift: up(&p.translation),
                height: BigUint::one(),
            })
            .collect();
        let tracks = points.iter().map(|x| Track::Active(up(x))).collect();
        let tower = Self {
            b: up(iet.domain().hi()),
            scale,
            slots,
            components: Vec::new(),
            moves: 0,
            _scalar: PhantomData,
        };
        Ok((tower, tracks))
    }

    /// The common denominator used internally.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }

    pub fn is_finished(&self) -> bool {
        self.slots.is_empty()
    }

    fn down(&self, v: &BigInt) -> Result<S> {
        S::from_ratio(v, &self.scale)
            .ok_or_else(|| IetError::Unrepresentable(format!("{v}/{}", self.scale)))
    }

    fn interval(&self, lo: &BigInt, hi: &BigInt) -> Result<HalfOpenInterval<S>> {
        HalfOpenInterval::new(self.down(lo)?, self.down(hi)?)
    }

    /// The current window, `None` once everything has split off.
    pub fn window(&self) -> Result<Option<HalfOpenInterval<S>>> {
        match self.slots.first() {
            None => Ok(None),
            Some(first) => self.interval(&first.lo, &self.b).map(Some),
        }
    }

    pub fn pieces(&self) -> Result<Vec<TowerPiece<S>>> {
        self.slots
            .iter()
            .map(|s| {
                Ok(TowerPiece {
                    interval: self.interval(&s.lo, &s.hi)?,
                    translation: self.down(&s.shift)?,
                    height: s.height.clone(),
                })
            })
            .collect()
    }

    /// The components split off so far, in the order found.
    pub fn components(&self) -> Result<Vec<Component<S>>> {
        self.components
            .iter()
            .map(|(lo, hi, h)| {
                let measure = BigInt::from(h.clone()) * (hi - lo);
                Ok(Component {
                    base: self.interval(lo, hi)?,
                    period: h.clone(),
                    measure: self.down(&measure)?,
                })
            })
            .collect()
    }

    /// Performs one move; `None` when the induction is complete.
    pub fn step(&mut self) -> Option<Move> {
        self.step_tracking(&mut [])
    }

    pub(crate) fn step_tracking(&mut self, tracks: &mut [Track]) -> Option<Move> {
        let last = self.slots.len().checked_sub(1)?;
        self.moves += 1;
        let beta = self
            .slots
            .iter()
            .position(|s| s.image_hi() == self.b)
            .expect("some image ends at the right end of the window");

        if beta == last {
            let fixed = self.slots.pop().expect("nonempty");
            debug_assert!(fixed.shift.is_zero());
            for t in tracks.iter_mut() {
                if matches!(t, Track::Active(y) if *y >= fixed.lo) {
                    *t = Track::Period(fixed.height.clone());
                }
            }
            self.b = fixed.lo.clone();
            self.components.push((fixed.lo, fixed.hi, fixed.height));
            return Some(Move::Component);
        }

        let len_top = self.slots[last].len();
        let len_bottom = self.slots[beta].len();

        if len_top > len_bottom {
            let top = self.slots[last].clone();
            let image_hi = top.image_hi();
            let cut = &self.b - &image_hi;
            let times = batch(&len_top, &cut);
            if times.is_positive() {
                // points of the top piece near b slide left by `cut` until
                // they re-enter the window
                let new_b = &self.b - &times * &cut;
                for t in tracks.iter_mut() {
                    if let Track::Active(y) = t {
                        if *y >= new_b {
                            let k = (&*y - &new_b).div_floor(&cut) + 1;
                            *y -= k * &cut;
                        }
                    }
                }
                let hk = biguint(&times);
                for s in &mut self.slots[..last] {
                    if s.image_lo() >= image_hi {
                        s.shift += &times * &top.shift;
                        s.height += &hk * &top.height;
                    }
                }
                self.slots[last].hi -= &times * &cut;
                self.b = new_b;
                return Some(Move::Top { times });
            }
            let new_b = &self.b - &len_bottom;
            advance(tracks, &new_b, &top.shift);
            self.slots[beta].shift += &top.shift;
            self.slots[beta].height += &top.height;
            self.slots[last].hi -= &len_bottom;
            self.b = new_b;
            return Some(Move::Top {
                times: BigInt::one(),
            });
        }

        if len_bottom > len_top {
            let bottom = self.slots[beta].clone();
            let cut = &self.b - &bottom.hi;
            let times = batch(&len_bottom, &cut);
            if times.is_positive() {
                let new_b = &self.b - &times * &cut;
                for t in tracks.iter_mut() {
                    if let Track::Active(y) = t {
                        if *y >= new_b {
                            if *y < bottom.hi {
                                let k = (&bottom.hi - &*y).div_ceil(&cut);
                                *y += k * &cut;
                            }
                            let p = self.slots[beta + 1..]
                                .iter()
                                .find(|s| s.lo <= *y && *y < s.hi)
                                .expect("right of the bottom piece");
                            *y += &p.shift;
                        }
                    }
                }
                let hk = biguint(&times);
                let delta = &times * &cut;
                for s in &mut self.slots[beta + 1..] {
                    s.shift += &times * &bottom.shift;
                    s.height += &hk * &bottom.height;
                    s.lo -= &delta;
                    s.hi -= &delta;
                }
                self.slots[beta].hi -= &delta;
                self.b = new_b;
                return Some(Move::Bottom { times });
            }
            let mut top = self.slots.pop().expect("nonempty");
            let new_b = &self.b - &len_top;
            advance(tracks, &new_b, &top.shift);
            top.shift += &bottom.shift;
            top.height += &bottom.height;
            top.hi = bottom.hi.clone();
            top.lo = &bottom.hi - &len_top;
            self.slots[beta].hi -= &len_top;
            self.slots.insert(beta + 1, top);
            self.b = new_b;
            return Some(Move::Bottom {
                times: BigInt::one(),
            });
        }

        let top = self.slots.pop().expect("nonempty");
        let new_b = &self.b - &len_top;
        advance(tracks, &new_b, &top.shift);
        self.slots[beta].shift += &top.shift;
        self.slots[beta].height += &top.height;
        self.b = new_b;
        Some(Move::Tie)
    }

    /// Runs the induction to completion.
    pub fn run(&mut self) {
        while self.step().is_some() {}
    }

    pub(crate) fn run_tracking(&mut self, tracks: &mut [Track]) {
        while self.step_tracking(tracks).is_some() {}
    }
}

/// How many identical cuts of size `cut` fit in `len` while leaving a
/// nonempty remainder.
fn batch(len: &BigInt, cut: &BigInt) -> BigInt {
    let (q, r) = len.div_rem(cut);
    if r.is_zero() {
        q - 1
    } else {
        q
    }
}

/// Points in the cut-off region `[new_b, b)` take one step of the removed
/// piece, which lands them back in the window.
fn advance(tracks: &mut [Track], new_b: &BigInt, shift: &BigInt) {
    for t in tracks.iter_mut() {
        if let Track::Active(y) = t {
            if *y >= *new_b {
                *y += shift;
            }
        }
    }
}

fn biguint(n: &BigInt) -> BigUint {
    n.to_biguint().expect("nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::rmn_build;
    use crate::map::IntervalMap;
    use crate::Rat;
    use num_traits::ToPrimitive;

    // heights must be exact first-return times to the current window, and
    // the pieces must always form a valid IET of the window
    #[test]
    fn heights_are_first_return_times() {
        for (m, n) in [(6, 3), (12, 4), (15, 10)] {
            let iet: FiniteIet = rmn_build(m, n).unwrap();
            let mut tower = TowerIet::new(&iet).unwrap();
            let mut checked = 0;
            loop {
                if let Some(window) = tower.window().unwrap() {
                    let pieces = tower.pieces().unwrap();
                    let as_iet = FiniteIet::from_parts(
                        window.clone(),
                        pieces
                            .iter()
                            .map(|p| {
                                crate::iet::Piece::new(p.interval.clone(), p.translation.clone())
                            })
                            .collect(),
                    );
                    assert!(as_iet.validate().is_valid(), "{}", as_iet.validate());
                    for p in &pieces {
                        let h = p.height.to_u64().unwrap();
                        if h > 10_000 {
                            continue;
                        }
                        let x = p.interval.lo().clone()
                            + p.interval.length() / Rat::from_integer(3.into());
                        let mut y = x.clone();
                        for step in 1..=h {
                            y = iet.apply(&y).unwrap();
                            assert_eq!(window.contains(&y), step == h, "R_{{{m},{n}}} height {h}");
                        }
                        assert_eq!(y, x + p.translation.clone());
                        checked += 1;
                    }
                }
                if tower.step().is_none() {
                    break;
                }
            }
            assert!(checked > 0);
        }
    }

    #[test]
    fn identity_is_one_component() {
        let d = HalfOpenInterval::new(Rat::from_integer(0.into()), Rat::from_integer(1.into()))
            .unwrap();
        let mut tower = TowerIet::new(&FiniteIet::identity(d.clone())).unwrap();
        assert_eq!(tower.step(), Some(Move::Component));
        assert_eq!(tower.step(), None);
        let comps = tower.components().unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].base, d);
        assert_eq!(comps[0].period, BigUint::one());
    }

    #[test]
    fn invalid_input_rejected() {
        let d = HalfOpenInterval::new(Rat::from_integer(0.into()), Rat::from_integer(1.into()))
            .unwrap();
        let broken = FiniteIet::from_parts(
            d.clone(),
            vec![crate::iet::Piece::new(d, Rat::from_integer(1.into()))],
        );
        assert!(TowerIet::new(&broken).is_err());
    }
}
