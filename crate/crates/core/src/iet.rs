//! Finite interval exchange transformations with exact rational data.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{IetError, Result};
use crate::interval::HalfOpenInterval;
use crate::map::IntervalMap;
use crate::orbit::{least_period_generic, PeriodOutcome, ScaledIet};
use crate::scalar::{parse_rat, recip_big, Scalar};
use crate::Rat;

/// One piece of a finite IET: the points of `interval` move by `translation`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece<S = Rat> {
    pub interval: HalfOpenInterval<S>,
    pub translation: S,
}

impl<S: Scalar> Piece<S> {
    pub fn new(interval: HalfOpenInterval<S>, translation: S) -> Self {
        Self {
            interval,
            translation,
        }
    }

    pub fn image(&self) -> HalfOpenInterval<S> {
        self.interval.translate(&self.translation)
    }
}

/// A finite piecewise translation of `domain`.
///
/// Pieces are kept sorted by left endpoint. Two values are structurally equal
/// when their piece lists agree exactly. A value built with
/// [`FiniteIet::from_parts`] may violate the IET invariants; [`validate`]
/// reports which.
///
/// [`validate`]: FiniteIet::validate
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteIet<S = Rat> {
    domain: HalfOpenInterval<S>,
    pieces: Vec<Piece<S>>,
}

/// An invariant a [`FiniteIet`] fails to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DomainNotTiled { detail: String },
    ImageOutsideDomain { piece: usize },
    ImagesNotDisjoint { first: usize, second: usize },
    MeasureNotPreserved,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DomainNotTiled { detail } => write!(f, "domain not tiled ({detail})"),
            Violation::ImageOutsideDomain { piece } => {
                write!(f, "image outside domain (piece {piece})")
            }
            Violation::ImagesNotDisjoint { first, second } => {
                write!(f, "images not disjoint (pieces {first} and {second})")
            }
            Violation::MeasureNotPreserved => write!(f, "measure not preserved"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let msgs: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

impl<S: Scalar> FiniteIet<S> {
    /// Builds an IET and checks every invariant.
    pub fn new(domain: HalfOpenInterval<S>, pieces: Vec<Piece<S>>) -> Result<Self> {
        let iet = Self::from_parts(domain, pieces);
        let report = iet.validate();
        if report.is_valid() {
            Ok(iet)
        } else {
            Err(IetError::InvalidIet(report.to_string()))
        }
    }

    /// Builds without validation; pieces are sorted by left endpoint.
    pub fn from_parts(domain: HalfOpenInterval<S>, mut pieces: Vec<Piece<S>>) -> Self {
        pieces.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));
        Self { domain, pieces }
    }

    pub fn identity(domain: HalfOpenInterval<S>) -> Self {
        let piece = Piece::new(domain.clone(), S::zero());
        Self {
            domain,
            pieces: vec![piece],
        }
    }

    pub fn domain(&self) -> &HalfOpenInterval<S> {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece<S>] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<Piece<S>> {
        self.pieces
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let d = &self.domain;

        match self.pieces.first() {
            None => violations.push(Violation::DomainNotTiled {
                detail: "no pieces".into(),
            }),
            Some(first) if first.interval.lo() != d.lo() => {
                violations.push(Violation::DomainNotTiled {
                    detail: format!("first piece starts at {}", first.interval.lo()),
                })
            }
            _ => {}
        }
        if let Some(last) = self.pieces.last() {
            if last.interval.hi() != d.hi() {
                violations.push(Violation::DomainNotTiled {
                    detail: format!("last piece ends at {}", last.interval.hi()),
                });
            }
        }
        for (i, w) in self.pieces.windows(2).enumerate() {
            if w[0].interval.hi() != w[1].interval.lo() {
                violations.push(Violation::DomainNotTiled {
                    detail: format!("pieces {} and {} do not abut", i, i + 1),
                });
            }
        }

        for (i, p) in self.pieces.iter().enumerate() {
            if !d.contains_interval(&p.image()) {
                violations.push(Violation::ImageOutsideDomain { piece: i });
            }
        }

        let mut images: Vec<(usize, HalfOpenInterval<S>)> =
            self.pieces.iter().map(Piece::image).enumerate().collect();
        images.sort_by(|a, b| a.1.lo().cmp(b.1.lo()));
        for w in images.windows(2) {
            if w[0].1.overlaps(&w[1].1) {
                let (a, b) = (w[0].0.min(w[1].0), w[0].0.max(w[1].0));
                violations.push(Violation::ImagesNotDisjoint {
                    first: a,
                    second: b,
                });
            }
        }

        let total = self
            .pieces
            .iter()
            .fold(S::zero(), |acc, p| acc + p.interval.length());
        if total != d.length() {
            violations.push(Violation::MeasureNotPreserved);
        }

        ValidationReport { violations }
    }

    fn index_of(&self, x: &S) -> Option<usize> {
        let i = self.pieces.partition_point(|p| p.interval.lo() <= x);
        let i = i.checked_sub(1)?;
        self.pieces[i].interval.contains(x).then_some(i)
    }

    /// The inverse map; `None` unless the IET is valid.
    pub fn inverse(&self) -> Option<Self> {
        if !self.validate().is_valid() {
            return None;
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece::new(p.image(), -p.translation.clone()))
            .collect();
        Some(Self::from_parts(self.domain.clone(), pieces))
    }

    /// Restriction to an invariant subinterval.
    pub fn restrict(&self, window: &HalfOpenInterval<S>) -> Result<Self> {
        let pieces: Vec<Piece<S>> = self
            .pieces
            .iter()
            .filter_map(|p| {
                p.interval
                    .intersect(window)
                    .map(|iv| Piece::new(iv, p.translation.clone()))
            })
            .collect();
        let iet = Self::from_parts(window.clone(), pieces);
        let report = iet.validate();
        if report.is_valid() {
            Ok(iet)
        } else {
            Err(IetError::NotInvariant)
        }
    }
}

impl<S: Scalar> IntervalMap<S> for FiniteIet<S> {
    fn domain(&self) -> &HalfOpenInterval<S> {
        &self.domain
    }

    fn piece_at(&self, x: &S) -> Result<(HalfOpenInterval<S>, S)> {
        self.domain.check_member(x)?;
        let i = self.index_of(x).ok_or_else(|| IetError::OutOfDomain {
            value: x.to_string(),
            domain: "the union of the pieces".into(),
        })?;
        let p = &self.pieces[i];
        Ok((p.interval.clone(), p.translation.clone()))
    }

    fn least_period(&self, x: &S, cap: u64) -> Result<PeriodOutcome> {
        self.domain.check_member(x)?;
        match ScaledIet::new(self, x) {
            Some((scaled, start)) => Ok(scaled.least_period(start, cap)),
            None => least_period_generic(self, x, cap),
        }
    }
}

/// The reversal IET `R_{m,n}` on `[1/m, 1/n)`.
///
/// With `c = 1/m + 1/n`, the piece `[c - 1/k, c - 1/(k+1))` is carried onto
/// `[1/(k+1), 1/k)` for `n <= k < m`, so the images are the intervals
/// `[1/(k+1), 1/k)` with their left-to-right order reversed. This is the same
/// closed form as `T_N` with `1/N` replaced by `c`; in particular the
/// restriction of `T_N` to `[1/(N(N+1)), 1/(N+1))` is `R_{N(N+1), N+1}`.
pub fn rmn_build<S: Scalar>(m: u64, n: u64) -> Result<FiniteIet<S>> {
    if n == 0 || m <= n {
        return Err(IetError::InvalidArgument(format!(
            "R_{{m,n}} needs m > n > 0, got m={m}, n={n}"
        )));
    }
    let inv = |k: u64| recip_big::<S>(&BigUint::from(k));
    let c = inv(m)? + inv(n)?;
    let mut pieces = Vec::with_capacity((m - n) as usize);
    for k in n..m {
        let (ik, ik1) = (inv(k)?, inv(k + 1)?);
        let interval = HalfOpenInterval::new(c.clone() - ik.clone(), c.clone() - ik1.clone())?;
        pieces.push(Piece::new(interval, ik + ik1 - c.clone()));
    }
    let domain = HalfOpenInterval::new(inv(m)?, inv(n)?)?;
    FiniteIet::new(domain, pieces)
}

// ---------------------------------------------------------------------------
// JSON form: every value is a "p/q" string.

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    lo: String,
    hi: String,
    translation: String,
}

#[derive(Serialize, Deserialize)]
struct IetRepr {
    domain: IntervalRepr,
    pieces: Vec<PieceRepr>,
}

impl<S: Scalar> FiniteIet<S> {
    pub fn to_json(&self) -> String {
        let repr = IetRepr {
            domain: IntervalRepr {
                lo: self.domain.lo().to_string(),
                hi: self.domain.hi().to_string(),
            },
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceRepr {
                    lo: p.interval.lo().to_string(),
                    hi: p.interval.hi().to_string(),
                    translation: p.translation.to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&repr).expect("string-only JSON")
    }

    /// Parses the JSON form. The result is not validated.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: IetRepr =
            serde_json::from_str(text).map_err(|e| IetError::Parse(e.to_string()))?;
        let domain =
            HalfOpenInterval::new(parse_rat(&repr.domain.lo)?, parse_rat(&repr.domain.hi)?)?;
        let pieces = repr
            .pieces
            .iter()
            .map(|p| {
                Ok(Piece::new(
                    HalfOpenInterval::new(parse_rat(&p.lo)?, parse_rat(&p.hi)?)?,
                    parse_rat(&p.translation)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(domain, pieces))
    }
}
