//! Least-period spectra of finite rational IETs.
//!
//! Every orbit of a rational IET is periodic, so the domain splits into
//! invariant components on which the least period is constant. [`decompose`]
//! finds them by induction (see [`tower`]) rather than iteration, which makes
//! periods of order `10^13` cheap. The lattice oracle and cross-validation
//! provide independent checks by brute force.

mod oracle;
mod report;
pub mod tower;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::Result;
use crate::iet::FiniteIet;
use crate::scalar::Scalar;
use crate::Rat;

pub use oracle::{lattice_oracle, LatticeOracleResult};
pub use report::{
    cross_validate, cross_validate_components, divisibility_report, CrossValidation,
    DivisibilityReport, DivisibilityRow, SampleOutcome, SampleStatus,
};
pub use tower::{Component, Move, TowerIet, TowerPiece};

use tower::Track;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectrumEntry<S = Rat> {
    pub period: BigUint,
    pub measure: S,
}

/// Least periods in increasing order, each with the Lebesgue measure of the
/// set of points having that least period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodSpectrum<S = Rat> {
    pub entries: Vec<SpectrumEntry<S>>,
    pub domain_length: S,
}

#[derive(Serialize)]
struct EntryRepr {
    period: String,
    measure: String,
}

#[derive(Serialize)]
struct SpectrumRepr {
    entries: Vec<EntryRepr>,
    domain_length: String,
}

impl<S: Scalar> PeriodSpectrum<S> {
    /// Merges components by period.
    pub fn from_components(components: &[Component<S>], domain_length: S) -> Self {
        let mut by_period: BTreeMap<BigUint, S> = BTreeMap::new();
        for c in components {
            let slot = by_period.entry(c.period.clone()).or_insert_with(S::zero);
            *slot = slot.clone() + c.measure.clone();
        }
        Self {
            entries: by_period
                .into_iter()
                .map(|(period, measure)| SpectrumEntry { period, measure })
                .collect(),
            domain_length,
        }
    }

    pub fn periods(&self) -> Vec<BigUint> {
        self.entries.iter().map(|e| e.period.clone()).collect()
    }

    pub fn total_measure(&self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, e| acc + e.measure.clone())
    }

    pub fn measure_of(&self, period: &BigUint) -> Option<&S> {
        self.entries
            .iter()
            .find(|e| &e.period == period)
            .map(|e| &e.measure)
    }

    pub fn to_json(&self) -> String {
        let repr = SpectrumRepr {
            entries: self
                .entries
                .iter()
                .map(|e| EntryRepr {
                    period: e.period.to_string(),
                    measure: e.measure.to_string(),
                })
                .collect(),
            domain_length: self.domain_length.to_string(),
        };
        serde_json::to_string(&repr).expect("string-only JSON")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("period,measure\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.period, e.measure));
        }
        out
    }
}

/// The full result of an induction run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<S = Rat> {
    pub spectrum: PeriodSpectrum<S>,
    /// Components in the order they split off.
    pub components: Vec<Component<S>>,
    /// Number of induction moves taken.
    pub moves: u64,
}

impl<S: Scalar> Decomposition<S> {
    /// The component whose base contains `x`, if any.
    pub fn component_with_base_at(&self, x: &S) -> Option<&Component<S>> {
        self.components.iter().find(|c| c.base.contains(x))
    }
}

pub fn decompose_with_components<S: Scalar>(iet: &FiniteIet<S>) -> Result<Decomposition<S>> {
    let mut tower = TowerIet::new(iet)?;
    tower.run();
    let components = tower.components()?;
    Ok(Decomposition {
        spectrum: PeriodSpectrum::from_components(&components, iet.domain().length()),
        components,
        moves: tower.moves(),
    })
}

/// Exact least-period spectrum of a valid finite IET.
pub fn decompose<S: Scalar>(iet: &FiniteIet<S>) -> Result<PeriodSpectrum<S>> {
    decompose_with_components(iet).map(|d| d.spectrum)
}

/// Least periods of the given points, read off by following each point
/// through the induction.
pub fn periods_of_points<S: Scalar>(iet: &FiniteIet<S>, points: &[S]) -> Result<Vec<BigUint>> {
    let (mut tower, mut tracks) = TowerIet::with_points(iet, points)?;
    tower.run_tracking(&mut tracks);
    Ok(tracks
        .into_iter()
        .map(|t| match t {
            Track::Period(p) => p,
            Track::Active(_) => unreachable!("every point ends in a component"),
        })
        .collect())
}

pub fn period_of_point<S: Scalar>(iet: &FiniteIet<S>, x: &S) -> Result<BigUint> {
    periods_of_points(iet, std::slice::from_ref(x)).map(|mut v| v.remove(0))
}
