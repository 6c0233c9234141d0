//! Exact-arithmetic toolkit for the reversal interval exchange maps `T_N`,
//! their finite restrictions `R_{m,n}`, periodic decompositions of rational
//! IETs, and the associated Cantor sets and 2-adic odometer.
//!
//! Everything is generic over an exact [`Scalar`]; [`Rat`] (arbitrary
//! precision) is the default, [`Rat64`] and [`Rat128`] trade range for speed
//! and report overflow as [`IetError::Unrepresentable`].

pub mod cantor;
pub mod compose;
pub mod decompose;
pub mod error;
pub mod identities;
pub mod iet;
pub mod interval;
pub mod map;
pub mod orbit;
pub mod render;
pub mod return_map;
pub mod reversal;
pub mod scalar;

pub use compose::{compose_restricted, ComposeOptions};
pub use decompose::{decompose, lattice_oracle, PeriodSpectrum};
pub use error::{IetError, Result};
pub use iet::{rmn_build, FiniteIet, Piece, ValidationReport, Violation};
pub use interval::HalfOpenInterval;
pub use map::{IntervalMap, Segment};
pub use orbit::{least_period_direct, orbit, OrbitRecord, PeriodOutcome};
pub use return_map::{first_return_map, verify_return_lemma, ReturnMapResult};
pub use reversal::{piece_index, tn_eval, tn_inverse, ReversalMap};
pub use scalar::{format_rat, parse_rat, Scalar};

pub type Rat = num_rational::BigRational;
pub type Rat64 = num_rational::Ratio<i64>;
pub type Rat128 = num_rational::Ratio<i128>;
