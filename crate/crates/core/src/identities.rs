//! Structural identities linking `T_1`, `T_6` and the finite reversals
//! `R_{m,n}`, checked by exact composition.
//!
//! The claimed list has one entry that does not hold: `T_1^8` on
//! `[1/15, 1/10)` is `R_{15,10}` applied twice, not once. The check reports
//! it as failing and adds the identities that do hold there.

use rayon::prelude::*;
use serde::Serialize;

use crate::compose::{compose_restricted, ComposeOptions};
use crate::error::Result;
use crate::iet::{rmn_build, FiniteIet};
use crate::interval::HalfOpenInterval;
use crate::reversal::ReversalMap;
use crate::scalar::{ratio, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// `false` for the supplementary identities.
    pub claimed: bool,
    pub detail: String,
}

fn window<S: Scalar>(m: i64, n: i64) -> Result<HalfOpenInterval<S>> {
    HalfOpenInterval::new(ratio(1, m)?, ratio(1, n)?)
}

fn iterate<S: Scalar>(n: u64, m: i64, k: i64, steps: u64) -> Result<FiniteIet<S>> {
    let map = ReversalMap::<S>::new(n)?;
    compose_restricted(&map, &window(m, k)?, steps, ComposeOptions::default())
}

fn compare<S: Scalar>(
    name: String,
    claimed: bool,
    lhs: &FiniteIet<S>,
    rhs: &FiniteIet<S>,
) -> IdentityCheck {
    let holds = lhs == rhs;
    let detail = if holds {
        format!("{} pieces, equal", lhs.pieces().len())
    } else {
        format!(
            "{} pieces vs {} pieces, first difference at piece {}",
            lhs.pieces().len(),
            rhs.pieces().len(),
            lhs.pieces()
                .iter()
                .zip(rhs.pieces())
                .position(|(a, b)| a != b)
                .unwrap_or(lhs.pieces().len().min(rhs.pieces().len()))
        )
    };
    IdentityCheck {
        name,
        holds,
        claimed,
        detail,
    }
}

fn invariance<S: Scalar>(name: String, claimed: bool, iet: &FiniteIet<S>) -> IdentityCheck {
    let report = iet.validate();
    IdentityCheck {
        name,
        holds: report.is_valid(),
        claimed,
        detail: if report.is_valid() {
            format!("{} pieces, image inside the window", iet.pieces().len())
        } else {
            report.to_string()
        },
    }
}

type Case = fn() -> Result<IdentityCheck>;

fn cases<S: Scalar>() -> Vec<Case> {
    vec![
        || {
            let t6 = iterate::<S>(6, 42, 7, 1)?;
            Ok(invariance(
                "[1/42,1/7) is invariant under T_6".into(),
                true,
                &t6,
            ))
        },
        || {
            let lhs = iterate::<S>(1, 42, 7, 4)?;
            Ok(compare(
                "T_1^4 on [1/42,1/7) = R_{42,7}".into(),
                true,
                &lhs,
                &rmn_build(42, 7)?,
            ))
        },
        || {
            let lhs = iterate::<S>(1, 15, 10, 8)?;
            Ok(compare(
                "T_1^8 on [1/15,1/10) = R_{15,10}".into(),
                true,
                &lhs,
                &rmn_build(15, 10)?,
            ))
        },
        || {
            let lhs = iterate::<S>(1, 15, 10, 8)?;
            Ok(invariance(
                "[1/15,1/10) is invariant under T_1^8".into(),
                false,
                &lhs,
            ))
        },
        || {
            let r = rmn_build::<S>(15, 10)?;
            let r2 = compose_restricted(&r, r.domain(), 2, ComposeOptions::default())?;
            let lhs = iterate::<S>(1, 15, 10, 8)?;
            Ok(compare(
                "T_1^8 on [1/15,1/10) = R_{15,10}^2".into(),
                false,
                &lhs,
                &r2,
            ))
        },
        || {
            let lhs = iterate::<S>(1, 15, 10, 4)?;
            Ok(compare(
                "T_1^4 on [1/15,1/10) = R_{15,10}".into(),
                false,
                &lhs,
                &rmn_build(15, 10)?,
            ))
        },
        || {
            let lhs = iterate::<S>(6, 15, 10, 1)?;
            Ok(compare(
                "T_6 on [1/15,1/10) = R_{15,10}".into(),
                false,
                &lhs,
                &rmn_build(15, 10)?,
            ))
        },
        || {
            let lhs = iterate::<S>(6, 42, 7, 1)?;
            Ok(compare(
                "T_6 on [1/42,1/7) = R_{42,7}".into(),
                false,
                &lhs,
                &rmn_build(42, 7)?,
            ))
        },
    ]
}

/// Runs every identity in parallel; results keep a fixed order.
pub fn verify_identities<S: Scalar>() -> Result<Vec<IdentityCheck>> {
    cases::<S>().par_iter().map(|case| case()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn identities() {
        let checks = verify_identities::<Rat>().unwrap();
        let failing: Vec<&str> = checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failing, ["T_1^8 on [1/15,1/10) = R_{15,10}"]);
        assert_eq!(checks.iter().filter(|c| c.claimed).count(), 3);
    }
}
