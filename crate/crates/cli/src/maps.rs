//! Map specifications on the command line: `TN:<N>`, `R:<m>,<n>`,
//! `file:<path.json>`.

use std::str::FromStr;

use iet_core::{rmn_build, FiniteIet, IetError, IntervalMap, Rat, ReversalMap};
use num_bigint::BigUint;

pub enum MapArg {
    Reversal(ReversalMap),
    Finite {
        iet: FiniteIet,
        rmn: Option<(u64, u64)>,
    },
}

impl MapArg {
    pub fn as_map(&self) -> &dyn IntervalMap<Rat> {
        match self {
            MapArg::Reversal(t) => t,
            MapArg::Finite { iet, .. } => iet,
        }
    }

    /// Only finite exchanges can be decomposed or used as the lattice oracle.
    pub fn finite(&self) -> Result<&FiniteIet, IetError> {
        match self {
            MapArg::Finite { iet, .. } => Ok(iet),
            MapArg::Reversal(t) => Err(IetError::InvalidArgument(format!(
                "T_{} has infinitely many pieces; restrict it with `compose` first",
                t.n()
            ))),
        }
    }
}

fn parse_u64(text: &str, what: &str) -> Result<u64, IetError> {
    text.trim()
        .parse()
        .map_err(|_| IetError::Parse(format!("{what}: expected a positive integer, got {text:?}")))
}

impl FromStr for MapArg {
    type Err = IetError;

    fn from_str(s: &str) -> Result<Self, IetError> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| {
            IetError::Parse(format!(
                "map spec {s:?}: expected TN:<N>, R:<m>,<n> or file:<path>"
            ))
        })?;
        match kind {
            "TN" => {
                let n: BigUint = arg.trim().parse().map_err(|_| {
                    IetError::Parse(format!("TN: expected a positive integer, got {arg:?}"))
                })?;
                Ok(MapArg::Reversal(ReversalMap::new(n)?))
            }
            "R" => {
                let (m, n) = arg
                    .split_once(',')
                    .ok_or_else(|| IetError::Parse(format!("R: expected <m>,<n>, got {arg:?}")))?;
                let (m, n) = (parse_u64(m, "R")?, parse_u64(n, "R")?);
                Ok(MapArg::Finite {
                    iet: rmn_build(m, n)?,
                    rmn: Some((m, n)),
                })
            }
            "file" => {
                let text = std::fs::read_to_string(arg)
                    .map_err(|e| IetError::InvalidArgument(format!("cannot read {arg}: {e}")))?;
                let iet = FiniteIet::from_json(&text)?;
                let report = iet.validate();
                if !report.is_valid() {
                    return Err(IetError::InvalidIet(report.to_string()));
                }
                Ok(MapArg::Finite { iet, rmn: None })
            }
            _ => Err(IetError::Parse(format!("unknown map kind {kind:?}"))),
        }
    }
}
