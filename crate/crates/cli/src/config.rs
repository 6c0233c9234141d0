//! Run configuration: built-in defaults, optionally overridden by a plain
//! `key = value` file, then by command-line flags.

use std::fmt;
use std::str::FromStr;

use iet_core::cantor::{DEFAULT_DEPTH, MAX_DEPTH};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "text" => Ok(Self::Text),
            _ => Err(format!("unknown output format {s:?} (json, csv, text)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Text => "text",
        })
    }
}

fn as_decimal<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Serialized with every number as a decimal string, like all other output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    #[serde(serialize_with = "as_decimal")]
    pub depth_cap: usize,
    #[serde(serialize_with = "as_decimal")]
    pub iteration_cap: u64,
    #[serde(serialize_with = "as_decimal")]
    pub piece_cap: usize,
    #[serde(serialize_with = "as_decimal")]
    pub oracle_cap: u64,
    #[serde(serialize_with = "as_decimal")]
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            depth_cap: DEFAULT_DEPTH,
            iteration_cap: 10_000_000,
            piece_cap: 10_000,
            oracle_cap: 10_000_000,
            seed: 0,
            output_format: OutputFormat::Json,
        }
    }
}

/// Values given on the command line; `None` keeps the file or default value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub depth_cap: Option<usize>,
    pub iteration_cap: Option<u64>,
    pub piece_cap: Option<usize>,
    pub oracle_cap: Option<u64>,
    pub seed: Option<u64>,
    pub output_format: Option<OutputFormat>,
}

fn positive<T: FromStr + PartialEq + Default>(key: &str, value: &str) -> Result<T, String> {
    let v: T = value
        .parse()
        .map_err(|_| format!("{key}: expected a positive integer, got {value:?}"))?;
    if v == T::default() {
        return Err(format!("{key} must be positive"));
    }
    Ok(v)
}

impl RunConfig {
    /// Parses `key = value` lines over the defaults. Blank lines and lines
    /// starting with `#` are skipped; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let at = |e: String| format!("line {}: {e}", i + 1);
            match key {
                "depth_cap" => cfg.depth_cap = positive(key, value).map_err(at)?,
                "iteration_cap" => cfg.iteration_cap = positive(key, value).map_err(at)?,
                "piece_cap" => cfg.piece_cap = positive(key, value).map_err(at)?,
                "oracle_cap" => cfg.oracle_cap = positive(key, value).map_err(at)?,
                "seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| at(format!("seed: expected an integer, got {value:?}")))?
                }
                "output_format" => cfg.output_format = value.parse().map_err(at)?,
                _ => return Err(at(format!("unknown key {key:?}"))),
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self, String> {
        if let Some(v) = o.depth_cap {
            self.depth_cap = v;
        }
        if let Some(v) = o.iteration_cap {
            self.iteration_cap = v;
        }
        if let Some(v) = o.piece_cap {
            self.piece_cap = v;
        }
        if let Some(v) = o.oracle_cap {
            self.oracle_cap = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.output_format {
            self.output_format = v;
        }
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<(), String> {
        if self.depth_cap == 0
            || self.iteration_cap == 0
            || self.piece_cap == 0
            || self.oracle_cap == 0
        {
            return Err("caps must be positive".into());
        }
        if self.depth_cap > MAX_DEPTH {
            return Err(format!(
                "depth_cap {} is above the hard limit {MAX_DEPTH}",
                self.depth_cap
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(
            (
                c.depth_cap,
                c.iteration_cap,
                c.piece_cap,
                c.oracle_cap,
                c.seed
            ),
            (16, 10_000_000, 10_000, 10_000_000, 0)
        );
        assert_eq!(RunConfig::parse("").unwrap(), c);
    }

    #[test]
    fn file_then_flags() {
        let text = "# caps\npiece_cap = 500\n\nseed=9\noutput_format = csv\n";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(
            (c.piece_cap, c.seed, c.output_format),
            (500, 9, OutputFormat::Csv)
        );
        let c = c
            .apply(&Overrides {
                seed: Some(3),
                ..Default::default()
            })
            .unwrap();
        assert_eq!((c.piece_cap, c.seed), (500, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("piece_cap = 0").is_err());
        assert!(RunConfig::parse("piece_cap = -3").is_err());
        assert!(RunConfig::parse("depth_cap = 30").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("just text").is_err());
        assert!(RunConfig::parse("output_format = xml").is_err());
    }
}
