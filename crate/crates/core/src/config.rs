//! Problem files.
//!
//! ```toml
//! rate = 0.75
//! source = [0.025, 0.975]
//! channel = [
//!     [0.9998, 0.0001, 0.0001],
//!     [0.0001, 0.9998, 0.0001],
//!     [0.1, 0.1, 0.8],
//! ]
//! # optional fixed pair for the two-class exponent
//! distributions = [[0.4, 0.4, 0.2], [0.5, 0.5, 0.0]]
//! baseline = true
//!
//! [grid]            # all keys optional
//! rho_min = 1.0
//! rho_max = 100.0
//! num_points = 2000
//! spacing = "geometric"
//!
//! [solver]          # all keys optional
//! starts = 16
//! seed = 0
//! ```

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::error::Error;
use crate::simplex::SolverConfig;
use crate::types::{
    ChannelSpec, DistributionSet, InputDistribution, ProblemSpec, RhoGrid, SourceSpec, Spacing,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column}: invalid `{key}`: {source}")]
    Invalid {
        line: usize,
        column: usize,
        key: &'static str,
        #[source]
        source: Error,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    title: Option<String>,
    rate: Spanned<f64>,
    source: Spanned<Vec<f64>>,
    channel: Spanned<Vec<Spanned<Vec<f64>>>>,
    distributions: Option<Spanned<Vec<Vec<f64>>>>,
    #[serde(default = "default_true")]
    baseline: bool,
    grid: Option<Spanned<RawGrid>>,
    #[serde(default)]
    solver: SolverConfig,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    rho_min: Option<f64>,
    rho_max: Option<f64>,
    num_points: Option<usize>,
    spacing: Option<Spacing>,
}

/// A loaded and validated problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub title: Option<String>,
    pub problem: ProblemSpec,
    pub pair: Option<DistributionSet>,
    pub grid: RhoGrid,
    pub solver: SolverConfig,
    pub baseline: bool,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn invalid(text: &str, span: Range<usize>, key: &'static str, source: Error) -> ConfigError {
    let (line, column) = line_col(text, span.start);
    ConfigError::Invalid {
        line,
        column,
        key,
        source,
    }
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            ConfigError::Parse {
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })?;

        let rows: Vec<Vec<f64>> = raw.channel.get_ref().iter().map(|r| r.get_ref().clone()).collect();
        let channel = ChannelSpec::new(rows).map_err(|e| {
            let span = match &e {
                Error::NonStochasticRow { row, .. } => raw.channel.get_ref()[*row].span(),
                _ => raw.channel.span(),
            };
            invalid(text, span, "channel", e)
        })?;
        let source = SourceSpec::new(raw.source.get_ref().clone())
            .map_err(|e| invalid(text, raw.source.span(), "source", e))?;
        let problem = ProblemSpec::new(channel, source, *raw.rate.get_ref())
            .map_err(|e| invalid(text, raw.rate.span(), "rate", e))?;

        let pair = match &raw.distributions {
            None => None,
            Some(d) => {
                let err = |e| invalid(text, d.span(), "distributions", e);
                if d.get_ref().len() != 2 {
                    return Err(err(Error::DimensionMismatch {
                        what: "two-class distribution list",
                        expected: 2,
                        got: d.get_ref().len(),
                    }));
                }
                let members = d
                    .get_ref()
                    .iter()
                    .map(|v| InputDistribution::new(v.clone()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                for q in &members {
                    q.check_for(problem.channel()).map_err(err)?;
                }
                Some(DistributionSet::new(members).map_err(err)?)
            }
        };

        let empty = RawGrid::default();
        let (g, grid_span) = match &raw.grid {
            Some(s) => (s.get_ref(), s.span()),
            None => (&empty, 0..0),
        };
        let defaults = RhoGrid::default();
        let grid = RhoGrid::new(
            g.rho_min.unwrap_or(defaults.rho_min()),
            g.rho_max.unwrap_or(defaults.rho_max()),
            g.num_points.unwrap_or(defaults.num_points()),
            g.spacing.unwrap_or(defaults.spacing()),
        )
        .and_then(|grid| grid.require_expurgated().map(|_| grid))
        .map_err(|e| invalid(text, grid_span, "grid", e))?;

        Ok(Self {
            title: raw.title,
            problem,
            pair,
            grid,
            solver: raw.solver,
            baseline: raw.baseline,
        })
    }
}
