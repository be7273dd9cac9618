//! Versioned JSON job configuration.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use ucayley::orbits::{Selector, SubgroupSpec};
use ucayley::ring::{RingSpec, DEFAULT_SIZE_CAP};
use ucayley::spectra::{AXIOM_EXHAUSTIVE_CAP, DENSE_ORACLE_CAP};

use crate::CliError;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Structure,
    Spectrum,
    Charpoly,
    Prime,
    Pst,
    OracleVerify,
}

impl Analysis {
    pub const ALL: [Analysis; 6] = [
        Analysis::Structure,
        Analysis::Spectrum,
        Analysis::Charpoly,
        Analysis::Prime,
        Analysis::Pst,
        Analysis::OracleVerify,
    ];
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Formats {
    #[serde(default = "yes")]
    pub json: bool,
    #[serde(default)]
    pub dot: bool,
    #[serde(default)]
    pub csv: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats { json: true, dot: false, csv: false }
    }
}

fn default_ring_size() -> usize {
    DEFAULT_SIZE_CAP
}
fn default_oracle() -> usize {
    AXIOM_EXHAUSTIVE_CAP
}
fn default_dense() -> usize {
    DENSE_ORACLE_CAP
}
fn default_dot_edges() -> usize {
    ucayley::cayley::DOT_EDGE_CAP
}

/// Safety rails. `ring_size` may be lowered but never raised above the
/// engine's hard limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_ring_size")]
    pub ring_size: usize,
    /// Largest ring for the per-element spectrum oracle.
    #[serde(default = "default_oracle")]
    pub oracle: usize,
    /// Largest ring for the dense floating-point eigenvalue check.
    #[serde(default = "default_dense")]
    pub dense: usize,
    #[serde(default = "default_dot_edges")]
    pub dot_edges: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ring_size: default_ring_size(),
            oracle: default_oracle(),
            dense: default_dense(),
            dot_edges: default_dot_edges(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub ring: RingSpec,
    pub subgroup: SubgroupSpec,
    pub selector: Selector,
    pub analyses: Vec<Analysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub formats: Formats,
    #[serde(default)]
    pub caps: Caps,
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Validation { field: field.into(), message: message.into() }
}

impl JobConfig {
    /// Parses and validates.
    pub fn parse(text: &str) -> Result<JobConfig, CliError> {
        let config: JobConfig = serde_json::from_str(text).map_err(|e| invalid("config", e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.version != CONFIG_VERSION {
            return Err(invalid("version", format!("unsupported version {}, expected {CONFIG_VERSION}", self.version)));
        }
        if self.analyses.is_empty() {
            return Err(invalid("analyses", "at least one analysis is required"));
        }
        let distinct: BTreeSet<_> = self.analyses.iter().collect();
        if distinct.len() != self.analyses.len() {
            return Err(invalid("analyses", "analyses must not repeat"));
        }
        if !(self.formats.json || self.formats.dot || self.formats.csv) {
            return Err(invalid("formats", "no output format enabled"));
        }
        if self.caps.ring_size == 0 || self.caps.ring_size > DEFAULT_SIZE_CAP {
            return Err(invalid("caps.ring_size", format!("must lie in 1..={DEFAULT_SIZE_CAP}")));
        }
        self.ring.validate().map_err(|e| invalid("ring", e.to_string()))?;
        Ok(())
    }

    pub fn wants(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }
}
