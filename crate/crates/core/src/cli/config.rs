//! JSON run configuration.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::archimedean::ArchTestFunction;
use crate::error::{Error, Result};
use crate::formula::DiagonalNormalization;
use crate::numkernel::QuadratureSpec;
use crate::padic::GlobalTestFunction;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Kloosterman,
    VerifyPetersson2,
    BkGeometric,
    ParityDemo,
    Transforms,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kloosterman => "kloosterman",
            Command::VerifyPetersson2 => "verify-petersson2",
            Command::BkGeometric => "bk-geometric",
            Command::ParityDemo => "parity-demo",
            Command::Transforms => "transforms",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// Every field except `schema_version` is optional; commands fill in their own defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub command: Option<Command>,
    /// Prime → exponent map of the congruence test function.
    pub level: Option<GlobalTestFunction>,
    pub family: Option<ArchTestFunction>,
    pub m_list: Option<Vec<i64>>,
    pub n_list: Option<Vec<i64>>,
    pub m1: Option<i64>,
    pub m2: Option<i64>,
    pub m: Option<u64>,
    pub c_max: Option<u64>,
    pub tolerance: Option<f64>,
    pub normalization: Option<DiagonalNormalization>,
    pub quadrature: Option<QuadratureSpec>,
    pub t_list: Option<Vec<f64>>,
    pub x_list: Option<Vec<f64>>,
    pub a_list: Option<Vec<f64>>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if let Some(q) = &self.quadrature {
            q.validate()?;
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tolerance must be positive, got {t}")));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        self.quadrature.unwrap_or_default()
    }

    pub fn level_or(&self, default: u64) -> Result<GlobalTestFunction> {
        match &self.level {
            Some(f) => Ok(f.clone()),
            None => GlobalTestFunction::of_level(default),
        }
    }

    pub fn family_or_default(&self) -> Result<ArchTestFunction> {
        match self.family {
            Some(h) => Ok(h),
            None => ArchTestFunction::family2(10.0),
        }
    }
}
