//! Run manifests: everything needed to regenerate a command's CSV output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{COULOMB_MEV_NM, HBAR_MEV_NS};
use crate::error::{Error, Result};
use crate::noise::RNG_ALGORITHM;

use super::config::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsTable {
    pub coulomb_mev_nm: f64,
    pub hbar_mev_ns: f64,
    pub relative_permittivity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub constants: ConstantsTable,
    pub rng_algorithm: String,
    pub artifact_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &ExperimentConfig, outputs: Vec<String>) -> Self {
        Self {
            command: command.to_string(),
            config: config.to_pairs(),
            constants: ConstantsTable {
                coulomb_mev_nm: COULOMB_MEV_NM,
                hbar_mev_ns: HBAR_MEV_NS,
                relative_permittivity: config.device.relative_permittivity,
            },
            rng_algorithm: RNG_ALGORITHM.to_string(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs,
        }
    }

    pub fn file_name(command: &str) -> String {
        format!("{command}_manifest.json")
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Rebuilds the config, refusing manifests produced under different
    /// constants or random stream definitions.
    pub fn config(&self) -> Result<ExperimentConfig> {
        if self.constants.coulomb_mev_nm != COULOMB_MEV_NM
            || self.constants.hbar_mev_ns != HBAR_MEV_NS
        {
            return Err(Error::Config(
                "manifest was produced with different physical constants".into(),
            ));
        }
        if self.rng_algorithm != RNG_ALGORITHM {
            return Err(Error::Config(format!(
                "manifest uses RNG {:?}",
                self.rng_algorithm
            )));
        }
        ExperimentConfig::from_pairs(&self.config)
    }
}
