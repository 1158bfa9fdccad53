//! Run configuration: a TOML file with flag overrides (flags win).
//!
//! ```toml
//! symbol = "cusp"
//! space = "dirichlet-star"
//! n = 512
//! route = "moments"          # or "coefficients"; default picks per symbol
//! check = "root-law"
//!
//! [series]                   # coefficient route
//! degree = 1024
//! rho = 0.999
//! samples = 8192
//!
//! [geometry]
//! samples = 10000000
//! shells = 14
//! seed = 7
//!
//! [output]
//! dir = "out"                # spectrum.csv, report.json, summary.txt
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::opmatrix::Route;
use crate::series::{SeriesParams, Space};
use crate::symbols::SymbolMap;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub degree: Option<usize>,
    pub rho: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub samples: u64,
    pub shells: u32,
    pub seed: Option<u64>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            samples: 10_000_000,
            shells: 14,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub symbol: String,
    #[serde(default = "default_space")]
    pub space: Space,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub route: Option<Route>,
    #[serde(default)]
    pub check: Option<String>,
    #[serde(default)]
    pub series: SeriesConfig,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_space() -> Space {
    Space::DirichletStar
}

fn default_n() -> usize {
    256
}

pub const MAX_N: usize = 8192;

impl RunConfig {
    pub fn new(symbol: &str) -> Self {
        Self {
            symbol: symbol.to_string(),
            space: default_space(),
            n: default_n(),
            route: None,
            check: None,
            series: SeriesConfig::default(),
            geometry: GeometryConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Parsed symbol and range checks on every numeric field.
    pub fn validate(&self) -> Result<SymbolMap> {
        let s: SymbolMap = self.symbol.parse()?;
        if self.n == 0 || self.n > MAX_N {
            return Err(Error::Invalid(format!(
                "N = {} not in [1, {MAX_N}]",
                self.n
            )));
        }
        if let Some(m) = self.series.degree {
            if m < self.n {
                return Err(Error::Invalid(format!(
                    "series degree {m} below N = {}",
                    self.n
                )));
            }
        }
        if let Some(rho) = self.series.rho {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::Invalid(format!("rho = {rho} not in (0, 1)")));
            }
        }
        if self.geometry.samples < 1000 {
            return Err(Error::Invalid(
                "geometry.samples must be at least 1000".into(),
            ));
        }
        if self.geometry.shells > 40 {
            return Err(Error::Invalid("geometry.shells must be at most 40".into()));
        }
        Ok(s)
    }

    pub fn series_params(&self) -> Option<SeriesParams> {
        self.series.degree.map(|degree| SeriesParams {
            degree,
            rho: self.series.rho,
            samples: self.series.samples,
        })
    }

    pub fn seed(&self) -> Result<u64> {
        self.geometry
            .seed
            .ok_or_else(|| Error::Invalid("--seed is required for Monte Carlo runs".into()))
    }

    /// SHA-256 of the canonical JSON form, output paths excluded.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputConfig::default();
        let json = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
