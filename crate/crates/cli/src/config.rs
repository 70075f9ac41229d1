use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

pub const CONFIG_ENV: &str = "CMZV_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Defaults for every command; flags on the command line win.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub cutoff: u64,
    pub tol: f64,
    pub max_weight: u32,
    pub max_blocks: usize,
    pub format: Format,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cutoff: 1000,
            tol: 1e-2,
            max_weight: 6,
            max_blocks: 3,
            format: Format::Text,
            threads: 0,
            seed: 0,
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// `--config` first, then the environment variable, then defaults.
    pub fn load(flag: Option<&Path>) -> Result<Self> {
        let path = flag
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        match path {
            Some(p) => Self::from_file(&p),
            None => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: Config = toml::from_str("cutoff = 50\nformat = \"json\"").unwrap();
        assert_eq!(c.cutoff, 50);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.max_weight, 6);
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
    }
}
