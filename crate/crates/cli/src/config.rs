//! Optional TOML config file. Keys mirror the long flags with underscores;
//! flags given on the command line win over the file, and the file wins over
//! built-in defaults.

use anyhow::{Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub workers: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub game: Option<String>,
    pub deck: Option<String>,
    pub rule: Option<String>,
    pub strength: Option<String>,
    pub tie: Option<String>,
    pub face_down: Option<usize>,
    pub deal: Option<String>,
    pub split: Option<usize>,
    pub return_order: Option<String>,
    pub max_rounds: Option<u64>,
    pub hand_floor: Option<usize>,
    pub bins: Option<usize>,
    pub per_trial: Option<bool>,
    pub n: Option<usize>,
    pub uniform_size: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }
}

/// First of flag, file value, default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
