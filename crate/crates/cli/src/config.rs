use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

/// Parameter defaults loaded from `--config`. Field names match the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub eta: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub target: Option<usize>,
    pub phi: Option<f64>,
    pub points: Option<usize>,
    pub k_max: Option<usize>,
    pub m: Option<usize>,
    pub max_restarts: Option<usize>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Reads a database of ASCII `0`/`1` characters; whitespace is ignored.
pub fn read_database(path: &Path) -> Result<Vec<u8>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => anyhow::bail!("database file may contain only 0 and 1, found {other:?}"),
        })
        .collect()
}
