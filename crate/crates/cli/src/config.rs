use std::path::Path;

use serde::Deserialize;

/// Keys accepted in the optional JSON config file; command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<u32>,
    pub conjugate_q: Option<bool>,
    pub rt_shift: Option<bool>,
    pub tolerance: Option<f64>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub k: u32,
    pub conjugate_q: bool,
    pub rt_shift: bool,
    pub tolerance: f64,
    pub threads: Option<usize>,
}

pub const DEFAULT_K: u32 = 4;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
