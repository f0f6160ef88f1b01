//! Flag / config-file resolution.
//!
//! The config file is a flat `key = value` list with `#` comments, using the
//! same keys as the long flags. Flags always override file entries. Every
//! run echoes its resolved configuration as `# key = value` header lines,
//! which this module can parse back.

use std::collections::HashMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line} is not `key = value`: {text:?}")]
    Malformed { line: usize, text: String },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("config value for {key:?} is not valid: {value:?}")]
    BadValue { key: String, value: String },
}

const KNOWN_KEYS: &[&str] = &[
    "cs",
    "cv",
    "a",
    "b",
    "c",
    "d",
    "mass",
    "emin",
    "emax",
    "kmin",
    "kmax",
    "points",
    "format",
    "mode",
    "case",
    "energy",
    "edge_inset",
    "exclude_gap",
    "tol",
];

/// Key/value pairs from a config file or an echoed header block.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parse `key = value` lines; `#` starts a comment unless the line is an
    /// echoed header entry of the form `# key = value`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim().trim_start_matches('#').trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                // plain comment without '='
                if raw.trim_start().starts_with('#') {
                    continue;
                }
                return Err(ConfigError::Malformed {
                    line: idx + 1,
                    text: raw.to_string(),
                });
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                if raw.trim_start().starts_with('#') {
                    // echoed headers may carry extra bookkeeping lines
                    continue;
                }
                return Err(ConfigError::UnknownKey(key));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: v.clone(),
            }),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: v.clone(),
            }),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => match v.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(ConfigError::BadValue {
                    key: key.to_string(),
                    value: v.clone(),
                }),
            },
        }
    }
}

/// Three-layer value resolution: flag beats file beats default.
pub fn resolve<T: Copy>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
