//! The `key = value` run configuration file.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are listed in
//! [`KEYS`]; anything else is rejected, as is `api_key`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("config line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("config key `{key}`: {reason}")]
    Value { key: String, reason: String },
}

/// Every key the file may set.
pub const KEYS: &[&str] = &[
    "base_url",
    "model",
    "temperature",
    "max_tokens",
    "max_retries",
    "timeout_secs",
    "min_interval_ms",
    "parallelism",
    "prompts_dir",
    "techniques",
    "dataset",
    "transcripts",
    "rows",
    "seed",
    "per_type",
    "types",
    "threshold",
    "bin_width",
    "excerpt_facts",
    "max_reflexions",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| ConfigError::Line { line: i + 1, reason };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected `key = value`".into()))?;
            let key = key.trim();
            if key == "api_key" {
                return Err(bad(format!(
                    "the API key is read from the {} environment variable only",
                    tempqa_pipeline::orchestrator::API_KEY_ENV
                )));
            }
            if !KEYS.contains(&key) {
                return Err(bad(format!("unknown key `{key}`")));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(bad(format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Typed value for `key`, if set.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse().map_err(|e| ConfigError::Value {
                    key: key.to_string(),
                    reason: format!("invalid value `{v}`: {e}"),
                })
            })
            .transpose()
    }

    /// `flag`, else the file value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    /// Comma-separated list value for `key`.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                parse_list(v).map_err(|reason| ConfigError::Value {
                    key: key.to_string(),
                    reason,
                })
            })
            .transpose()
    }
}

pub fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_picks() {
        let c = FileConfig::parse("# comment\nmodel = gpt-4o-mini\n\nparallelism=8\n").unwrap();
        assert_eq!(c.raw("model"), Some("gpt-4o-mini"));
        assert_eq!(c.pick(None, "parallelism", 4usize).unwrap(), 8);
        assert_eq!(c.pick(Some(2), "parallelism", 4usize).unwrap(), 2);
        assert_eq!(c.pick(None, "seed", 7u64).unwrap(), 7);
    }

    #[test]
    fn rejects_bad_lines() {
        for text in ["no equals sign", "colour = red", "api_key = sk-123", "seed = 1\nseed = 2"] {
            assert!(matches!(FileConfig::parse(text), Err(ConfigError::Line { .. })), "{text}");
        }
        let c = FileConfig::parse("seed = many").unwrap();
        assert!(c.get::<u64>("seed").is_err());
    }

    #[test]
    fn lists() {
        let c = FileConfig::parse("techniques = direct, cotapi").unwrap();
        let v: Vec<String> = c.list("techniques").unwrap().unwrap();
        assert_eq!(v, ["direct", "cotapi"]);
    }
}
