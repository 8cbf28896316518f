//! Flat `key = value` configuration files and `--sweep` ranges.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// A configuration problem, reported with its source location.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parsed `key = value` pairs. Blank lines and `#` comments are skipped;
/// later duplicates are an error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    source: String,
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn parse(source: &str, text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError {
                location: format!("{source}:{line_no}"),
                message,
            };
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(format!("expected `key = value`, found `{line}`")));
            };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(err("empty key".into()));
            }
            if let Some((first, _)) = entries.get(&key) {
                return Err(err(format!(
                    "duplicate key `{key}` (first set on line {first})"
                )));
            }
            entries.insert(key, (line_no, value));
        }
        Ok(Self {
            source: source.to_string(),
            entries,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            location: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&path.display().to_string(), &text)
    }

    /// Typed value of `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, value)) => value.parse().map(Some).map_err(|e| ConfigError {
                location: format!("{}:{line}", self.source),
                message: format!("bad value `{value}` for `{key}`: {e}"),
            }),
        }
    }

    /// Keys not in `known`, for rejecting typos.
    pub fn unknown_keys<'a>(&'a self, known: &[&str]) -> Vec<(usize, &'a str)> {
        self.entries
            .iter()
            .filter(|(k, _)| !known.contains(&k.as_str()))
            .map(|(k, (line, _))| (*line, k.as_str()))
            .collect()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// `key=start:stop:step`, inclusive of `stop` up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (key, range) = s
            .split_once('=')
            .ok_or_else(|| format!("sweep `{s}` must look like key=start:stop:step"))?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("sweep range `{range}` must be start:stop:step"));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number `{t}` in sweep: {e}"))
        };
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(format!(
                "sweep needs start <= stop and step > 0, got {range}"
            ));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 10_000 {
            return Err(format!(
                "sweep `{s}` has {count} points; at most 10000 allowed"
            ));
        }
        // Round to the decimals written, so 0.1 + 7·0.05 prints as 0.45.
        // Exponent notation is left unrounded.
        let decimals = parts
            .iter()
            .map(|t| {
                let t = t.trim();
                if t.contains(['e', 'E']) {
                    None
                } else {
                    Some(t.split_once('.').map_or(0, |(_, f)| f.len()))
                }
            })
            .collect::<Option<Vec<_>>>()
            .and_then(|d| d.into_iter().max());
        let values = (0..count)
            .map(|i| start + i as f64 * step)
            .map(|v| match decimals {
                Some(d) if d <= 15 => {
                    let scale = 10f64.powi(d as i32);
                    (v * scale).round() / scale
                }
                _ => v,
            })
            .collect();
        Ok(Sweep {
            key: key.trim().to_ascii_lowercase(),
            values,
        })
    }
}
