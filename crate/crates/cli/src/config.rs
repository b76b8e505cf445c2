//! Flat key=value config files: `key = value` lines, `#` comments, blank
//! lines.  Every key must belong to the known set (the union over all
//! subcommands) and may appear at most once; violations are config errors.
//! Precedence is flags > config file > built-in defaults, applied by each
//! subcommand when it resolves its parameters.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

/// Every key any subcommand or global option understands.
const KNOWN_KEYS: &[&str] = &[
    "out",
    "format",
    "threads",
    "tol",
    "series_rel_tol",
    "s_sum_tol",
    "toeplitz_max_n",
    "k",
    "n",
    "big_n",
    "route",
    "n_max",
    "lambda",
    "row",
    "count",
    "seed",
    "cdf",
    "t",
    "nodes",
    "xmin",
    "xmax",
    "dx",
    "second",
    "moments",
    "perturb_kernel",
];

#[derive(Debug)]
pub struct ConfigError(pub String);

impl Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid config: {}", self.0)
    }
}

/// Parsed config file plus lookup helpers; empty when no file was given.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    idx + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError(format!("line {}: unknown key `{key}`", idx + 1)));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError(format!(
                    "line {}: duplicate key `{key}`",
                    idx + 1
                )));
            }
        }
        Ok(FileConfig { values })
    }

    /// Raw string value, if the file set this key.
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Typed value, if the file set this key; parse failures are config
    /// errors.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| ConfigError(format!("key `{key}`: cannot parse `{v}`: {e}"))),
        }
    }

    /// All key/value pairs in sorted order, for the output header echo.
    pub fn echo_pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<_> = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        pairs.sort();
        pairs
    }
}

/// `flag.or(config).unwrap_or(default)` for a typed parameter.
pub fn resolve<T>(
    flag: Option<T>,
    config: &FileConfig,
    key: &str,
    default: T,
) -> Result<T, ConfigError>
where
    T: FromStr,
    T::Err: Display,
{
    Ok(flag
        .or(config.get(key)?)
        .unwrap_or(default))
}

/// Like [`resolve`] but with no default: `None` when neither source set it.
pub fn resolve_opt<T>(
    flag: Option<T>,
    config: &FileConfig,
    key: &str,
) -> Result<Option<T>, ConfigError>
where
    T: FromStr,
    T::Err: Display,
{
    Ok(flag.or(config.get(key)?))
}
