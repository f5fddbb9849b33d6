use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// Settings read from a `--config` file: the output path plus the fields of
/// one subcommand's arguments.
pub struct FileConfig<T> {
    pub output: Option<String>,
    pub args: T,
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>, command: &str) -> Result<FileConfig<T>> {
    let Some(path) = path else {
        return Ok(FileConfig { output: None, args: T::default() });
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut value: Value = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    let Some(map) = value.as_object_mut() else {
        bail!("config {} must be a JSON object", path.display());
    };
    if let Some(c) = map.remove("command") {
        if c.as_str() != Some(command) {
            bail!("config {} is for command {c}, not {command}", path.display());
        }
    }
    let output = match map.remove("output") {
        None => None,
        Some(Value::String(s)) => Some(s),
        Some(v) => bail!("config output must be a string, got {v}"),
    };
    let args = serde_json::from_value(value).with_context(|| format!("config {} for {command}", path.display()))?;
    Ok(FileConfig { output, args })
}

/// Parses an inclusive integer range `a..b` (or a single value `a`).
pub fn parse_range(s: &str) -> Result<(u32, u32)> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().with_context(|| format!("bad range start in `{s}`"))?;
    let b: u32 = b.trim().parse().with_context(|| format!("bad range end in `{s}`"))?;
    if b < a {
        bail!("range `{s}` is empty");
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..20").unwrap(), (3, 20));
        assert_eq!(parse_range("5..=5").unwrap(), (5, 5));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("9..4").is_err());
        assert!(parse_range("a..4").is_err());
    }
}
