//! Plain `key = value` configuration text.
//!
//! One pair per line; `#` starts a comment; blank lines are ignored. Keys are
//! case-sensitive and may use `-` or `_` interchangeably (stored with `_`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", idx + 1)))?;
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", idx + 1)));
            }
            let value = value.trim().trim_matches('"').to_string();
            if entries.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{key}`", idx + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    /// Parses a float; `inf`/`infinity` are accepted.
    pub fn float(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_float(key, v)).transpose()
    }

    pub fn require_float(&self, key: &str) -> Result<f64> {
        parse_float(key, self.require(key)?)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub(crate) fn parse_float(key: &str, value: &str) -> Result<f64> {
    let v = value.trim();
    match v.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => return Ok(f64::INFINITY),
        _ => {}
    }
    v.parse::<f64>()
        .map_err(|_| Error::Config(format!("key `{key}`: `{value}` is not a number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_comments_and_dashes() {
        let kv = KeyValues::parse("# header\nkind = constant\nsupport-end=inf  # tail\n\nrate=0.0125\n").unwrap();
        assert_eq!(kv.get("kind"), Some("constant"));
        assert_eq!(kv.float("support_end").unwrap(), Some(f64::INFINITY));
        assert_eq!(kv.require_float("rate").unwrap(), 0.0125);
        assert_eq!(kv.float("missing").unwrap(), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(KeyValues::parse("just text").is_err());
        assert!(KeyValues::parse("a=1\na=2").is_err());
        assert!(KeyValues::parse("=3").is_err());
        let kv = KeyValues::parse("rate = fast").unwrap();
        assert!(kv.require_float("rate").is_err());
    }
}
