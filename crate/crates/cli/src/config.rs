//! Flat key=value run configuration.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines are ignored. Keys are lowercase identifiers that carry their unit
//! as a suffix (`field_tesla`, `pulse_seconds`). Values from `--set
//! key=value` flags override file entries. Every lookup records the key it
//! touched so a command can reject the entries it never understood instead
//! of silently ignoring a typo.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
    touched: BTreeSet<String>,
}

impl RunConfig {
    /// Config file (optional) plus `--set` overrides, later flags winning.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = path {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read config {}", path.display()))?;
            cfg.parse_file(&text)
                .with_context(|| format!("config {}", path.display()))?;
        }
        for pair in overrides {
            let (key, value) =
                split_pair(pair).ok_or_else(|| anyhow!("--set expects key=value, got {pair:?}"))?;
            if value.is_empty() {
                bail!("--set: missing value for key `{key}`");
            }
            cfg.entries.insert(key.to_string(), value.to_string());
        }
        Ok(cfg)
    }

    fn parse_file(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = split_pair(line)
                .ok_or_else(|| anyhow!("line {}: expected key=value, got {line:?}", idx + 1))?;
            if value.is_empty() {
                bail!("line {}: missing value for key `{key}`", idx + 1);
            }
            if self.entries.contains_key(key) {
                bail!("line {}: duplicate key `{key}`", idx + 1);
            }
            self.entries.insert(key.to_string(), value.to_string());
        }
        Ok(())
    }

    fn raw(&mut self, key: &str) -> Option<&str> {
        self.touched.insert(key.to_string());
        self.entries.get(key).map(String::as_str)
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .with_context(|| format!("key `{key}`: expected a number, got {v:?}")),
        }
    }

    pub fn optional_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .with_context(|| format!("key `{key}`: expected a number, got {v:?}")),
        }
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .with_context(|| format!("key `{key}`: expected a non-negative integer, got {v:?}")),
        }
    }

    pub fn string(&mut self, key: &str, default: &str) -> String {
        match self.raw(key) {
            None => default.to_string(),
            Some(v) => v.to_string(),
        }
    }

    /// Call once after a command read all of its inputs.
    pub fn reject_unknown(&self) -> Result<()> {
        let unknown: Vec<&str> = self
            .entries
            .keys()
            .map(String::as_str)
            .filter(|k| !self.touched.contains(*k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            bail!(
                "unknown config key{}: {}",
                if unknown.len() == 1 { "" } else { "s" },
                unknown.join(", ")
            )
        }
    }
}

fn split_pair(s: &str) -> Option<(&str, &str)> {
    let (key, value) = s.split_once('=')?;
    let key = key.trim();
    if key.is_empty() {
        return None;
    }
    Some((key, value.trim()))
}
