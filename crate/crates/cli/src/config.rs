//! Parameter resolution: command-line flags over a flat TOML file over
//! built-in defaults. Every value that is read is recorded so the output
//! can echo the resolved configuration.

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value as Json};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use toml::Value;

/// Keys shared by every subcommand.
pub const COMMON_KEYS: &[&str] = &["format", "output", "full_precision", "sequential"];

pub struct Params {
    command: &'static str,
    values: BTreeMap<String, Value>,
    resolved: BTreeMap<String, Json>,
}

/// Reads a flat `key = value` TOML document.
pub fn load_file(path: &Path) -> Result<BTreeMap<String, Value>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .with_context(|| format!("cannot parse config file {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (key, value) in table {
        if matches!(value, Value::Table(_)) {
            bail!(
                "config key `{key}`: nested tables are not supported, use flat key = value pairs"
            );
        }
        out.insert(key, value);
    }
    Ok(out)
}

impl Params {
    /// Merges `file` and `flags` (flags win) after rejecting keys the
    /// command does not know.
    pub fn merge(
        command: &'static str,
        allowed: &[&str],
        file: BTreeMap<String, Value>,
        flags: BTreeMap<String, Value>,
    ) -> Result<Self> {
        let known: BTreeSet<&str> = allowed.iter().chain(COMMON_KEYS).copied().collect();
        if let Some(key) = file.keys().find(|k| !known.contains(k.as_str())) {
            bail!("unknown config key `{key}` for `{command}`");
        }
        let mut values = file;
        values.extend(flags);
        Ok(Params {
            command,
            values,
            resolved: BTreeMap::new(),
        })
    }

    pub fn command(&self) -> &'static str {
        self.command
    }

    pub fn resolved(&self) -> &BTreeMap<String, Json> {
        &self.resolved
    }

    fn record(&mut self, key: &str, v: Json) {
        self.resolved.insert(key.to_string(), v);
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        let v = match self.values.get(key) {
            None => return Ok(None),
            Some(Value::Float(x)) => *x,
            Some(Value::Integer(i)) => *i as f64,
            Some(Value::String(s)) => parse_f64(key, s)?,
            Some(other) => bail!("config key `{key}`: expected a number, got {other}"),
        };
        if !v.is_finite() {
            bail!("config key `{key}`: value must be finite");
        }
        self.record(key, json!(v));
        Ok(Some(v))
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.opt_f64(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, json!(default));
                Ok(default)
            }
        }
    }

    pub fn require_f64(&mut self, key: &str) -> Result<f64> {
        self.opt_f64(key)?
            .ok_or_else(|| anyhow!("missing required parameter `{key}` for `{}`", self.command))
    }

    pub fn opt_u64(&mut self, key: &str) -> Result<Option<u64>> {
        let v = match self.values.get(key) {
            None => return Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => *i as u64,
            Some(Value::Float(x)) if *x >= 0.0 && x.fract() == 0.0 && *x <= 9.0e15 => *x as u64,
            Some(Value::String(s)) => {
                let x = parse_f64(key, s)?;
                if !(x >= 0.0 && x.fract() == 0.0 && x <= 9.0e15) {
                    bail!("config key `{key}`: expected a nonnegative integer, got {s}");
                }
                x as u64
            }
            Some(other) => bail!("config key `{key}`: expected a nonnegative integer, got {other}"),
        };
        self.record(key, json!(v));
        Ok(Some(v))
    }

    pub fn u64_or(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.opt_u64(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, json!(default));
                Ok(default)
            }
        }
    }

    pub fn require_u64(&mut self, key: &str) -> Result<u64> {
        self.opt_u64(key)?
            .ok_or_else(|| anyhow!("missing required parameter `{key}` for `{}`", self.command))
    }

    pub fn opt_bool(&mut self, key: &str) -> Result<Option<bool>> {
        let v = match self.values.get(key) {
            None => return Ok(None),
            Some(Value::Boolean(b)) => *b,
            Some(Value::String(s)) => match s.as_str() {
                "true" => true,
                "false" => false,
                _ => bail!("config key `{key}`: expected true or false, got {s}"),
            },
            Some(other) => bail!("config key `{key}`: expected true or false, got {other}"),
        };
        self.record(key, json!(v));
        Ok(Some(v))
    }

    pub fn bool_or(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.opt_bool(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, json!(default));
                Ok(default)
            }
        }
    }

    /// Records a value that was derived rather than read.
    pub fn set_resolved(&mut self, key: &str, v: Json) {
        self.record(key, v);
    }

    pub fn opt_str(&mut self, key: &str) -> Result<Option<String>> {
        let v = match self.values.get(key) {
            None => return Ok(None),
            Some(Value::String(s)) => s.clone(),
            Some(other) => bail!("config key `{key}`: expected a string, got {other}"),
        };
        self.record(key, json!(v));
        Ok(Some(v))
    }

    pub fn str_or(&mut self, key: &str, default: &str) -> Result<String> {
        match self.opt_str(key)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, json!(default));
                Ok(default.to_string())
            }
        }
    }

    /// A list given either as a TOML array or as a comma-separated string.
    pub fn opt_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        let list = match self.values.get(key) {
            None => return Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|item| match item {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(i) => Ok(*i as f64),
                    other => Err(anyhow!("config key `{key}`: expected numbers, got {other}")),
                })
                .collect::<Result<Vec<_>>>()?,
            Some(Value::String(s)) => s
                .split(',')
                .map(|part| parse_f64(key, part.trim()))
                .collect::<Result<Vec<_>>>()?,
            Some(Value::Float(x)) => vec![*x],
            Some(Value::Integer(i)) => vec![*i as f64],
            Some(other) => bail!("config key `{key}`: expected a list of numbers, got {other}"),
        };
        if list.is_empty() || list.iter().any(|x| !x.is_finite()) {
            bail!("config key `{key}`: expected a nonempty list of finite numbers");
        }
        self.record(key, json!(list));
        Ok(Some(list))
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| anyhow!("config key `{key}`: `{s}` is not a number"))
}
