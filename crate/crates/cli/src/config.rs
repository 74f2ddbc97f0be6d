//! Config files are turned into `--key=value` arguments placed ahead of the
//! command-line flags, so clap does all validation and later flags win.

use std::fs;
use std::path::Path;

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

fn json_value(key: &str, v: &Value) -> Result<String, String> {
    match v {
        Value::Array(items) => items
            .iter()
            .map(|x| scalar(x).ok_or_else(|| format!("config key `{key}`: nested value not supported")))
            .collect::<Result<Vec<_>, _>>()
            .map(|parts| parts.join(",")),
        other => scalar(other).ok_or_else(|| format!("config key `{key}`: unsupported value {other}")),
    }
}

fn flag(key: &str, value: &str) -> String {
    format!("--{}={}", key.trim().replace('_', "-"), value.trim())
}

/// Reads a `key = value` file or a JSON summary (its `config` object).
pub fn load(path: &Path) -> Result<Vec<String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
        let map = doc
            .get("config")
            .and_then(Value::as_object)
            .ok_or_else(|| format!("config {}: JSON has no `config` object", path.display()))?;
        return map.iter().map(|(k, v)| json_value(k, v).map(|s| flag(k, &s))).collect();
    }
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config {} line {}: expected `key = value`", path.display(), no + 1))?;
        if k.trim().is_empty() {
            return Err(format!("config {} line {}: empty key", path.display(), no + 1));
        }
        out.push(flag(k, v));
    }
    Ok(out)
}

/// Pulls `--config PATH` / `--config=PATH` out of the raw arguments.
pub fn find_config(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_owned());
        }
    }
    None
}
