use std::path::Path;

use anyhow::Context;
use serde::Serialize;

/// Pretty JSON with a trailing newline. Floats print as shortest round-trip decimals.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn read_file(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `None` for non-finite values so the JSON stays valid.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3e}")
    } else {
        "inf".to_string()
    }
}
