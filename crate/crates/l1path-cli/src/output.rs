//! Output helpers: the run manifest emitted as `#` comment lines ahead of
//! every machine-readable body, and significant-digit formatting.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

/// Reproducibility header: re-running the recorded command reproduces the
/// body byte for byte (the timestamp line is the only varying part, and it
/// lives in the comments).
pub struct RunManifest {
    pub command: String,
    pub config: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            config: Vec::new(),
        }
    }

    pub fn entry(mut self, key: &str, value: impl ToString) -> Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# version: {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# timestamp: {secs}");
        for (k, v) in &self.config {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out
    }
}

/// Formats with `digits` significant digits in plain decimal notation.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let order = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - order;
    if decimals >= 0 {
        format!("{x:.prec$}", prec = decimals as usize)
    } else {
        let unit = 10f64.powi(-decimals);
        format!("{:.0}", (x / unit).round() * unit)
    }
}

/// Fixed decimal places, for the aligned table body. A value that rounds
/// to zero prints without a sign, whatever code path produced it.
pub fn fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}
