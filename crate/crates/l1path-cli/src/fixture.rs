//! Cached access to the 64-column quadratic diabetes design.
//!
//! The expanded (pre-standardization) dataset is written once to the cache
//! directory — `$L1PATH_CACHE_DIR`, else `$XDG_CACHE_HOME/l1path`, else
//! `~/.cache/l1path` — and loaded from there on later runs. Floats are
//! written with round-trip precision, so the cache is bit-exact with the
//! in-memory expansion; any read or parse problem falls back to
//! recomputing, which takes milliseconds.

use std::path::PathBuf;

use l1path::data::{self, Dataset, StandardizeMode, StandardizedDesign};

pub const CACHE_ENV: &str = "L1PATH_CACHE_DIR";
const CACHE_FILE: &str = "diabetes64.csv";

fn cache_dir() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var(CACHE_ENV) {
        return Some(PathBuf::from(dir));
    }
    if let Ok(xdg) = std::env::var("XDG_CACHE_HOME") {
        return Some(PathBuf::from(xdg).join("l1path"));
    }
    std::env::var("HOME")
        .ok()
        .map(|h| PathBuf::from(h).join(".cache").join("l1path"))
}

fn render_csv(d: &Dataset) -> String {
    let mut out = String::new();
    out.push_str(&d.column_names.join(","));
    out.push_str(",y\n");
    for i in 0..d.n() {
        for j in 0..d.p() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{:?}", d.x_raw.get(i, j)));
        }
        out.push_str(&format!(",{:?}\n", d.y_raw[i]));
    }
    out
}

fn load_cached() -> Option<Dataset> {
    let path = cache_dir()?.join(CACHE_FILE);
    let text = std::fs::read_to_string(path).ok()?;
    let d = data::parse_csv(std::io::Cursor::new(text), "y").ok()?;
    (d.n() == 442 && d.p() == 64).then_some(d)
}

fn store(d: &Dataset) {
    let Some(dir) = cache_dir() else { return };
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    let _ = std::fs::write(dir.join(CACHE_FILE), render_csv(d));
}

/// The expanded 64-column dataset, from cache when possible.
pub fn diabetes64_dataset() -> Dataset {
    if let Some(d) = load_cached() {
        return d;
    }
    let d = data::diabetes64_dataset();
    store(&d);
    d
}

/// The standardized design under the requested convention.
pub fn diabetes64(mode: StandardizeMode) -> StandardizedDesign {
    data::standardize(&diabetes64_dataset(), mode).expect("fixture has no constant column")
}
