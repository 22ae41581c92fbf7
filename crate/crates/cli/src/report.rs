//! Check reports and deterministic artifact emission.
//!
//! `report.json`, `tables/*.csv` and `plots/*.svg` are byte-deterministic
//! for a fixed config and seed; wall-clock data lives only in `meta.json`.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

/// A plottable (x, y) series attached to a check.
#[derive(Debug, Clone)]
pub struct Series {
    pub x_label: String,
    pub y_label: String,
    /// plot on log10/log10 axes (residual-vs-h style)
    pub log_log: bool,
    pub points: Vec<(f64, f64)>,
}

/// One verification check. `pass` holds iff `measured` is finite and lies
/// within `tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: String,
    pub id: String,
    /// short statement of the identity or property under test; the literal
    /// "plumbing" for infrastructure-only checks
    pub anchor: String,
    /// digest of the inputs that produced the measurement
    pub inputs: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// auxiliary named values (raw residuals, orders, term magnitudes)
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
    #[serde(skip)]
    pub series: Option<Series>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl Check {
    pub fn new(
        suite: &str,
        id: &str,
        anchor: &str,
        inputs: String,
        measured: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            suite: suite.to_string(),
            id: id.to_string(),
            anchor: anchor.to_string(),
            inputs,
            measured,
            tolerance,
            pass: measured.is_finite() && measured <= tolerance,
            values: BTreeMap::new(),
            note: String::new(),
            series: None,
            runtime: Duration::ZERO,
        }
    }

    pub fn with_value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn with_series(mut self, series: Series) -> Self {
        self.series = Some(series);
        self
    }

    /// A check that could not be evaluated at all.
    pub fn failed(suite: &str, id: &str, anchor: &str, inputs: String, note: String) -> Self {
        let mut c = Check::new(suite, id, anchor, inputs, f64::INFINITY, 0.0);
        c.note = note;
        c
    }
}

/// FNV-1a digest of the inputs of a check, hex-encoded.
pub fn digest(parts: &[&str]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in parts {
        for b in p.as_bytes() {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// Write `bytes` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn atomic_write(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp-partial");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

fn csv_for(series: &Series) -> String {
    let mut s = format!("{},{}\n", series.x_label, series.y_label);
    for (x, y) in &series.points {
        s.push_str(&format!("{x},{y}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_requires_finite_measurement_within_tolerance() {
        assert!(Check::new("s", "a", "x", String::new(), 1e-13, 1e-12).pass);
        assert!(!Check::new("s", "a", "x", String::new(), 2e-12, 1e-12).pass);
        assert!(!Check::new("s", "a", "x", String::new(), f64::NAN, 1e-12).pass);
        assert!(!Check::new("s", "a", "x", String::new(), f64::INFINITY, f64::INFINITY).pass);
        assert!(!Check::failed("s", "a", "x", String::new(), "boom".into()).pass);
    }

    #[test]
    fn digest_is_stable_and_separates_parts() {
        assert_eq!(digest(&["a", "b"]), digest(&["a", "b"]));
        assert_ne!(digest(&["a", "b"]), digest(&["ab"]));
        assert_ne!(digest(&["a", "b"]), digest(&["b", "a"]));
    }

    #[test]
    fn atomic_write_leaves_no_partial_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.json");
        atomic_write(&path, b"{}").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"{}");
        assert!(!path.with_extension("tmp-partial").exists());
    }
}

/// Emit report.json, per-series CSV tables, SVG plots, and meta.json.
pub fn write_outputs(
    out: &Path,
    suite: &str,
    seed: Option<u64>,
    checks: &[Check],
    total: Duration,
) -> io::Result<()> {
    std::fs::create_dir_all(out.join("tables"))?;
    std::fs::create_dir_all(out.join("plots"))?;

    let report = serde_json::json!({
        "suite": suite,
        "seed": seed,
        "checks": checks,
        "all_pass": checks.iter().all(|c| c.pass),
    });
    let mut body = serde_json::to_vec_pretty(&report).expect("reports are serializable");
    body.push(b'\n');
    atomic_write(&out.join("report.json"), &body)?;

    for check in checks {
        if let Some(series) = &check.series {
            let path = out.join("tables").join(format!("{}.csv", check.id));
            atomic_write(&path, csv_for(series).as_bytes())?;
        }
    }

    for (name, svg) in crate::plots::emit_plots(checks) {
        atomic_write(&out.join("plots").join(name), svg.as_bytes())?;
    }

    // wall-clock metadata is quarantined here so the report stays
    // byte-deterministic
    let per_check: BTreeMap<&str, u128> = checks
        .iter()
        .map(|c| (c.id.as_str(), c.runtime.as_millis()))
        .collect();
    let meta = serde_json::json!({
        "tool": "rigidity-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "suite": suite,
        "seed": seed,
        "runtime_ms": total.as_millis(),
        "check_runtime_ms": per_check,
        "generated_unix_ms": std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
    });
    let mut meta_body = serde_json::to_vec_pretty(&meta).expect("meta is serializable");
    meta_body.push(b'\n');
    atomic_write(&out.join("meta.json"), &meta_body)
}
