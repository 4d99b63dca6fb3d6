//! CSV/JSON output helpers shared by every report.
//!
//! CSV files start with `# key=value` metadata lines followed by a header
//! row. JSON reports carry the same metadata under a `"meta"` key. Files are
//! written through a temporary sibling and renamed into place.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

/// Version string baked in at build time (`git describe`, when available).
pub const VERSION: &str = match option_env!("INVASION_QSD_GIT_DESCRIBE") {
    Some(v) => v,
    None => env!("CARGO_PKG_VERSION"),
};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Provenance block attached to every output file.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Metadata {
    pub command: String,
    pub m: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub budgets: BTreeMap<String, String>,
    pub version: String,
}

impl Metadata {
    pub fn new(command: &str, m: usize, n: usize) -> Self {
        Metadata {
            command: command.to_owned(),
            m,
            n,
            seed: None,
            budgets: BTreeMap::new(),
            version: VERSION.to_owned(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_budget(mut self, key: &str, value: impl ToString) -> Self {
        self.budgets.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn write_csv_header<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# command={}", self.command)?;
        writeln!(w, "# m={}", self.m)?;
        writeln!(w, "# n={}", self.n)?;
        if let Some(seed) = self.seed {
            writeln!(w, "# seed={seed}")?;
        }
        for (k, v) in &self.budgets {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "# version={}", self.version)
    }
}

/// Wraps a serializable report as `{"meta": ..., "report": ...}`.
pub fn json_with_meta<T: Serialize>(meta: &Metadata, report: &T) -> Result<Value> {
    Ok(serde_json::json!({
        "meta": serde_json::to_value(meta)?,
        "report": serde_json::to_value(report)?,
    }))
}

pub fn to_json_string(value: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `path` atomically: the closure fills a temporary file in the same
/// directory, which is then renamed over the target.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        let x = 0.9409585518440985_f64;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn metadata_header_lines() {
        let meta = Metadata::new("tail", 2, 11).with_seed(7).with_budget("replicas", 100);
        let mut out = Vec::new();
        meta.write_csv_header(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# command=tail\n# m=2\n# n=11\n# seed=7\n# replicas=100\n"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.csv");
        write_atomic(&path, |w| writeln!(w, "first")).unwrap();
        write_atomic(&path, |w| writeln!(w, "second")).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second\n");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
