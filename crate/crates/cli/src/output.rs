//! Output serialization: CSV tables with `#` echo headers, JSON documents and
//! content digests.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Scientific notation with 9 significant digits.
pub fn format_number(value: f64) -> String {
    format!("{value:.8e}")
}

/// A CSV table. Header comments come first, then the column row, then data,
/// all with LF line endings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        CsvTable { comments: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn echo(&mut self, values: &BTreeMap<String, String>) {
        for (k, v) in values {
            self.comment(format!("{k} = {v}"));
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|v| format_number(*v)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Parses a rendered table back, skipping comments.
pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut table = CsvTable::default();
    for line in text.lines() {
        if let Some(c) = line.strip_prefix("# ") {
            table.comments.push(c.to_string());
        } else if table.columns.is_empty() {
            table.columns = line.split(',').map(str::to_string).collect();
        } else {
            let row = line.split(',').map(|v| v.parse::<f64>().with_context(|| format!("bad number '{v}'"))).collect::<Result<Vec<_>>>()?;
            table.rows.push(row);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Files produced by one run, held in memory until written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputSet {
    pub files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, name: impl Into<String>, contents: impl Into<Vec<u8>>) {
        self.files.push((name.into(), contents.into()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.add(name, text);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    pub fn digests(&self) -> Vec<OutputDigest> {
        self.files
            .iter()
            .map(|(name, bytes)| OutputDigest { path: name.clone(), sha256: sha256_hex(bytes), bytes: bytes.len() })
            .collect()
    }

    /// Writes every file under `dir` in order.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_number(1.0), "1.00000000e0");
        assert_eq!(format_number(-2.5e-7), "-2.50000000e-7");
        assert_eq!(format_number(123456789.123), "1.23456789e8");
    }

    #[test]
    fn csv_layout_and_round_trip() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.comment("chipnoise test");
        t.push(vec![1.0, 2.0]);
        t.push(vec![0.5, -3e-9]);
        let text = t.render();
        assert!(text.starts_with("# chipnoise test\na,b\n"));
        assert!(!text.contains('\r'));
        let back = parse_csv(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn digests_match_written_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut set = OutputSet::default();
        set.add("x.csv", "hello\n");
        set.write(dir.path()).unwrap();
        let on_disk = std::fs::read(dir.path().join("x.csv")).unwrap();
        assert_eq!(set.digests()[0].sha256, sha256_hex(&on_disk));
        assert_eq!(set.digests()[0].sha256, "5891b5b522d5df086d0ff0b110fbd9d21bb4fc7163af34d08286a2e846f6be03");
    }
}
