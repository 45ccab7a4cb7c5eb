//! CSV tables with a one-line `#` metadata header.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem.
    pub name: String,
    /// Single line of `key=value` pairs describing every input.
    pub metadata: String,
    pub columns: Vec<String>,
    /// Missing cells (undefined values) are written empty.
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# {}", self.metadata)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.map(format_value).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_in(&self, dir: &Path) -> Result<std::path::PathBuf> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let path = dir.join(format!("{}.csv", self.name));
        let file = std::fs::File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
        self.write_to(std::io::BufWriter::new(file))?;
        Ok(path)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Shortest representation that round-trips.
fn format_value(v: f64) -> String {
    format!("{v}")
}
