//! Minimal CSV writer: header row, unquoted fields, `\n` line endings.

use std::fmt::Display;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Consistency(format!(
                "row has {} fields, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        if let Some(bad) = row.iter().find(|f| f.contains([',', '"', '\n'])) {
            return Err(Error::Consistency(format!(
                "field `{bad}` cannot be written unquoted"
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut w = BufWriter::new(fs::File::create(path)?);
        w.write_all(self.to_text().as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

/// Formats each value with `Display`; floats use the shortest round-trip form.
#[macro_export]
macro_rules! csv_row {
    ($($v:expr),* $(,)?) => {
        vec![$($crate::experiment::csv::field(&$v)),*]
    };
}

pub fn field<T: Display>(v: &T) -> String {
    v.to_string()
}
