//! Deterministic CSV emission: fixed headers, 17-significant-digit floats,
//! and row counting for the manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Format a float with 17 significant digits, which round-trips f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV file under construction; counts data rows for the manifest.
pub struct CsvFile {
    path: PathBuf,
    writer: BufWriter<File>,
    rows: usize,
}

impl CsvFile {
    pub fn create(dir: &Path, name: &str, header: &str) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let path = dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut writer = BufWriter::new(file);
        writeln!(writer, "{header}")?;
        Ok(Self {
            path,
            writer,
            rows: 0,
        })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.writer, "{}", fields.join(","))?;
        self.rows += 1;
        Ok(())
    }

    /// Flush and report `(file name, row count)` for the manifest.
    pub fn finish(mut self) -> Result<(String, usize)> {
        self.writer.flush()?;
        let name = self
            .path
            .file_name()
            .expect("csv file name")
            .to_string_lossy()
            .into_owned();
        Ok((name, self.rows))
    }
}
