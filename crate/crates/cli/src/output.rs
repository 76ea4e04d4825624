//! Report envelope and atomic file output.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

/// Timing lives in its own field so reruns reproduce everything else byte for byte.
#[derive(Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub seconds: f64,
}

impl Report {
    pub fn new(command: &'static str, config: Value, result: Value, start: Instant) -> Self {
        Report { version: env!("CARGO_PKG_VERSION"), command, config, result, seconds: start.elapsed().as_secs_f64() }
    }
}

/// Writes to a temporary file in the target directory, then renames it into place.
fn atomic_write(path: &Path, fill: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    fill(tmp.as_file_mut())?;
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    atomic_write(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    atomic_write(path, |w| {
        let mut out = csv::Writer::from_writer(w);
        for r in rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    })
}
