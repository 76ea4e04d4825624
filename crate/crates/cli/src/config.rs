//! Global settings: flags override the optional TOML file, which overrides the defaults.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use crate::Global;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    bits: Option<u32>,
    workers: Option<usize>,
    output_dir: Option<PathBuf>,
    log_level: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// `None` leaves the choice to each command.
    pub bits: Option<u32>,
    pub workers: usize,
    pub output_dir: PathBuf,
    pub log_level: String,
}

impl RunConfig {
    pub fn resolve(g: &Global) -> anyhow::Result<Self> {
        let file = match &g.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str::<FileConfig>(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => FileConfig::default(),
        };
        let workers = g
            .workers
            .or(file.workers)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            anyhow::bail!("workers must be at least 1");
        }
        let bits = g.bits.or(file.bits);
        if let Some(b) = bits {
            if b < 53 {
                anyhow::bail!("bits must be at least 53, got {b}");
            }
        }
        Ok(RunConfig {
            bits,
            workers,
            output_dir: g.output_dir.clone().or(file.output_dir).unwrap_or_else(|| PathBuf::from(".")),
            log_level: g.log_level.clone().or(file.log_level).unwrap_or_else(|| "warn".into()),
        })
    }

    /// Relative paths are taken inside the output directory.
    pub fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.output_dir.join(p)
        }
    }

    pub fn path_or(&self, p: &Option<PathBuf>, default: &str) -> PathBuf {
        self.path(p.as_deref().unwrap_or(Path::new(default)))
    }
}
