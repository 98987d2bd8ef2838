//! Per-command output directory and its `manifest.json`.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use waveguide_core::field::Field2D;
use waveguide_core::io::save_field2d;

use crate::config::{relative_to, RunConfig};
use crate::CliError;

pub struct RunOutput {
    dir: PathBuf,
    files: Vec<PathBuf>,
    started: Instant,
}

impl RunOutput {
    pub fn create(cfg: &RunConfig) -> Result<Self, CliError> {
        let dir = cfg.command_dir();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: Vec::new(), started: Instant::now() })
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }

    pub fn lines(&mut self, name: &str, header: &str, rows: impl IntoIterator<Item = String>) -> Result<(), CliError> {
        let mut s = String::from(header);
        s.push('\n');
        for r in rows {
            s.push_str(&r);
            s.push('\n');
        }
        self.text(name, &s)
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        self.text(name, &(s + "\n"))
    }

    pub fn field(&mut self, name: &str, f: &Field2D) -> Result<(), CliError> {
        let path = self.dir.join(name);
        save_field2d(&path, f)?;
        self.files.push(path);
        Ok(())
    }

    /// Writes `manifest.json` listing every file with its SHA-256.
    pub fn finish(self, cfg: &RunConfig, summary: Value) -> Result<(), CliError> {
        let mut files = Vec::new();
        for path in &self.files {
            let bytes = std::fs::read(path)?;
            files.push(json!({
                "path": relative_to(path, &self.dir).display().to_string(),
                "bytes": bytes.len(),
                "sha256": format!("{:x}", Sha256::digest(&bytes)),
            }));
        }
        let manifest = json!({
            "command": cfg.command,
            "config": cfg,
            "versions": {
                "waveguide-cli": env!("CARGO_PKG_VERSION"),
                "waveguide-core": waveguide_core::VERSION,
            },
            "wall_time_s": self.started.elapsed().as_secs_f64(),
            "summary": summary,
            "files": files,
        });
        let s = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(self.dir.join("manifest.json"), s + "\n")?;
        eprintln!("wrote {} files to {}", self.files.len() + 1, self.dir.display());
        Ok(())
    }
}
