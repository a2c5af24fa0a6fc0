//! Artifact files and their provenance sidecars.

use crate::Cli;
use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::PathBuf;

#[derive(Serialize)]
struct Provenance<'a> {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    config: serde_json::Value,
    config_hash: String,
    matrix_id: Option<&'a str>,
    artifacts: &'a [String],
}

/// SHA-256 of the parsed command line (output directory excluded).
pub fn config_hash(cli: &Cli) -> String {
    let config = serde_json::to_string(&cli.command).expect("serializable");
    let digest = Sha256::digest(config.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `files` into the output directory plus `<stem>.provenance.json`.
pub fn write_artifacts(
    cli: &Cli,
    stem: &str,
    matrix_id: Option<&str>,
    files: &[(String, String)],
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&cli.out_dir).with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let mut written = Vec::new();
    for (name, body) in files {
        let path = cli.out_dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    let names: Vec<String> = files.iter().map(|(n, _)| n.clone()).collect();
    let prov = Provenance {
        tool: "pgcone",
        version: env!("CARGO_PKG_VERSION"),
        command: std::env::args().collect(),
        config: serde_json::to_value(&cli.command).expect("serializable"),
        config_hash: config_hash(cli),
        matrix_id,
        artifacts: &names,
    };
    let path = cli.out_dir.join(format!("{stem}.provenance.json"));
    fs::write(&path, serde_json::to_string_pretty(&prov)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    written.push(path);
    for p in &written {
        eprintln!("wrote {}", p.display());
    }
    Ok(written)
}
