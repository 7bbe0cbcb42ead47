use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    passed: bool,
    result: &'a T,
}

/// Write `<out_dir>/<name>.json` with the config and versions embedded.
pub fn write_json<T: Serialize>(config: &RunConfig, name: &str, passed: bool, result: &T) -> Result<PathBuf, String> {
    let env = Envelope {
        tool: "querm",
        version: env!("CARGO_PKG_VERSION"),
        core_version: querm_core::VERSION,
        command: name,
        config,
        passed,
        result,
    };
    let path = ensure_dir(&config.out_dir)?.join(format!("{name}.json"));
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| e.to_string())?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| format!("writing {}: {e}", path.display()))?;
    Ok(path)
}

/// Write a CSV table from serializable rows.
pub fn write_csv<T: Serialize>(config: &RunConfig, name: &str, rows: &[T]) -> Result<PathBuf, String> {
    let path = ensure_dir(&config.out_dir)?.join(format!("{name}.csv"));
    let mut w = csv::Writer::from_path(&path).map_err(|e| format!("writing {}: {e}", path.display()))?;
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<&Path, String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
    Ok(dir)
}
