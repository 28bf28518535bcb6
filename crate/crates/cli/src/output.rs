use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};

use crate::OutputArgs;

pub const OUT_DIR_VAR: &str = "PERMWORDLE_OUT_DIR";

/// Writes `text` to standard output or to the requested file.
pub fn emit(args: &OutputArgs, text: &str) -> Result<()> {
    match &args.out {
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os(OUT_DIR_VAR) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
    }
}

pub fn json_line<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}
