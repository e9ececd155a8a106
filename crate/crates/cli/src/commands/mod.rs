//! One module per subcommand, plus the file helpers they share.

pub mod confidence;
pub mod eval;
pub mod generate;
pub mod report;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempqa_core::ratagen::{read_jsonl, write_jsonl};

use crate::CliResult;

/// Print `text`, or write it to `out`.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing standard output")?;
        }
    }
    Ok(())
}

pub fn save_jsonl<T: Serialize>(rows: &[T], path: &Path) -> CliResult<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_jsonl(rows, BufWriter::new(file)).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn load_jsonl<T: DeserializeOwned>(path: &Path) -> CliResult<Vec<T>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_jsonl(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?)
}
