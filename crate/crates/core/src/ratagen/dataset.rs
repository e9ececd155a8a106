//! JSON Lines reading and writing for datasets and other record files.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{GenError, TaskInstance};

pub fn write_jsonl<T: Serialize, W: Write>(rows: &[T], mut sink: W) -> Result<(), GenError> {
    for row in rows {
        let line = serde_json::to_string(row).map_err(|e| GenError::Parse {
            line: 0,
            reason: e.to_string(),
        })?;
        writeln!(sink, "{line}")?;
    }
    sink.flush()?;
    Ok(())
}

/// Parse JSON Lines, skipping blank lines. Errors carry 1-based line numbers.
pub fn read_jsonl<T: DeserializeOwned, R: BufRead>(source: R) -> Result<Vec<T>, GenError> {
    let mut out = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| GenError::Parse {
            line: n + 1,
            reason: e.to_string(),
        })?);
    }
    Ok(out)
}

pub fn export<W: Write>(instances: &[TaskInstance], sink: W) -> Result<(), GenError> {
    write_jsonl(instances, sink)
}

pub fn import<R: BufRead>(source: R) -> Result<Vec<TaskInstance>, GenError> {
    read_jsonl(source)
}

pub fn import_path(path: impl AsRef<Path>) -> Result<Vec<TaskInstance>, GenError> {
    let file = std::fs::File::open(path)?;
    import(std::io::BufReader::new(file))
}
