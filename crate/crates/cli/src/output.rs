//! CSV / JSON emission. Both formats carry the same numeric payload; JSON
//! wraps the records in a schema-versioned document.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

fn open_sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            CliError::invalid(format!("cannot create {}: {}", path.display(), e))
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// One CSV row per record, RFC-4180 quoting, header from the field names.
pub fn write_csv<T: Serialize>(records: &[T], out: Option<&Path>) -> CliResult<()> {
    let sink = open_sink(out)?;
    let mut w = csv::Writer::from_writer(sink);
    for r in records {
        w.serialize(r)
            .map_err(|e| CliError::Internal(format!("csv: {}", e)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(doc: &T, out: Option<&Path>) -> CliResult<()> {
    let mut sink = open_sink(out)?;
    serde_json::to_writer_pretty(&mut sink, doc)
        .map_err(|e| CliError::Internal(format!("json: {}", e)))?;
    writeln!(sink)?;
    Ok(())
}

/// The JSON envelope shared by the table-producing commands.
#[derive(Serialize)]
pub struct Report<C: Serialize, R: Serialize, S: Serialize> {
    pub schema: u32,
    pub command: &'static str,
    pub config: C,
    pub records: Vec<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<S>,
    /// Wall-clock time; the one field a reproducible rerun may change.
    pub total_seconds: f64,
}
