//! JSON and CSV writers shared by all commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::commands::CliError;

/// Opens `--out` or stdout.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| io_error(path, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Pretty JSON followed by a newline.
pub fn write_json<T: Serialize + ?Sized>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Io(e.to_string()))
}

/// CSV with an explicit header row (written even when there are no rows),
/// LF line endings and shortest round-trip float formatting.
pub fn write_csv<R: Serialize>(out: Option<&Path>, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<(), CliError> {
    let w = sink(out)?;
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let err = |e: csv::Error| CliError::Io(e.to_string());
    wtr.write_record(header).map_err(err)?;
    for row in rows {
        wtr.serialize(row).map_err(err)?;
    }
    wtr.flush().map_err(|e| CliError::Io(e.to_string()))
}
