use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::{CliError, CliResult};

pub fn open(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Pretty JSON followed by a newline.
pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut w = open(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn csv_writer(out: Option<&Path>) -> CliResult<csv::Writer<Box<dyn Write>>> {
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(open(out)?))
}

/// Resolves `--format` against the formats a command supports.
pub fn pick(requested: Option<Format>, default: Format, supported: &[Format], command: &str) -> CliResult<Format> {
    let f = requested.unwrap_or(default);
    if supported.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "`{command}` does not support --format {}; use {}",
            name(f),
            supported.iter().map(|&s| name(s)).collect::<Vec<_>>().join(" or ")
        )))
    }
}

fn name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}
