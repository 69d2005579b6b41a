//! CSV and JSON formats: long-format series, labels, spectra, result tables
//! and flat metric documents. Writers emit LF line endings and shortest
//! round-trip decimal floats.

mod series;
mod tables;

pub use series::{read_series, read_series_with_inputs, write_inputs, write_series, SERIES_HEADER};
pub use tables::{
    read_labels, read_metrics, read_spectra, write_labels, write_metrics, write_spectra, Cell, ResultTable,
};

use std::io::{Read, Write};

use crate::{Error, Result};

/// Upper bound on cells in one file and in one dense series.
pub const MAX_CELLS: usize = 1 << 24;

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input)
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn from_csv(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io { path: String::new(), source },
        kind => parse_err(line, format!("{kind:?}")),
    }
}

fn record_line(rec: &csv::StringRecord) -> usize {
    rec.position().map_or(0, |p| p.line() as usize)
}

/// Reads the first record and checks it matches `expected`.
fn expect_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let mut rec = csv::StringRecord::new();
    if !rdr.read_record(&mut rec).map_err(from_csv)? {
        return Err(parse_err(1, "empty file"));
    }
    let got: Vec<&str> = rec.iter().collect();
    if got != expected {
        return Err(parse_err(1, format!("expected header {}, got {}", expected.join(","), got.join(","))));
    }
    Ok(())
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}
