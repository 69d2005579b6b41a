use std::collections::HashMap;
use std::io::{Read, Write};

use nalgebra::DMatrix;

use super::{csv_reader, csv_writer, expect_header, fmt_f64, parse_err, record_line, MAX_CELLS};
use crate::lds::{is_missing, TimeSeries, MISSING};
use crate::{Error, Result};

pub const SERIES_HEADER: [&str; 4] = ["series_id", "t", "channel", "value"];

/// Long-format cells grouped by series id, in first-appearance order.
struct LongTable {
    ids: Vec<String>,
    /// `(t, channel, value)` per series.
    cells: Vec<Vec<(usize, usize, f64)>>,
}

fn read_long<R: Read>(input: R) -> Result<LongTable> {
    let mut rdr = csv_reader(input);
    expect_header(&mut rdr, &SERIES_HEADER)?;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut table = LongTable { ids: Vec::new(), cells: Vec::new() };
    let mut total = 0usize;
    for rec in rdr.records() {
        let rec = rec.map_err(super::from_csv)?;
        let line = record_line(&rec);
        if rec.len() != 4 {
            return Err(parse_err(line, format!("expected 4 fields, got {}", rec.len())));
        }
        let id = &rec[0];
        if id.is_empty() {
            return Err(parse_err(line, "empty series_id"));
        }
        let t: usize = rec[1].parse().map_err(|_| parse_err(line, format!("bad t {:?}", &rec[1])))?;
        let ch: usize = rec[2].parse().map_err(|_| parse_err(line, format!("bad channel {:?}", &rec[2])))?;
        let value = if rec[3].is_empty() {
            MISSING
        } else {
            let v: f64 = rec[3].parse().map_err(|_| parse_err(line, format!("bad value {:?}", &rec[3])))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("non-finite value {:?}", &rec[3])));
            }
            v
        };
        if t >= MAX_CELLS || ch >= MAX_CELLS {
            return Err(parse_err(line, "index too large"));
        }
        total += 1;
        if total > MAX_CELLS {
            return Err(parse_err(line, format!("more than {MAX_CELLS} cells")));
        }
        let slot = *index.entry(id.to_string()).or_insert_with(|| {
            table.ids.push(id.to_string());
            table.cells.push(Vec::new());
            table.ids.len() - 1
        });
        table.cells[slot].push((t, ch, value));
    }
    Ok(table)
}

/// Dense `T × m` matrix from long cells; unlisted cells are missing.
fn densify(id: &str, cells: &[(usize, usize, f64)]) -> Result<DMatrix<f64>> {
    let t = cells.iter().map(|c| c.0).max().unwrap_or(0) + 1;
    let m = cells.iter().map(|c| c.1).max().unwrap_or(0) + 1;
    if t.saturating_mul(m) > MAX_CELLS {
        return Err(Error::ShapeError(format!("series {id}: {t}x{m} exceeds {MAX_CELLS} cells")));
    }
    let mut out = DMatrix::from_element(t, m, MISSING);
    let mut seen = vec![false; t * m];
    for &(row, col, v) in cells {
        let k = row * m + col;
        if seen[k] {
            return Err(Error::Parse { line: 0, msg: format!("series {id}: duplicate cell t={row} channel={col}") });
        }
        seen[k] = true;
        out[(row, col)] = v;
    }
    Ok(out)
}

/// Reads the long-format series CSV. Cells that are never listed, or listed
/// with an empty value, are missing.
pub fn read_series<R: Read>(input: R) -> Result<Vec<TimeSeries>> {
    let table = read_long(input)?;
    table
        .ids
        .iter()
        .zip(&table.cells)
        .map(|(id, cells)| TimeSeries::new(id.clone(), densify(id, cells)?, None))
        .collect()
}

/// Reads outputs plus a companion inputs file in the same format. Every
/// inputs id must name an output series of equal length, with no gaps.
pub fn read_series_with_inputs<R: Read, S: Read>(outputs: R, inputs: S) -> Result<Vec<TimeSeries>> {
    let mut series = read_series(outputs)?;
    let table = read_long(inputs)?;
    let by_id: HashMap<&str, usize> = series.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    let mut attached = vec![None; series.len()];
    for (id, cells) in table.ids.iter().zip(&table.cells) {
        let Some(&i) = by_id.get(id.as_str()) else {
            return Err(Error::ShapeError(format!("inputs for unknown series {id}")));
        };
        let x = densify(id, cells)?;
        if x.iter().any(|v| is_missing(*v)) {
            return Err(Error::ShapeError(format!("series {id}: inputs may not have missing cells")));
        }
        attached[i] = Some(x);
    }
    for (s, x) in series.iter_mut().zip(attached) {
        if let Some(x) = x {
            *s = TimeSeries::new(s.id.clone(), s.outputs().clone(), Some(x))?;
        }
    }
    Ok(series)
}

fn write_long<W: Write>(out: W, rows: impl Iterator<Item = (String, DMatrix<f64>)>) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SERIES_HEADER).map_err(super::from_csv)?;
    for (id, m) in rows {
        for t in 0..m.nrows() {
            for ch in 0..m.ncols() {
                let v = m[(t, ch)];
                let cell = if is_missing(v) { String::new() } else { fmt_f64(v) };
                w.write_record([id.as_str(), &t.to_string(), &ch.to_string(), &cell]).map_err(super::from_csv)?;
            }
        }
    }
    w.flush().map_err(|e| Error::Io { path: String::new(), source: e })
}

/// Writes outputs in long format; missing cells get an empty value.
pub fn write_series<W: Write>(out: W, series: &[TimeSeries]) -> Result<()> {
    write_long(out, series.iter().map(|s| (s.id.clone(), s.outputs().clone())))
}

/// Writes the inputs of every series that has them.
pub fn write_inputs<W: Write>(out: W, series: &[TimeSeries]) -> Result<()> {
    write_long(out, series.iter().filter_map(|s| s.inputs().map(|x| (s.id.clone(), x.clone()))))
}
