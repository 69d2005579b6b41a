use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

use num_complex::Complex64;

use super::{csv_reader, csv_writer, expect_header, fmt_f64, from_csv, parse_err, record_line, MAX_CELLS};
use crate::poly::Spectrum;
use crate::{Error, Result};

fn flush<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::Io { path: String::new(), source: e })
}

fn rows<R: Read>(input: R, header: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut rdr = csv_reader(input);
    expect_header(&mut rdr, header)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(from_csv)?;
        let line = record_line(&rec);
        if rec.len() != header.len() {
            return Err(parse_err(line, format!("expected {} fields, got {}", header.len(), rec.len())));
        }
        if out.len() >= MAX_CELLS {
            return Err(parse_err(line, format!("more than {MAX_CELLS} rows")));
        }
        out.push((line, rec));
    }
    Ok(out)
}

fn finite(line: usize, s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(line, format!("bad number {s:?}"))),
    }
}

/// `series_id,label` rows in file order; ids must be unique and non-empty.
pub fn read_labels<R: Read>(input: R) -> Result<Vec<(String, usize)>> {
    let mut seen = HashSet::new();
    rows(input, &["series_id", "label"])?
        .into_iter()
        .map(|(line, rec)| {
            if rec[0].is_empty() {
                return Err(parse_err(line, "empty series_id"));
            }
            if !seen.insert(rec[0].to_string()) {
                return Err(parse_err(line, format!("duplicate series_id {:?}", &rec[0])));
            }
            let label = rec[1].parse().map_err(|_| parse_err(line, format!("bad label {:?}", &rec[1])))?;
            Ok((rec[0].to_string(), label))
        })
        .collect()
}

pub fn write_labels<W: Write>(out: W, labels: &[(String, usize)]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["series_id", "label"]).map_err(from_csv)?;
    for (id, l) in labels {
        w.write_record([id.as_str(), &l.to_string()]).map_err(from_csv)?;
    }
    flush(w)
}

/// `series_id,re,im`, one row per eigenvalue, grouped by id in
/// first-appearance order.
pub fn read_spectra<R: Read>(input: R) -> Result<Vec<(String, Spectrum)>> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<Complex64>> = BTreeMap::new();
    for (line, rec) in rows(input, &["series_id", "re", "im"])? {
        if rec[0].is_empty() {
            return Err(parse_err(line, "empty series_id"));
        }
        let z = Complex64::new(finite(line, &rec[1])?, finite(line, &rec[2])?);
        groups
            .entry(rec[0].to_string())
            .or_insert_with(|| {
                order.push(rec[0].to_string());
                Vec::new()
            })
            .push(z);
    }
    Ok(order
        .into_iter()
        .map(|id| {
            let v = groups.remove(&id).expect("grouped");
            (id, Spectrum::new(v))
        })
        .collect())
}

pub fn write_spectra<W: Write>(out: W, spectra: &[(String, Spectrum)]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["series_id", "re", "im"]).map_err(from_csv)?;
    for (id, s) in spectra {
        for z in s.values() {
            w.write_record([id.as_str(), &fmt_f64(z.re), &fmt_f64(z.im)]).map_err(from_csv)?;
        }
    }
    flush(w)
}

/// Flat `{ "name": number }` document, keys sorted. Non-finite values are
/// written as `null`.
pub fn write_metrics<W: Write>(mut out: W, metrics: &BTreeMap<String, f64>) -> Result<()> {
    let io = |e| Error::Io { path: String::new(), source: e };
    serde_json::to_writer_pretty(&mut out, metrics).map_err(|e| io(e.into()))?;
    out.write_all(b"\n").map_err(io)
}

pub fn read_metrics<R: Read>(input: R) -> Result<BTreeMap<String, Option<f64>>> {
    serde_json::from_reader(input).map_err(|e| parse_err(e.line(), e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => String::new(),
            Cell::Num(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Cell {
        if s.is_empty() {
            return Cell::Num(f64::NAN);
        }
        if let Ok(i) = s.parse::<i64>() {
            return Cell::Int(i);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Cell::Num(v),
            _ => Cell::Text(s.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rectangular table with unique column names.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Result<Self> {
        let columns: Vec<String> = columns.into_iter().map(Into::into).collect();
        if columns.is_empty() {
            return Err(Error::ShapeError("table needs at least one column".into()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = columns.iter().find(|c| !seen.insert(c.as_str())) {
            return Err(Error::ShapeError(format!("duplicate column {dup:?}")));
        }
        Ok(Self { columns, rows: Vec::new() })
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::ShapeError(format!("row has {} cells, table {} columns", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record(&self.columns).map_err(from_csv)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render)).map_err(from_csv)?;
        }
        flush(w)
    }

    /// Integer-looking cells become `Int`, other numbers `Num`, empty cells
    /// `Num(NaN)`, anything else `Text`.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv_reader(input);
        let mut header = csv::StringRecord::new();
        if !rdr.read_record(&mut header).map_err(from_csv)? {
            return Err(parse_err(1, "empty file"));
        }
        let mut table = Self::new(header.iter()).map_err(|e| parse_err(1, e.to_string()))?;
        for rec in rdr.records() {
            let rec = rec.map_err(from_csv)?;
            let line = record_line(&rec);
            if table.rows.len() >= MAX_CELLS {
                return Err(parse_err(line, format!("more than {MAX_CELLS} rows")));
            }
            table.push(rec.iter().map(Cell::parse).collect()).map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_roundtrip_and_errors() {
        let l = vec![("a".to_string(), 1), ("b".to_string(), 0)];
        let mut out = Vec::new();
        write_labels(&mut out, &l).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "series_id,label\na,1\nb,0\n");
        assert_eq!(read_labels(out.as_slice()).unwrap(), l);
        assert!(read_labels("series_id,label\na,1\na,2\n".as_bytes()).is_err());
        assert!(read_labels("series_id,label\na,-1\n".as_bytes()).is_err());
        assert!(read_labels("series_id,lbl\n".as_bytes()).is_err());
        assert!(read_labels("".as_bytes()).is_err());
    }

    #[test]
    fn spectra_roundtrip() {
        let s = vec![
            ("x".to_string(), Spectrum::new(vec![Complex64::new(0.5, 0.25), Complex64::new(0.5, -0.25)])),
            ("y".to_string(), Spectrum::from_real(&[0.1])),
        ];
        let mut out = Vec::new();
        write_spectra(&mut out, &s).unwrap();
        assert_eq!(read_spectra(out.as_slice()).unwrap(), s);
        assert!(read_spectra("series_id,re,im\nx,1,NaN\n".as_bytes()).is_err());
    }

    #[test]
    fn metrics_json() {
        let m: BTreeMap<String, f64> = [("b".into(), 0.5), ("a".into(), f64::NAN)].into_iter().collect();
        let mut out = Vec::new();
        write_metrics(&mut out, &m).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "{\n  \"a\": null,\n  \"b\": 0.5\n}\n");
        let back = read_metrics(out.as_slice()).unwrap();
        assert_eq!(back["b"], Some(0.5));
        assert_eq!(back["a"], None);
        assert!(read_metrics("{\"a\": {\"b\": 1}}".as_bytes()).is_err());
    }

    #[test]
    fn table_roundtrip() {
        let mut t = ResultTable::new(["len", "method", "err"]).unwrap();
        t.push(vec![1000usize.into(), "arma".into(), 0.125.into()]).unwrap();
        t.push(vec![3000usize.into(), "a,b".into(), f64::NAN.into()]).unwrap();
        assert!(t.push(vec![Cell::Int(1)]).is_err());
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "len,method,err\n1000,arma,0.125\n3000,\"a,b\",\n");
        let back = ResultTable::read_csv(out.as_slice()).unwrap();
        assert_eq!(back.columns(), t.columns());
        assert_eq!(back.rows()[0], t.rows()[0]);
        assert!(ResultTable::new(["a", "a"]).is_err());
    }
}
