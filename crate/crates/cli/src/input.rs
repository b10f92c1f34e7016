//! `category,value` CSV ingestion and emission.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use domorder_core::{Observation, ObservationSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("bad header: expected `category,value`, found `{0}`")]
    BadHeader(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
}

fn parse_error(line: u64, message: impl Into<String>) -> DataError {
    DataError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses CSV text with a `category,value` header into observations.
pub fn read_observations<R: Read>(reader: R) -> Result<ObservationSet, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(DataError::EmptyDataset),
        Some(Err(e)) => return Err(parse_error(1, e.to_string())),
        Some(Ok(h)) => h,
    };
    if header.len() != 2 || &header[0] != "category" || &header[1] != "value" {
        return Err(DataError::BadHeader(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }
    let mut out = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 2 {
            return Err(parse_error(
                line,
                format!("expected 2 fields, found {}", rec.len()),
            ));
        }
        let value: f64 = rec[1]
            .parse()
            .map_err(|_| parse_error(line, format!("`{}` is not a number", &rec[1])))?;
        if !value.is_finite() {
            return Err(parse_error(
                line,
                format!("`{}` is not a finite number", &rec[1]),
            ));
        }
        if rec[0].is_empty() {
            return Err(parse_error(line, "empty category"));
        }
        out.push(Observation::new(&rec[0], value));
    }
    if out.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    Ok(ObservationSet::new(out))
}

pub fn parse_csv(path: &Path) -> Result<ObservationSet, DataError> {
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_observations(io::BufReader::new(file))
}

/// Writes observations as `category,value` CSV.
pub fn write_observations<W: Write>(obs: &ObservationSet, writer: W) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["category", "value"])?;
    for r in &obs.records {
        wtr.write_record([r.category.as_str(), &r.value.to_string()])?;
    }
    wtr.flush()
}
