//! Trace files: CSV with header `timestamp,subject,attribute,value`.
//!
//! Rows may arrive in any order; they are grouped per `(subject, attribute)` and
//! sorted by timestamp. Malformed rows are collected with their line numbers and
//! the whole file is rejected unless [`IngestOptions::skip_bad_rows`] is set.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result, RowError};
use crate::series::{Sample, SampleSeries};

pub const HEADER: [&str; 4] = ["timestamp", "subject", "attribute", "value"];

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestOptions {
    pub skip_bad_rows: bool,
}

/// Parsed trace plus the rows that were dropped (only non-empty with `skip_bad_rows`).
#[derive(Debug, Clone)]
pub struct Trace {
    /// Series sorted by `(subject, attribute)`.
    pub series: Vec<SampleSeries>,
    pub skipped: Vec<RowError>,
}

impl Trace {
    pub fn get(&self, subject: &str, attribute: &str) -> Option<&SampleSeries> {
        self.series
            .iter()
            .find(|s| s.subject() == subject && s.attribute() == attribute)
    }
}

pub fn read_trace_file(path: impl AsRef<Path>, opts: IngestOptions) -> Result<Trace> {
    let file = std::fs::File::open(path.as_ref())?;
    read_trace(file, opts)
}

pub fn read_trace<R: Read>(reader: R, opts: IngestOptions) -> Result<Trace> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|e| Error::Input(format!("cannot read trace header: {e}")))?
        .clone();
    let found: Vec<&str> = headers.iter().collect();
    if found != HEADER {
        return Err(Error::Trace(vec![RowError {
            line: 1,
            message: format!(
                "expected header `{}`, found `{}`",
                HEADER.join(","),
                found.join(",")
            ),
        }]));
    }

    // (t, v, line) per series
    let mut groups: BTreeMap<(String, String), Vec<(f64, f64, u64)>> = BTreeMap::new();
    let mut bad = Vec::new();

    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                bad.push(RowError {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        match parse_row(&record) {
            Ok((t, subject, attribute, v)) => groups
                .entry((subject, attribute))
                .or_default()
                .push((t, v, line)),
            Err(message) => bad.push(RowError { line, message }),
        }
    }

    let mut series = Vec::with_capacity(groups.len());
    for ((subject, attribute), mut rows) in groups {
        rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        let mut samples: Vec<Sample> = Vec::with_capacity(rows.len());
        for (i, &(t, v, line)) in rows.iter().enumerate() {
            if i > 0 && rows[i - 1].0 == t {
                bad.push(RowError {
                    line,
                    message: format!(
                        "duplicate timestamp {t} for {subject}/{attribute} (first at line {})",
                        rows[i - 1].2
                    ),
                });
                continue;
            }
            samples.push(Sample::new(t, v));
        }
        if !samples.is_empty() {
            series.push(SampleSeries::new(subject, attribute, samples)?);
        }
    }

    bad.sort_by_key(|r| r.line);
    if !bad.is_empty() && !opts.skip_bad_rows {
        return Err(Error::Trace(bad));
    }
    Ok(Trace {
        series,
        skipped: bad,
    })
}

fn parse_row(record: &csv::StringRecord) -> std::result::Result<(f64, String, String, f64), String> {
    if record.len() != 4 {
        return Err(format!("expected 4 fields, found {}", record.len()));
    }
    let t: f64 = record[0]
        .parse()
        .map_err(|_| format!("timestamp `{}` is not a number", &record[0]))?;
    if !t.is_finite() {
        return Err(format!("timestamp `{}` is not finite", &record[0]));
    }
    let subject = record[1].to_string();
    let attribute = record[2].to_string();
    if subject.is_empty() || attribute.is_empty() {
        return Err("subject and attribute must be non-empty".into());
    }
    let v: f64 = record[3]
        .parse()
        .map_err(|_| format!("value `{}` is not a number", &record[3]))?;
    if !v.is_finite() {
        return Err(format!("value `{}` is not finite", &record[3]));
    }
    Ok((t, subject, attribute, v))
}

/// Writes series in the ingestion format, series by series in the given order.
pub fn write_trace<W: Write>(writer: W, series: &[SampleSeries]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    wtr.write_record(HEADER).map_err(to_io)?;
    for s in series {
        for sample in s.samples() {
            wtr.write_record([
                sample.t.to_string(),
                s.subject().to_string(),
                s.attribute().to_string(),
                sample.v.to_string(),
            ])
            .map_err(to_io)?;
        }
    }
    wtr.flush()?;
    Ok(())
}
