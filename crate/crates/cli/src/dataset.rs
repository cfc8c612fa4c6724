//! CSV datasets.
//!
//! A file holds one system per row. The header names the layout: `t1,…,tk`
//! for inter-failure spacings or `x1,…,xk` for raw component lifetimes, which
//! are sorted and differenced on load. A file without a header is read as
//! spacings unless `--lifetimes` is given. Values use `.` as the decimal
//! separator; NaN, infinities, non-positive values and ragged rows are
//! rejected with their position.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use loadshare_core::{spacings_from_lifetimes, Error as CoreError, Matrix, SpacingsMatrix};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Spacings,
    Lifetimes,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub layout: Layout,
    pub spacings: SpacingsMatrix,
}

fn header_layout(fields: &[&str]) -> Option<Layout> {
    let prefix = match fields.first()?.chars().next()? {
        't' => 't',
        'x' => 'x',
        _ => return None,
    };
    let matches = fields
        .iter()
        .enumerate()
        .all(|(j, f)| *f == format!("{prefix}{}", j + 1));
    match (matches, prefix) {
        (true, 't') => Some(Layout::Spacings),
        (true, _) => Some(Layout::Lifetimes),
        _ => None,
    }
}

fn looks_numeric(fields: &[&str]) -> bool {
    fields.iter().all(|f| f.parse::<f64>().is_ok())
}

/// Describes a data row for messages: 1-based row and file line.
fn locate(row: usize, header: bool) -> String {
    let line = row + 1 + usize::from(header);
    format!("row {} (line {line})", row + 1)
}

pub fn parse_dataset<R: Read>(reader: R, force_lifetimes: bool) -> Result<Dataset, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Data(format!("malformed CSV: {e}")))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push(rec);
    }
    let first = records
        .first()
        .ok_or_else(|| CliError::Data("empty dataset".into()))?;
    let fields: Vec<&str> = first.iter().collect();

    let (header, layout) = match header_layout(&fields) {
        Some(Layout::Spacings) if force_lifetimes => {
            return Err(CliError::Usage(
                "--lifetimes conflicts with a t1..tk (spacings) header".into(),
            ))
        }
        Some(layout) => (true, layout),
        None if looks_numeric(&fields) => (
            false,
            if force_lifetimes {
                Layout::Lifetimes
            } else {
                Layout::Spacings
            },
        ),
        None => {
            return Err(CliError::Data(format!(
                "unrecognized header {:?}: expected t1,…,tk or x1,…,xk",
                fields.join(",")
            )))
        }
    };

    let body = if header { &records[1..] } else { &records[..] };
    if body.is_empty() {
        return Err(CliError::Data("dataset has a header but no rows".into()));
    }
    let k = if header { fields.len() } else { body[0].len() };
    let mut values = Vec::with_capacity(body.len() * k);
    for (i, rec) in body.iter().enumerate() {
        if rec.len() != k {
            return Err(CliError::Data(format!(
                "{}: has {} values, expected {k}",
                locate(i, header),
                rec.len()
            )));
        }
        for (j, field) in rec.iter().enumerate() {
            let where_ = || format!("{}, column {}", locate(i, header), j + 1);
            let v: f64 = field
                .parse()
                .map_err(|_| CliError::Data(format!("{}: not a number: {field:?}", where_())))?;
            if !v.is_finite() {
                return Err(CliError::Data(format!(
                    "{}: non-finite value {field:?}",
                    where_()
                )));
            }
            if v <= 0.0 {
                return Err(CliError::Data(format!(
                    "{}: non-positive value {field}",
                    where_()
                )));
            }
            values.push(v);
        }
    }

    let matrix = Matrix::from_row_major(body.len(), k, values).map_err(CliError::data)?;
    let spacings = match layout {
        Layout::Spacings => SpacingsMatrix::new(matrix),
        Layout::Lifetimes => spacings_from_lifetimes(&matrix),
    }
    .map_err(|e| match e {
        CoreError::DuplicateLifetime { row, col } => CliError::Data(format!(
            "{}, column {}: duplicate lifetime (tied failure times give a zero spacing)",
            locate(row, header),
            col + 1
        )),
        other => CliError::data(other),
    })?;
    Ok(Dataset { layout, spacings })
}

pub fn read_dataset(path: &Path, force_lifetimes: bool) -> Result<Dataset, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    parse_dataset(file, force_lifetimes)
}

/// Writes spacings with a `t1,…,tk` header. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_spacings<W: Write>(mut out: W, t: &SpacingsMatrix) -> std::io::Result<()> {
    let header: Vec<String> = (1..=t.k()).map(|j| format!("t{j}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in t.iter_rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()
}
