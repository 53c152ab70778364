//! Reading and writing labeled sample files (`x,label`, label 1 or 2).

use std::io::{Read, Write};

use ovl_core::{Label, LabeledDataset};

pub const HEADER: [&str; 2] = ["x", "label"];

/// Parses a sample file. Errors carry the 1-based line number of the
/// offending row.
pub fn read_samples<R: Read>(reader: R) -> Result<Vec<(f64, Label)>, String> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| format!("line 1: {e}"))?;
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(format!(
            "line 1: expected header `x,label`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        ));
    }

    let mut samples = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| match e.position() {
            Some(p) => format!("line {}: {e}", p.line()),
            None => e.to_string(),
        })?;
        let line = record.position().map_or(row as u64 + 2, |p| p.line());
        if record.len() != 2 {
            return Err(format!("line {line}: expected 2 fields, found {}", record.len()));
        }
        let x: f64 = record[0].parse().map_err(|_| format!("line {line}: x `{}` is not a number", &record[0]))?;
        if !x.is_finite() {
            return Err(format!("line {line}: x must be finite, found `{}`", &record[0]));
        }
        let label = match &record[1] {
            "1" => Label::First,
            "2" => Label::Second,
            other => return Err(format!("line {line}: label must be 1 or 2, found `{other}`")),
        };
        samples.push((x, label));
    }
    if samples.is_empty() {
        return Err("input has no samples".into());
    }
    Ok(samples)
}

pub fn read_dataset<R: Read>(reader: R) -> Result<LabeledDataset, String> {
    let samples = read_samples(reader)?;
    LabeledDataset::new(&samples).map_err(|e| e.to_string())
}

/// Writes samples with the shortest round-trip representation of each x,
/// so reading the file back reproduces the values exactly.
pub fn write_samples<W: Write>(writer: W, samples: &[(f64, Label)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER)?;
    for &(x, y) in samples {
        w.write_record([x.to_string(), (y.index() + 1).to_string()])?;
    }
    w.flush()?;
    Ok(())
}
