//! Embedding CSV files: a header naming a time-label column `t`, an optional
//! ground-truth column `drift` (0/1) and feature columns `f0..f{d-1}`.

use std::io::{Read, Write};
use std::path::Path;

use driftloc_core::{DriftGroundTruth, LabeledDataset, Sample};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub dataset: LabeledDataset,
    pub truth: Option<DriftGroundTruth>,
}

enum Column {
    Time,
    Drift,
    Feature(usize),
}

fn classify(name: &str) -> Option<Column> {
    match name.trim() {
        "t" => Some(Column::Time),
        "drift" => Some(Column::Drift),
        s => s.strip_prefix('f').and_then(|j| {
            if j.starts_with('+') || (j.len() > 1 && j.starts_with('0')) {
                return None;
            }
            j.parse().ok().map(Column::Feature)
        }),
    }
}

pub fn load_embedding_csv(path: &Path) -> CliResult<EmbeddingTable> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    read_embedding_csv(file, path)
}

/// Parses from any reader; `path` only labels diagnostics. Line numbers
/// count the header as line 1.
pub fn read_embedding_csv<R: Read>(reader: R, path: &Path) -> CliResult<EmbeddingTable> {
    let schema = |line: u64, msg: String| CliError::Schema { path: path.to_path_buf(), line, msg };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| CliError::Csv(path.to_path_buf(), e))?.clone();

    let mut time_col = None;
    let mut drift_col = None;
    let mut feature_cols: Vec<Option<usize>> = Vec::new();
    for (c, name) in headers.iter().enumerate() {
        match classify(name) {
            Some(Column::Time) if time_col.is_none() => time_col = Some(c),
            Some(Column::Drift) if drift_col.is_none() => drift_col = Some(c),
            Some(Column::Feature(j)) => {
                if j >= feature_cols.len() {
                    feature_cols.resize(j + 1, None);
                }
                if feature_cols[j].replace(c).is_some() {
                    return Err(schema(1, format!("duplicate column {name:?}")));
                }
            }
            Some(_) => return Err(schema(1, format!("duplicate column {name:?}"))),
            None => return Err(schema(1, format!("unknown column {name:?}, expected t, drift or f<j>"))),
        }
    }
    let time_col = time_col.ok_or_else(|| schema(1, "missing time label column \"t\"".into()))?;
    if feature_cols.is_empty() {
        return Err(schema(1, "no feature columns f0..".into()));
    }
    let feature_cols: Vec<usize> = feature_cols
        .iter()
        .enumerate()
        .map(|(j, c)| c.ok_or_else(|| schema(1, format!("missing feature column f{j}"))))
        .collect::<CliResult<_>>()?;

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut drift = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::Csv(path.to_path_buf(), e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(schema(line, format!("expected {} fields, found {}", headers.len(), record.len())));
        }
        let t = record[time_col].trim();
        let label: usize =
            t.parse().map_err(|_| schema(line, format!("time label {t:?} is not a non-negative integer")))?;
        let x = feature_cols
            .iter()
            .map(|&c| {
                let v = record[c].trim();
                match v.parse::<f64>() {
                    Ok(f) if f.is_finite() => Ok(f),
                    _ => Err(schema(line, format!("feature {:?} value {v:?} is not a finite number", &headers[c]))),
                }
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if let Some(c) = drift_col {
            drift.push(match record[c].trim() {
                "0" => false,
                "1" => true,
                v => return Err(schema(line, format!("drift value {v:?} must be 0 or 1"))),
            });
        }
        labels.push((label, line));
        features.push(x);
    }
    if labels.is_empty() {
        return Err(schema(1, "no data rows".into()));
    }
    let n_time_labels = labels.iter().map(|l| l.0).max().unwrap_or(0) + 1;
    let mut seen = vec![false; n_time_labels];
    for &(l, _) in &labels {
        seen[l] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        let (max_label, line) = *labels.iter().find(|l| l.0 == n_time_labels - 1).expect("max label exists");
        return Err(schema(
            line,
            format!("unknown time label {max_label}: labels must be 0..k-1 without gaps, {missing} never occurs"),
        ));
    }
    let samples =
        features.into_iter().zip(&labels).map(|(features, &(time_label, _))| Sample { features, time_label }).collect();
    let dataset = LabeledDataset::new(samples, n_time_labels).map_err(CliError::Data)?;
    let truth = drift_col.map(|_| DriftGroundTruth::new(drift));
    Ok(EmbeddingTable { dataset, truth })
}

pub fn save_embedding_csv(path: &Path, table: &EmbeddingTable) -> CliResult<()> {
    let mut buf = Vec::new();
    write_embedding_csv(&mut buf, table).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    std::fs::write(path, buf).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Writes with shortest round-trip float formatting, so a load after a save
/// reproduces the dataset bit for bit.
pub fn write_embedding_csv<W: Write>(out: &mut W, table: &EmbeddingTable) -> std::io::Result<()> {
    let ds = &table.dataset;
    let mut header = vec!["t".to_string()];
    if table.truth.is_some() {
        header.push("drift".into());
    }
    header.extend((0..ds.dim()).map(|j| format!("f{j}")));
    writeln!(out, "{}", header.join(","))?;
    for (i, s) in ds.samples().iter().enumerate() {
        write!(out, "{}", s.time_label)?;
        if let Some(truth) = &table.truth {
            write!(out, ",{}", u8::from(truth.is_drifting[i]))?;
        }
        for v in &s.features {
            write!(out, ",{v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
