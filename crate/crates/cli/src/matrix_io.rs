//! Feature matrix CSV persistence. Header is the feature names followed by
//! `label` and `source_id`; rows are written in lexical source_id order and
//! values use shortest round-trip decimal formatting, so a rerun over
//! identical inputs is byte-identical and a reload is bit-exact.

use std::path::Path;

use eegtf::{Error, FamilySet, FeatureMatrix, FeatureRow, Result};

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or_default();
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        kind => Error::file_format(path, line, format!("{kind:?}")),
    }
}

pub fn write_matrix_csv(matrix: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    matrix.validate()?;
    let mut order: Vec<usize> = (0..matrix.rows.len()).collect();
    order.sort_by(|&a, &b| matrix.rows[a].source_id.cmp(&matrix.rows[b].source_id));

    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut header: Vec<&str> = matrix.feature_names.iter().map(String::as_str).collect();
    header.push("label");
    header.push("source_id");
    writer
        .write_record(&header)
        .map_err(|e| csv_error(path, e))?;
    for &i in &order {
        let row = &matrix.rows[i];
        let mut record: Vec<String> = row.values.iter().map(|v| format!("{v}")).collect();
        record.push(row.label.clone());
        record.push(row.source_id.clone());
        writer
            .write_record(&record)
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Columns must all belong to one family; a subset (e.g. a best-k
/// projection) keeps its family tag.
fn detect_family(names: &[String], path: &Path) -> Result<FamilySet> {
    for family in [FamilySet::Tf, FamilySet::TimeFreq] {
        let known = family.feature_names();
        if names.iter().all(|n| known.contains(&n.as_str())) {
            return Ok(family);
        }
    }
    Err(Error::file_format(
        path,
        1,
        "feature columns do not belong to a known family".to_string(),
    ))
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let columns: Vec<&str> = headers.iter().collect();
    if columns.len() < 3
        || columns[columns.len() - 2] != "label"
        || columns[columns.len() - 1] != "source_id"
    {
        return Err(Error::file_format(
            path,
            1,
            "header must end with label,source_id".to_string(),
        ));
    }
    let n_features = columns.len() - 2;
    let feature_names: Vec<String> = columns[..n_features].iter().map(|s| s.to_string()).collect();
    let family_set = detect_family(&feature_names, path)?;

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != columns.len() {
            return Err(Error::file_format(
                path,
                line,
                format!("expected {} fields, got {}", columns.len(), record.len()),
            ));
        }
        let values: Vec<f64> = record
            .iter()
            .take(n_features)
            .map(|s| {
                s.parse().map_err(|_| {
                    Error::file_format(path, line, format!("not a number: '{s}'"))
                })
            })
            .collect::<Result<_>>()?;
        rows.push(FeatureRow {
            values,
            label: record[n_features].to_string(),
            source_id: record[n_features + 1].to_string(),
        });
    }
    if rows.is_empty() {
        return Err(Error::file_format(path, 1, "no data rows".to_string()));
    }
    let matrix = FeatureMatrix {
        family_set,
        feature_names,
        rows,
    };
    matrix.validate()?;
    Ok(matrix)
}
