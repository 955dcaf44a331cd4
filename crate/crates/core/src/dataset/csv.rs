use std::collections::BTreeSet;
use std::io::Read;

use super::{Attribute, AttributeKind, AttributeSchema, Cell, MultiLabelDataset};
use crate::error::{Error, Result};

pub const DEFAULT_MISSING_MARKER: &str = "?";

/// Reads a headed, comma-separated table.
///
/// Columns named in `label_columns` become binary labels and must only hold
/// `0` or `1`. Any other column is numeric when every non-missing cell parses
/// as a finite number, nominal otherwise (categories sorted lexicographically).
/// Cells equal to `missing_marker` are missing.
pub fn parse_csv<R: Read>(
    source: R,
    label_columns: &[&str],
    missing_marker: &str,
) -> Result<MultiLabelDataset> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(::csv::Trim::All)
        .from_reader(source);

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(e, 1))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::parse(1, "empty input"));
    }

    let mut label_indices = Vec::with_capacity(label_columns.len());
    for name in label_columns {
        let idx = header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("label column '{name}' not in header")))?;
        label_indices.push(idx);
    }

    let mut raw: Vec<Vec<String>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(e, i + 2))?;
        raw.push(record.iter().map(str::to_owned).collect());
    }
    if raw.is_empty() {
        return Err(Error::parse(2, "no data rows"));
    }

    let width = header.len();
    let mut attributes = Vec::with_capacity(width);
    for (col, name) in header.iter().enumerate() {
        if label_indices.contains(&col) {
            attributes.push(Attribute::binary_label(name.clone()));
            continue;
        }
        let present = raw
            .iter()
            .map(|r| r[col].as_str())
            .filter(|v| *v != missing_marker);
        let numeric = present.clone().all(|v| parse_number(v).is_some());
        if numeric {
            attributes.push(Attribute::numeric(name.clone()));
        } else {
            let cats: BTreeSet<&str> = present.collect();
            attributes.push(Attribute::nominal(name.clone(), cats));
        }
    }
    let schema = AttributeSchema::new(attributes, label_indices.clone())?;

    let mut rows = Vec::with_capacity(raw.len());
    for (r, record) in raw.iter().enumerate() {
        let mut cells = Vec::with_capacity(width);
        for (col, value) in record.iter().enumerate() {
            let attr = schema.attribute(col);
            let cell = if label_indices.contains(&col) {
                match value.as_str() {
                    "0" => Cell::Category(0),
                    "1" => Cell::Category(1),
                    other => {
                        return Err(Error::Config(format!(
                            "label '{}' row {}: value '{other}' is not binary (0/1)",
                            attr.name,
                            r + 2
                        )))
                    }
                }
            } else if value == missing_marker {
                Cell::Missing
            } else {
                match &attr.kind {
                    AttributeKind::Numeric => {
                        Cell::Numeric(parse_number(value).expect("checked during inference"))
                    }
                    AttributeKind::Nominal(_) => {
                        Cell::Category(attr.category_index(value).expect("category collected"))
                    }
                }
            };
            cells.push(cell);
        }
        rows.push(cells);
    }
    MultiLabelDataset::from_rows("csv", schema, rows)
}

pub(crate) fn parse_number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn csv_error(e: ::csv::Error, fallback_line: usize) -> Error {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback_line);
    match e.kind() {
        ::csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::parse(
            line,
            format!("ragged row: expected {expected_len} fields, found {len}"),
        ),
        _ => Error::parse(line, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_rows_two_labels() {
        let text = "age,Male,Female,score\n[10-20),1,0,1.5\n[20-30),0,1,2\n[10-20),0,1,?\n";
        let ds = parse_csv(text.as_bytes(), &["Male", "Female"], "?").unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.label_count(), 2);
        assert_eq!(ds.schema().label_names(), vec!["Male", "Female"]);
        assert_eq!(ds.label_row(0), vec![true, false]);
        assert_eq!(
            ds.schema().attribute(0).categories(),
            &["[10-20)", "[20-30)"]
        );
        let score = ds.schema().attribute(3);
        assert!(score.is_numeric());
        assert_eq!(ds.instance(2).get(3), Cell::Missing);
        assert_eq!(ds.instance(0).get(3), Cell::Numeric(1.5));
    }

    #[test]
    fn numeric_inference_needs_every_value() {
        let text = "v\n1\nx\n";
        let ds = parse_csv(text.as_bytes(), &[], "?").unwrap();
        assert!(!ds.schema().attribute(0).is_numeric());
        let text = "v\nNaN\n1\n";
        let ds = parse_csv(text.as_bytes(), &[], "?").unwrap();
        assert!(!ds.schema().attribute(0).is_numeric());
    }

    #[test]
    fn non_binary_label_is_config_error() {
        let text = "y,x\n2,1\n";
        assert!(matches!(
            parse_csv(text.as_bytes(), &["y"], "?"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn missing_label_is_config_error() {
        let text = "y,x\n?,1\n";
        assert!(matches!(
            parse_csv(text.as_bytes(), &["y"], "?"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unknown_label_name() {
        let text = "y,x\n1,1\n";
        assert!(matches!(
            parse_csv(text.as_bytes(), &["z"], "?"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn ragged_row_reports_line() {
        let text = "a,b\n1,2\n3\n";
        match parse_csv(text.as_bytes(), &[], "?") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(
            parse_csv("".as_bytes(), &[], "?"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_csv("a,b\n".as_bytes(), &[], "?"),
            Err(Error::Parse { .. })
        ));
    }
}
