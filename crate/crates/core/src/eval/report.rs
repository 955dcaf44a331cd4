use std::fmt::Write as _;
use std::io::Write;

use super::grid::{GridResult, ResultRow, RowValues, Stat};
use crate::error::{Error, Result};
use crate::metrics::METRIC_NAMES;

const FIXED_COLUMNS: [&str; 5] = ["stage", "sample_size", "model", "evaluation", "status"];
const LABEL_PREFIX: &str = "label_accuracy.";

pub fn tsv_header(label_names: &[String]) -> String {
    let mut cols: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    for m in METRIC_NAMES {
        cols.push(m.to_string());
        cols.push(format!("{m}_std"));
    }
    for l in label_names {
        cols.push(format!("{LABEL_PREFIX}{l}"));
        cols.push(format!("{LABEL_PREFIX}{l}_std"));
    }
    cols.push("error".into());
    cols.join("\t")
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn push_stat(cols: &mut Vec<String>, s: &Stat) {
    cols.push(s.mean.to_string());
    cols.push(s.std.map(|v| v.to_string()).unwrap_or_default());
}

pub fn tsv_row(row: &ResultRow, label_count: usize) -> String {
    let mut cols = vec![
        clean(&row.stage),
        row.sample_size.to_string(),
        clean(&row.model),
        clean(&row.evaluation),
    ];
    match &row.outcome {
        Ok(v) => {
            cols.push("ok".into());
            v.metrics.iter().for_each(|s| push_stat(&mut cols, s));
            v.per_label_accuracy
                .iter()
                .for_each(|s| push_stat(&mut cols, s));
            cols.push(String::new());
        }
        Err(msg) => {
            cols.push("failed".into());
            cols.extend(std::iter::repeat_n(
                String::new(),
                2 * (METRIC_NAMES.len() + label_count),
            ));
            cols.push(clean(msg));
        }
    }
    cols.join("\t")
}

pub fn write_tsv<W: Write>(result: &GridResult, mut out: W) -> Result<()> {
    writeln!(out, "{}", tsv_header(&result.label_names))?;
    for row in &result.rows {
        writeln!(out, "{}", tsv_row(row, result.label_names.len()))?;
    }
    Ok(())
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("'{s}' is not a number")))
}

fn parse_stat(mean: &str, std: &str, line: usize) -> Result<Stat> {
    Ok(Stat {
        mean: parse_f64(mean, line)?,
        std: if std.is_empty() {
            None
        } else {
            Some(parse_f64(std, line)?)
        },
    })
}

/// Reads a TSV written by [`write_tsv`] (or assembled row by row).
pub fn parse_tsv(text: &str) -> Result<GridResult> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty results file"))?;
    let cols: Vec<&str> = header.split('\t').collect();
    let n_metrics = METRIC_NAMES.len();
    let fixed = FIXED_COLUMNS.len();
    if cols.len() < fixed + 2 * n_metrics + 1
        || cols[..fixed] != FIXED_COLUMNS
        || cols.last() != Some(&"error")
    {
        return Err(Error::parse(1, "not a results header"));
    }
    let label_cols = &cols[fixed + 2 * n_metrics..cols.len() - 1];
    let label_names: Vec<String> = label_cols
        .iter()
        .step_by(2)
        .map(|c| c.strip_prefix(LABEL_PREFIX).unwrap_or(c).to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != cols.len() {
            return Err(Error::parse(
                line_no,
                format!("{} fields, header has {}", f.len(), cols.len()),
            ));
        }
        let sample_size = f[1]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad sample size '{}'", f[1])))?;
        let outcome = match f[4] {
            "ok" => {
                let stats = |range: std::ops::Range<usize>| -> Result<Vec<Stat>> {
                    range
                        .step_by(2)
                        .map(|c| parse_stat(f[c], f[c + 1], line_no))
                        .collect()
                };
                Ok(RowValues {
                    metrics: stats(fixed..fixed + 2 * n_metrics)?,
                    per_label_accuracy: stats(fixed + 2 * n_metrics..cols.len() - 1)?,
                })
            }
            "failed" => Err(f[cols.len() - 1].to_string()),
            other => return Err(Error::parse(line_no, format!("unknown status '{other}'"))),
        };
        rows.push(ResultRow {
            stage: f[0].into(),
            sample_size,
            model: f[2].into(),
            evaluation: f[3].into(),
            outcome,
        });
    }
    Ok(GridResult { label_names, rows })
}

fn fmt_stat(s: &Stat) -> String {
    if s.mean.is_nan() {
        return "n/a".into();
    }
    match s.std {
        Some(std) => format!("{:.3} +/- {:.3}", s.mean, std),
        None => format!("{:.3}", s.mean),
    }
}

fn table(out: &mut String, header: &[String], body: &[Vec<String>]) {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in body {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |out: &mut String, cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(out, header);
    line(
        out,
        &width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
    );
    for row in body {
        line(out, row);
    }
    out.push('\n');
}

/// Distinct values in first-seen order.
fn distinct<T: PartialEq + Clone>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut v = Vec::new();
    for x in items {
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v
}

const LOSS_TABLE: [&str; 8] = [
    "exact_match",
    "hamming_score",
    "harmonic_score",
    "f1_micro",
    "ranking_loss",
    "one_error",
    "hamming_loss",
    "zero_one_loss",
];

/// Plain-text tables: overall accuracy per evaluation method, accuracy per
/// label, and the remaining multi-label measures.
pub fn render_tables(result: &GridResult) -> String {
    let mut out = String::new();
    let groups = distinct(result.rows.iter().map(|r| (r.stage.clone(), r.sample_size)));

    for (stage, size) in &groups {
        let rows: Vec<&ResultRow> = result
            .rows
            .iter()
            .filter(|r| &r.stage == stage && r.sample_size == *size)
            .collect();
        let evals = distinct(rows.iter().map(|r| r.evaluation.clone()));
        let models = distinct(rows.iter().map(|r| r.model.clone()));

        let _ = writeln!(out, "Overall accuracy: stage {stage}, {size} instances");
        let mut header = vec!["Model".to_string()];
        header.extend(evals.iter().cloned());
        let body: Vec<Vec<String>> = models
            .iter()
            .map(|m| {
                let mut cells = vec![m.clone()];
                for e in &evals {
                    let cell = rows.iter().find(|r| &r.model == m && &r.evaluation == e);
                    cells.push(match cell.map(|r| &r.outcome) {
                        Some(Ok(v)) => fmt_stat(&v.metric("accuracy").expect("known")),
                        Some(Err(_)) => "failed".into(),
                        None => String::new(),
                    });
                }
                cells
            })
            .collect();
        table(&mut out, &header, &body);

        for e in &evals {
            let _ = writeln!(
                out,
                "Accuracy per label: stage {stage}, {size} instances, {e}"
            );
            let mut header = vec!["Model".to_string(), "Overall".to_string()];
            header.extend(result.label_names.iter().cloned());
            let body: Vec<Vec<String>> = rows
                .iter()
                .filter(|r| &r.evaluation == e)
                .map(|r| {
                    let mut cells = vec![r.model.clone()];
                    match &r.outcome {
                        Ok(v) => {
                            cells.push(fmt_stat(&v.metric("accuracy").expect("known")));
                            cells.extend(v.per_label_accuracy.iter().map(fmt_stat));
                        }
                        Err(_) => cells.push("failed".into()),
                    }
                    cells
                })
                .collect();
            table(&mut out, &header, &body);
        }
    }

    let _ = writeln!(out, "Multi-label measures");
    let mut header = vec!["Model / size / evaluation".to_string()];
    header.extend(LOSS_TABLE.iter().map(|s| s.to_string()));
    let body: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|r| {
            let mut cells = vec![format!(
                "{} / {} / {}",
                r.model, r.sample_size, r.evaluation
            )];
            match &r.outcome {
                Ok(v) => cells.extend(
                    LOSS_TABLE
                        .iter()
                        .map(|m| fmt_stat(&v.metric(m).expect("known"))),
                ),
                Err(_) => cells.push("failed".into()),
            }
            cells
        })
        .collect();
    table(&mut out, &header, &body);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_result() -> GridResult {
        let values = RowValues {
            metrics: (0..METRIC_NAMES.len())
                .map(|i| Stat {
                    mean: 0.1 * i as f64 + 1.0 / 3.0,
                    std: Some(0.01),
                })
                .collect(),
            per_label_accuracy: vec![
                Stat {
                    mean: 0.9,
                    std: Some(0.0),
                },
                Stat {
                    mean: f64::NAN,
                    std: Some(f64::NAN),
                },
            ],
        };
        let mut split = values.clone();
        split
            .metrics
            .iter_mut()
            .chain(split.per_label_accuracy.iter_mut())
            .for_each(|s| s.std = None);
        GridResult {
            label_names: vec!["a".into(), "b c".into()],
            rows: vec![
                ResultRow {
                    stage: "s1".into(),
                    sample_size: 100,
                    model: "BR/ZeroR".into(),
                    evaluation: "cv 10".into(),
                    outcome: Ok(values),
                },
                ResultRow {
                    stage: "s1".into(),
                    sample_size: 100,
                    model: "BR/ZeroR".into(),
                    evaluation: "split 0.66".into(),
                    outcome: Ok(split),
                },
                ResultRow {
                    stage: "s1".into(),
                    sample_size: 100,
                    model: "CC/KNN(5)".into(),
                    evaluation: "cv 10".into(),
                    outcome: Err("training error: boom".into()),
                },
            ],
        }
    }

    fn same(a: &GridResult, b: &GridResult) -> bool {
        // NaN != NaN, so compare the TSV text instead.
        let mut x = Vec::new();
        let mut y = Vec::new();
        write_tsv(a, &mut x).unwrap();
        write_tsv(b, &mut y).unwrap();
        x == y
    }

    #[test]
    fn tsv_round_trip() {
        let r = sample_result();
        let mut buf = Vec::new();
        write_tsv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = parse_tsv(&text).unwrap();
        assert!(same(&r, &back));
        assert_eq!(
            back.rows[0].outcome.as_ref().unwrap().metrics[0].mean,
            1.0 / 3.0
        );
        assert_eq!(back.label_names, r.label_names);
        assert_eq!(back.rows[2].outcome, Err("training error: boom".into()));
    }

    #[test]
    fn tsv_rejects_garbage() {
        assert!(parse_tsv("").is_err());
        assert!(parse_tsv("a\tb\n").is_err());
        let mut buf = Vec::new();
        write_tsv(&sample_result(), &mut buf).unwrap();
        let text = String::from_utf8(buf)
            .unwrap()
            .replace("\tok\t", "\tmaybe\t");
        assert!(matches!(
            parse_tsv(&text),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn tables_show_every_section() {
        let t = render_tables(&sample_result());
        assert!(t.contains("Overall accuracy: stage s1, 100 instances"));
        assert!(t.contains("0.333 +/- 0.010"));
        assert!(t.contains("Accuracy per label: stage s1, 100 instances, cv 10"));
        assert!(t.contains("Multi-label measures"));
        assert!(t.contains("failed"));
        assert!(t.contains("n/a"));
    }
}
