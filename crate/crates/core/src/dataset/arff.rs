//! ARFF reading and writing with labels as the leading attributes.
//!
//! Multi-label ARFF files put the `k` label attributes first and may carry the
//! label count in the relation name as `-C k`. Only dense data sections are
//! supported.

use std::io::{BufRead, BufReader, Read, Write};

use super::csv::parse_number;
use super::{Attribute, AttributeKind, AttributeSchema, Cell, Instance, MultiLabelDataset};
use crate::error::{Error, Result};

/// Parses an ARFF document whose first `label_count` attributes are labels.
/// Warnings (such as a disagreeing `-C` suffix) are logged.
pub fn parse_arff<R: Read>(source: R, label_count: usize) -> Result<MultiLabelDataset> {
    let (ds, warnings) = parse_arff_with_warnings(source, label_count)?;
    for w in warnings {
        log::warn!("{w}");
    }
    Ok(ds)
}

/// Like [`parse_arff`] but returns the warnings instead of logging them.
pub fn parse_arff_with_warnings<R: Read>(
    source: R,
    label_count: usize,
) -> Result<(MultiLabelDataset, Vec<String>)> {
    if label_count == 0 {
        return Err(Error::Config("label count must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let mut relation: Option<String> = None;
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut in_data = false;

    let reader = BufReader::new(source);
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if in_data {
            rows.push(parse_data_row(trimmed, &attributes, line_no)?);
            continue;
        }
        let (keyword, rest) = split_keyword(trimmed);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => {
                relation = Some(if rest.starts_with(['\'', '"']) {
                    read_name(rest, line_no)?.0
                } else {
                    rest.trim().to_string()
                });
            }
            "@attribute" => attributes.push(parse_attribute(rest, line_no)?),
            "@data" => {
                if attributes.is_empty() {
                    return Err(Error::parse(line_no, "@data before any @attribute"));
                }
                in_data = true;
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unexpected '{other}' in header"),
                ))
            }
        }
    }
    if !in_data {
        return Err(Error::parse(0, "missing @data section"));
    }
    if label_count > attributes.len() {
        return Err(Error::Config(format!(
            "label count {label_count} exceeds attribute count {}",
            attributes.len()
        )));
    }

    let relation = relation.unwrap_or_default();
    let (name, declared) = split_label_suffix(&relation);
    if let Some(declared) = declared {
        if declared != label_count as i64 {
            warnings.push(format!(
                "relation '{relation}' declares -C {declared} but label count {label_count} was requested; using {label_count}"
            ));
        }
    }

    // Label attributes may be declared {1,0}; normalise to {0,1}.
    for attr in attributes.iter_mut().take(label_count) {
        let cats = attr.categories().to_vec();
        let ok =
            cats.len() == 2 && cats.contains(&"0".to_string()) && cats.contains(&"1".to_string());
        if !ok {
            return Err(Error::Config(format!(
                "label attribute '{}' must be nominal {{0,1}}",
                attr.name
            )));
        }
    }
    let mut flip = vec![false; label_count];
    for (j, attr) in attributes.iter_mut().take(label_count).enumerate() {
        if attr.categories()[0] == "1" {
            flip[j] = true;
            attr.kind = AttributeKind::Nominal(vec!["0".into(), "1".into()]);
        }
    }
    for row in rows.iter_mut() {
        for (j, f) in flip.iter().enumerate() {
            if *f {
                if let Cell::Category(c) = row[j] {
                    row[j] = Cell::Category(1 - c);
                }
            }
        }
    }

    let schema = AttributeSchema::new(attributes, (0..label_count).collect())?;
    let instances = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| Instance::new(i, r))
        .collect();
    let ds = MultiLabelDataset::new(name, schema, instances)?;
    Ok((ds, warnings))
}

/// Writes `ds` as dense ARFF with labels first and a `-C k` relation suffix.
pub fn write_arff<W: Write>(ds: &MultiLabelDataset, mut out: W) -> Result<()> {
    let ds = ds.with_labels_first();
    let k = ds.label_count();
    writeln!(
        out,
        "@relation {}",
        quote(&format!("{}: -C {k}", ds.name()))
    )?;
    writeln!(out)?;
    for attr in ds.schema().attributes() {
        match &attr.kind {
            AttributeKind::Numeric => writeln!(out, "@attribute {} numeric", quote(&attr.name))?,
            AttributeKind::Nominal(cats) => {
                let list: Vec<String> = cats.iter().map(|c| quote(c)).collect();
                writeln!(
                    out,
                    "@attribute {} {{{}}}",
                    quote(&attr.name),
                    list.join(",")
                )?
            }
        }
    }
    writeln!(out)?;
    writeln!(out, "@data")?;
    let attrs = ds.schema().attributes();
    let mut line = String::new();
    for inst in ds.instances() {
        line.clear();
        for (col, cell) in inst.values().iter().enumerate() {
            if col > 0 {
                line.push(',');
            }
            match cell {
                Cell::Missing => line.push('?'),
                Cell::Numeric(v) => line.push_str(&v.to_string()),
                Cell::Category(c) => line.push_str(&quote(&attrs[col].categories()[*c as usize])),
            }
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == "?"
        || s.chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '\'' | '"' | '{' | '}' | '%' | '\\'))
}

fn quote(s: &str) -> String {
    if !needs_quotes(s) {
        return s.to_string();
    }
    let mut q = String::with_capacity(s.len() + 2);
    q.push('\'');
    for c in s.chars() {
        if c == '\'' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('\'');
    q
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(p) => (&line[..p], line[p..].trim_start()),
        None => (line, ""),
    }
}

/// Reads a possibly quoted name; returns it and the remainder of the line.
fn read_name(s: &str, line_no: usize) -> Result<(String, &str)> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        None => Err(Error::parse(line_no, "expected a name")),
        Some((_, q @ ('\'' | '"'))) => {
            let mut name = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    name.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((name, s[i + 1..].trim_start()));
                } else {
                    name.push(c);
                }
            }
            Err(Error::parse(line_no, "unterminated quote"))
        }
        Some(_) => {
            let end = s.find(char::is_whitespace).unwrap_or(s.len());
            Ok((s[..end].to_string(), s[end..].trim_start()))
        }
    }
}

fn parse_attribute(rest: &str, line_no: usize) -> Result<Attribute> {
    let (name, ty) = read_name(rest, line_no)?;
    let ty = ty.trim();
    if let Some(inner) = ty.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(line_no, "unterminated nominal list"))?;
        let cats: Vec<String> = split_fields(inner, line_no)?
            .into_iter()
            .map(|f| f.text)
            .collect();
        return Ok(Attribute::nominal(name, cats));
    }
    match ty.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => Ok(Attribute::numeric(name)),
        other => Err(Error::parse(
            line_no,
            format!("unsupported attribute type '{other}'"),
        )),
    }
}

struct Field {
    text: String,
    quoted: bool,
}

fn split_fields(s: &str, line_no: usize) -> Result<Vec<Field>> {
    let mut fields = Vec::new();
    let mut chars = s.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let mut text = String::new();
        let mut quoted = false;
        match chars.peek().copied() {
            Some(q @ ('\'' | '"')) => {
                quoted = true;
                chars.next();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    if c == '\\' {
                        if let Some(e) = chars.next() {
                            text.push(e);
                        }
                    } else if c == q {
                        closed = true;
                        break;
                    } else {
                        text.push(c);
                    }
                }
                if !closed {
                    return Err(Error::parse(line_no, "unterminated quote"));
                }
                while chars.peek().is_some_and(|c| c.is_whitespace()) {
                    chars.next();
                }
            }
            _ => {
                while let Some(&c) = chars.peek() {
                    if c == ',' {
                        break;
                    }
                    text.push(c);
                    chars.next();
                }
                text = text.trim_end().to_string();
            }
        }
        fields.push(Field { text, quoted });
        match chars.next() {
            None => break,
            Some(',') => continue,
            Some(c) => {
                return Err(Error::parse(
                    line_no,
                    format!("unexpected '{c}' after quoted value"),
                ))
            }
        }
    }
    Ok(fields)
}

fn parse_data_row(line: &str, attributes: &[Attribute], line_no: usize) -> Result<Vec<Cell>> {
    if line.starts_with('{') {
        return Err(Error::parse(line_no, "sparse ARFF rows are not supported"));
    }
    let fields = split_fields(line, line_no)?;
    if fields.len() != attributes.len() {
        return Err(Error::parse(
            line_no,
            format!(
                "expected {} values, found {}",
                attributes.len(),
                fields.len()
            ),
        ));
    }
    fields
        .iter()
        .zip(attributes)
        .map(|(f, attr)| {
            if !f.quoted && f.text == "?" {
                return Ok(Cell::Missing);
            }
            match &attr.kind {
                AttributeKind::Numeric => {
                    parse_number(&f.text).map(Cell::Numeric).ok_or_else(|| {
                        Error::parse(
                            line_no,
                            format!("'{}' is not numeric ({})", f.text, attr.name),
                        )
                    })
                }
                AttributeKind::Nominal(_) => attr
                    .category_index(&f.text)
                    .map(Cell::Category)
                    .ok_or_else(|| {
                        Error::parse(
                            line_no,
                            format!(
                                "undeclared value '{}' for attribute '{}'",
                                f.text, attr.name
                            ),
                        )
                    }),
            }
        })
        .collect()
}

/// The label count declared by a `-C k` suffix on the `@relation` line, if
/// any. Negative `k` (labels at the end) is not supported and yields `None`.
pub fn declared_label_count(document: &str) -> Option<usize> {
    for line in document.lines() {
        let t = line.trim();
        let (keyword, rest) = split_keyword(t);
        if keyword.eq_ignore_ascii_case("@relation") {
            let name = if rest.starts_with(['\'', '"']) {
                read_name(rest, 0).ok()?.0
            } else {
                rest.trim().to_string()
            };
            return split_label_suffix(&name)
                .1
                .and_then(|k| usize::try_from(k).ok());
        }
        if keyword.eq_ignore_ascii_case("@data") {
            return None;
        }
    }
    None
}

/// Splits `"name: -C 7"` into `("name", Some(7))`.
fn split_label_suffix(relation: &str) -> (String, Option<i64>) {
    let tokens: Vec<&str> = relation.split_whitespace().collect();
    for w in tokens.windows(2) {
        if w[0] == "-C" {
            if let Ok(k) = w[1].parse::<i64>() {
                let pos = relation.find("-C").unwrap_or(relation.len());
                let name = relation[..pos].trim_end().trim_end_matches(':').trim_end();
                return (name.to_string(), Some(k));
            }
        }
    }
    (relation.to_string(), None)
}
