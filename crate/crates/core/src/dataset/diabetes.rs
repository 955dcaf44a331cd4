//! Preprocessing of the "Diabetes 130-US hospitals" encounter table into a
//! seven-label demographic dataset.

use std::fmt::Write as _;

use super::{Attribute, AttributeKind, AttributeSchema, Cell, Instance, MultiLabelDataset};
use crate::error::{Error, Result};

/// Label columns of the output, in order.
pub const DIABETES_LABELS: [&str; 7] = [
    "Caucasian",
    "AfricanAmerican",
    "Hispanic",
    "Asian",
    "Other",
    "Male",
    "Female",
];

/// Category added to `medical_specialty` for missing cells.
pub const MEDICAL_SPECIALTY_MISSING: &str = "missing";

const RACES: [&str; 5] = ["Caucasian", "AfricanAmerican", "Hispanic", "Asian", "Other"];
const GENDERS: [&str; 2] = ["Male", "Female"];

const REFERENCE_INSTANCES: usize = 98_054;
const REFERENCE_ATTRIBUTES: usize = 45;

const DROPPED: [(&str, &str); 4] = [
    ("weight", "too sparse"),
    (
        "payer_code",
        "high missing fraction, not relevant to outcome",
    ),
    ("encounter_id", "identifier removed for de-identification"),
    ("patient_nbr", "identifier removed for de-identification"),
];

#[derive(Clone, Debug, PartialEq)]
pub struct DroppedColumn {
    pub name: String,
    pub reason: String,
    pub missing_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreprocessReport {
    pub rows_in: usize,
    pub rows_dropped_missing_race: usize,
    pub rows_dropped_invalid_gender: usize,
    pub rows_out: usize,
    pub attributes_out: usize,
    pub columns_dropped: Vec<DroppedColumn>,
    pub columns_imputed: Vec<String>,
}

impl PreprocessReport {
    /// Flat `key=value` rendering, one entry per line.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "rows_in={}", self.rows_in);
        let _ = writeln!(
            s,
            "rows_dropped_missing_race={}",
            self.rows_dropped_missing_race
        );
        let _ = writeln!(
            s,
            "rows_dropped_invalid_gender={}",
            self.rows_dropped_invalid_gender
        );
        let _ = writeln!(s, "rows_out={}", self.rows_out);
        let _ = writeln!(s, "attributes_out={}", self.attributes_out);
        let _ = writeln!(s, "labels_out={}", DIABETES_LABELS.len());
        for (i, c) in self.columns_dropped.iter().enumerate() {
            let _ = writeln!(s, "columns_dropped.{i}.name={}", c.name);
            let _ = writeln!(s, "columns_dropped.{i}.reason={}", c.reason);
            let _ = writeln!(
                s,
                "columns_dropped.{i}.missing_fraction={}",
                c.missing_fraction
            );
        }
        let _ = writeln!(s, "columns_imputed={}", self.columns_imputed.join(","));
        let _ = writeln!(s, "reference_instances={REFERENCE_INSTANCES}");
        let _ = writeln!(s, "reference_attributes={REFERENCE_ATTRIBUTES}");
        s
    }
}

/// Turns the raw encounter table (parsed with `?` as missing marker) into the
/// seven-label demographic dataset.
///
/// Drops `weight`, `payer_code`, `encounter_id` and `patient_nbr`; fills
/// missing `medical_specialty` with its own category; removes rows with a
/// missing race or a gender other than Male/Female; and replaces `race` and
/// `gender` by the label columns of [`DIABETES_LABELS`], placed first.
pub fn preprocess_diabetes(
    raw: &MultiLabelDataset,
) -> Result<(MultiLabelDataset, PreprocessReport)> {
    let schema = raw.schema();
    let col = |name: &str| {
        schema
            .index_of(name)
            .ok_or_else(|| Error::Preprocess(format!("required column '{name}' is absent")))
    };
    let race_col = col("race")?;
    let gender_col = col("gender")?;
    let specialty_col = col("medical_specialty")?;
    let mut dropped_cols = Vec::new();
    for (name, _) in DROPPED {
        dropped_cols.push(col(name)?);
    }

    let race_map = category_map(schema.attribute(race_col), &RACES)?;
    let gender_map = category_map(schema.attribute(gender_col), &GENDERS)?;

    let specialty = schema.attribute(specialty_col);
    let (specialty_attr, missing_code) = match &specialty.kind {
        AttributeKind::Nominal(cats) => {
            let mut cats = cats.clone();
            let code = match cats.iter().position(|c| c == MEDICAL_SPECIALTY_MISSING) {
                Some(p) => p,
                None => {
                    cats.push(MEDICAL_SPECIALTY_MISSING.to_string());
                    cats.len() - 1
                }
            };
            (
                Attribute::nominal(specialty.name.clone(), cats),
                code as u32,
            )
        }
        // An all-missing column is inferred numeric by the CSV reader.
        AttributeKind::Numeric
            if raw
                .instances()
                .iter()
                .all(|i| i.get(specialty_col).is_missing()) =>
        {
            (
                Attribute::nominal(specialty.name.clone(), [MEDICAL_SPECIALTY_MISSING]),
                0,
            )
        }
        AttributeKind::Numeric => {
            return Err(Error::Preprocess(
                "medical_specialty must be nominal".into(),
            ));
        }
    };

    let rows_in = raw.len();
    let columns_dropped = DROPPED
        .iter()
        .zip(&dropped_cols)
        .map(|((name, reason), &c)| {
            let missing = raw
                .instances()
                .iter()
                .filter(|i| i.get(c).is_missing())
                .count();
            DroppedColumn {
                name: name.to_string(),
                reason: reason.to_string(),
                missing_fraction: if rows_in == 0 {
                    0.0
                } else {
                    missing as f64 / rows_in as f64
                },
            }
        })
        .collect();

    let kept: Vec<usize> = (0..schema.len())
        .filter(|c| *c != race_col && *c != gender_col && !dropped_cols.contains(c))
        .collect();

    let mut attributes: Vec<Attribute> = DIABETES_LABELS
        .iter()
        .map(|l| Attribute::binary_label(*l))
        .collect();
    for &c in &kept {
        if c == specialty_col {
            attributes.push(specialty_attr.clone());
        } else {
            attributes.push(schema.attribute(c).clone());
        }
    }
    let out_schema = AttributeSchema::new(attributes, (0..DIABETES_LABELS.len()).collect())?;

    let mut dropped_race = 0;
    let mut dropped_gender = 0;
    let mut instances = Vec::with_capacity(rows_in);
    for inst in raw.instances() {
        let race = match inst.get(race_col) {
            Cell::Category(c) => race_map[c as usize],
            _ => None,
        };
        let Some(race) = race else {
            if inst.get(race_col).is_missing() {
                dropped_race += 1;
                continue;
            }
            let Cell::Category(c) = inst.get(race_col) else {
                unreachable!()
            };
            return Err(Error::Preprocess(format!(
                "unexpected race value '{}' (row {})",
                schema.attribute(race_col).categories()[c as usize],
                inst.id()
            )));
        };
        let gender = match inst.get(gender_col) {
            Cell::Category(c) => gender_map[c as usize],
            _ => None,
        };
        let Some(gender) = gender else {
            dropped_gender += 1;
            continue;
        };
        let mut values = Vec::with_capacity(out_schema.len());
        for r in 0..RACES.len() {
            values.push(Cell::Category((r == race) as u32));
        }
        for g in 0..GENDERS.len() {
            values.push(Cell::Category((g == gender) as u32));
        }
        for &c in &kept {
            let v = inst.get(c);
            values.push(if c == specialty_col && v.is_missing() {
                Cell::Category(missing_code)
            } else {
                v
            });
        }
        instances.push(Instance::new(inst.id(), values));
    }

    let rows_out = instances.len();
    let attributes_out = out_schema.len();
    let ds = MultiLabelDataset::new("diabetes", out_schema, instances)?;
    let report = PreprocessReport {
        rows_in,
        rows_dropped_missing_race: dropped_race,
        rows_dropped_invalid_gender: dropped_gender,
        rows_out,
        attributes_out,
        columns_dropped,
        columns_imputed: vec!["medical_specialty".to_string()],
    };
    debug_assert_eq!(
        report.rows_out,
        report.rows_in - dropped_race - dropped_gender
    );
    Ok((ds, report))
}

/// Maps each category of a nominal column to its position in `wanted`.
fn category_map(attr: &Attribute, wanted: &[&str]) -> Result<Vec<Option<usize>>> {
    match &attr.kind {
        AttributeKind::Nominal(cats) => Ok(cats
            .iter()
            .map(|c| wanted.iter().position(|w| w == c))
            .collect()),
        AttributeKind::Numeric => Err(Error::Preprocess(format!(
            "column '{}' must be nominal",
            attr.name
        ))),
    }
}
