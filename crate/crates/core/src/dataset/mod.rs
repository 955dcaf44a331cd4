//! Tabular multi-label data: schema, instances, loaders and sampling.
//!
//! A [`MultiLabelDataset`] is an immutable table whose columns are described by
//! an [`AttributeSchema`]. Some columns are designated as labels; each label is
//! a nominal attribute with the categories `0` and `1`.

mod arff;
mod csv;
mod diabetes;
mod sampling;

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use self::arff::{declared_label_count, parse_arff, parse_arff_with_warnings, write_arff};
pub use self::csv::{parse_csv, DEFAULT_MISSING_MARKER};
pub use self::diabetes::{
    preprocess_diabetes, PreprocessReport, DIABETES_LABELS, MEDICAL_SPECIALTY_MISSING,
};
pub use self::sampling::{sample, split, SampleStrategy, DEFAULT_TRAIN_FRACTION};

/// Category list of every label attribute.
pub const LABEL_CATEGORIES: [&str; 2] = ["0", "1"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttributeKind {
    Nominal(Vec<String>),
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn nominal<S: Into<String>>(
        name: impl Into<String>,
        categories: impl IntoIterator<Item = S>,
    ) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Nominal(categories.into_iter().map(Into::into).collect()),
        }
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn binary_label(name: impl Into<String>) -> Self {
        Attribute::nominal(name, LABEL_CATEGORIES)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric)
    }

    /// Category names for nominal attributes, empty for numeric ones.
    pub fn categories(&self) -> &[String] {
        match &self.kind {
            AttributeKind::Nominal(c) => c,
            AttributeKind::Numeric => &[],
        }
    }

    pub fn category_index(&self, value: &str) -> Option<u32> {
        self.categories()
            .iter()
            .position(|c| c == value)
            .map(|i| i as u32)
    }

    fn is_binary_label(&self) -> bool {
        matches!(&self.kind, AttributeKind::Nominal(c) if c.len() == 2 && c[0] == "0" && c[1] == "1")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
    label_indices: Vec<usize>,
}

impl AttributeSchema {
    /// Builds a schema, checking name uniqueness, category lists and label
    /// columns. An empty `label_indices` describes a raw table without labels.
    pub fn new(attributes: Vec<Attribute>, label_indices: Vec<usize>) -> Result<Self> {
        let mut names = HashSet::new();
        for attr in &attributes {
            if !names.insert(attr.name.as_str()) {
                return Err(Error::Config(format!(
                    "duplicate attribute name '{}'",
                    attr.name
                )));
            }
            if let AttributeKind::Nominal(cats) = &attr.kind {
                if cats.is_empty() {
                    return Err(Error::Config(format!(
                        "nominal attribute '{}' has no categories",
                        attr.name
                    )));
                }
                let distinct: HashSet<&String> = cats.iter().collect();
                if distinct.len() != cats.len() {
                    return Err(Error::Config(format!(
                        "nominal attribute '{}' has duplicate categories",
                        attr.name
                    )));
                }
            }
        }
        let mut seen = HashSet::new();
        for &li in &label_indices {
            let attr = attributes.get(li).ok_or_else(|| {
                Error::Config(format!(
                    "label index {li} out of range ({} attributes)",
                    attributes.len()
                ))
            })?;
            if !seen.insert(li) {
                return Err(Error::Config(format!("label index {li} listed twice")));
            }
            if !attr.is_binary_label() {
                return Err(Error::Config(format!(
                    "label attribute '{}' must be nominal {{0,1}}",
                    attr.name
                )));
            }
        }
        Ok(AttributeSchema {
            attributes,
            label_indices,
        })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn label_indices(&self) -> &[usize] {
        &self.label_indices
    }

    pub fn label_count(&self) -> usize {
        self.label_indices.len()
    }

    pub fn is_label(&self, index: usize) -> bool {
        self.label_indices.contains(&index)
    }

    /// Column indices of all non-label attributes in schema order.
    pub fn feature_indices(&self) -> Vec<usize> {
        (0..self.attributes.len())
            .filter(|i| !self.label_indices.contains(i))
            .collect()
    }

    pub fn label_names(&self) -> Vec<String> {
        self.label_indices
            .iter()
            .map(|&i| self.attributes[i].name.clone())
            .collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Hex SHA-256 over a canonical rendering of the schema.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for attr in &self.attributes {
            hasher.update(attr.name.as_bytes());
            hasher.update([0u8]);
            match &attr.kind {
                AttributeKind::Numeric => hasher.update(b"numeric"),
                AttributeKind::Nominal(cats) => {
                    hasher.update(b"nominal");
                    for c in cats {
                        hasher.update([1u8]);
                        hasher.update(c.as_bytes());
                    }
                }
            }
            hasher.update([2u8]);
        }
        hasher.update(b"labels");
        for li in &self.label_indices {
            hasher.update((*li as u64).to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// One value of one attribute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Category(u32),
    Numeric(f64),
    Missing,
}

impl Cell {
    pub fn is_missing(self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn category(self) -> Option<u32> {
        match self {
            Cell::Category(c) => Some(c),
            _ => None,
        }
    }

    pub fn numeric(self) -> Option<f64> {
        match self {
            Cell::Numeric(v) => Some(v),
            _ => None,
        }
    }

    /// Checks that the cell is a legal value of `attr`.
    pub fn conforms_to(self, attr: &Attribute) -> bool {
        match (self, &attr.kind) {
            (Cell::Missing, _) => true,
            (Cell::Numeric(v), AttributeKind::Numeric) => v.is_finite(),
            (Cell::Category(c), AttributeKind::Nominal(cats)) => (c as usize) < cats.len(),
            _ => false,
        }
    }
}

/// A row of cells plus the row identity it had when first loaded.
///
/// The identity is never used as a feature; it only lets callers check that
/// sampling and splitting neither lose nor duplicate rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    id: usize,
    values: Arc<[Cell]>,
}

impl Instance {
    pub fn new(id: usize, values: Vec<Cell>) -> Self {
        Instance {
            id,
            values: values.into(),
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn values(&self) -> &[Cell] {
        &self.values
    }

    pub fn get(&self, index: usize) -> Cell {
        self.values[index]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiLabelDataset {
    name: String,
    schema: Arc<AttributeSchema>,
    instances: Vec<Instance>,
}

impl MultiLabelDataset {
    /// Validates every instance against the schema. Label cells must be present.
    pub fn new(
        name: impl Into<String>,
        schema: AttributeSchema,
        instances: Vec<Instance>,
    ) -> Result<Self> {
        let schema = Arc::new(schema);
        for (row, inst) in instances.iter().enumerate() {
            check_instance(&schema, inst.values(), row)?;
        }
        Ok(MultiLabelDataset {
            name: name.into(),
            schema,
            instances,
        })
    }

    /// Convenience constructor that assigns row identities `0..n`.
    pub fn from_rows(
        name: impl Into<String>,
        schema: AttributeSchema,
        rows: Vec<Vec<Cell>>,
    ) -> Result<Self> {
        let instances = rows
            .into_iter()
            .enumerate()
            .map(|(i, v)| Instance::new(i, v))
            .collect();
        MultiLabelDataset::new(name, schema, instances)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn instance(&self, i: usize) -> &Instance {
        &self.instances[i]
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn label_count(&self) -> usize {
        self.schema.label_count()
    }

    /// Relevance of label `j` (position in `label_indices`) for instance `i`.
    pub fn label(&self, i: usize, j: usize) -> bool {
        let col = self.schema.label_indices[j];
        self.instances[i].values[col] == Cell::Category(1)
    }

    /// The relevance vector of instance `i`, in label order.
    pub fn label_row(&self, i: usize) -> Vec<bool> {
        (0..self.label_count()).map(|j| self.label(i, j)).collect()
    }

    /// New dataset with the instances at `rows`, in that order. Row identities
    /// are carried over.
    pub fn subset(&self, rows: &[usize]) -> MultiLabelDataset {
        MultiLabelDataset {
            name: self.name.clone(),
            schema: Arc::clone(&self.schema),
            instances: rows.iter().map(|&r| self.instances[r].clone()).collect(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Rearranges columns: new column `c` is old column `order[c]`. Label
    /// designation follows the columns, and label order follows the new column
    /// order.
    pub fn reorder_columns(&self, order: &[usize]) -> Result<MultiLabelDataset> {
        let width = self.schema.len();
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..width).collect::<Vec<_>>() {
            return Err(Error::Config("column order must be a permutation".into()));
        }
        let attributes = order
            .iter()
            .map(|&o| self.schema.attributes[o].clone())
            .collect();
        let label_indices = order
            .iter()
            .enumerate()
            .filter(|(_, o)| self.schema.is_label(**o))
            .map(|(c, _)| c)
            .collect();
        let schema = AttributeSchema::new(attributes, label_indices)?;
        let instances = self
            .instances
            .iter()
            .map(|inst| Instance::new(inst.id, order.iter().map(|&o| inst.values[o]).collect()))
            .collect();
        Ok(MultiLabelDataset {
            name: self.name.clone(),
            schema: Arc::new(schema),
            instances,
        })
    }

    /// Moves label columns to the front, keeping the current label order and
    /// the relative order of the features.
    pub fn with_labels_first(&self) -> MultiLabelDataset {
        let mut order: Vec<usize> = self.schema.label_indices.clone();
        order.extend(self.schema.feature_indices());
        // label_indices may not be ascending; reorder_columns assigns labels in
        // column order, which here equals the old label order.
        self.reorder_columns(&order)
            .expect("label-first order is a permutation")
    }

    /// Returns a dataset whose label order is permuted: label `j` of the
    /// result is label `perm[j]` of `self`. Columns are rearranged so labels
    /// come first.
    pub fn permute_labels(&self, perm: &[usize]) -> Result<MultiLabelDataset> {
        let k = self.label_count();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..k).collect::<Vec<_>>() {
            return Err(Error::Config(
                "label permutation is not a permutation".into(),
            ));
        }
        let mut order: Vec<usize> = perm.iter().map(|&p| self.schema.label_indices[p]).collect();
        order.extend(self.schema.feature_indices());
        self.reorder_columns(&order)
    }
}

fn check_instance(schema: &AttributeSchema, values: &[Cell], row: usize) -> Result<()> {
    if values.len() != schema.len() {
        return Err(Error::Config(format!(
            "row {row}: {} values for {} attributes",
            values.len(),
            schema.len()
        )));
    }
    for (col, (cell, attr)) in values.iter().zip(&schema.attributes).enumerate() {
        if !cell.conforms_to(attr) {
            return Err(Error::Config(format!(
                "row {row}: value {cell:?} does not fit attribute '{}' (column {col})",
                attr.name
            )));
        }
    }
    for &li in &schema.label_indices {
        if values[li].is_missing() {
            return Err(Error::Config(format!(
                "row {row}: label '{}' is missing",
                schema.attributes[li].name
            )));
        }
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::fixtures::tiny;
    use super::*;

    #[test]
    fn schema_rejects_duplicate_names() {
        let err = AttributeSchema::new(
            vec![Attribute::numeric("x"), Attribute::numeric("x")],
            vec![],
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn schema_rejects_non_binary_label() {
        let err = AttributeSchema::new(vec![Attribute::nominal("y", ["0", "1", "2"])], vec![0]);
        assert!(matches!(err, Err(Error::Config(_))));
        let err = AttributeSchema::new(vec![Attribute::numeric("y")], vec![0]);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn schema_rejects_bad_categories() {
        assert!(
            AttributeSchema::new(vec![Attribute::nominal("c", Vec::<String>::new())], vec![])
                .is_err()
        );
        assert!(AttributeSchema::new(vec![Attribute::nominal("c", ["u", "u"])], vec![]).is_err());
    }

    #[test]
    fn schema_rejects_label_index_problems() {
        let attrs = vec![Attribute::binary_label("a")];
        assert!(AttributeSchema::new(attrs.clone(), vec![1]).is_err());
        assert!(AttributeSchema::new(attrs, vec![0, 0]).is_err());
    }

    #[test]
    fn missing_label_cell_is_rejected() {
        let schema = AttributeSchema::new(vec![Attribute::binary_label("a")], vec![0]).unwrap();
        let err = MultiLabelDataset::from_rows("d", schema, vec![vec![Cell::Missing]]);
        assert!(err.is_err());
    }

    #[test]
    fn ragged_instance_is_rejected() {
        let schema = AttributeSchema::new(vec![Attribute::numeric("x")], vec![]).unwrap();
        let err = MultiLabelDataset::from_rows(
            "d",
            schema,
            vec![vec![Cell::Numeric(1.0), Cell::Missing]],
        );
        assert!(err.is_err());
    }

    #[test]
    fn label_access_and_subset() {
        let ds = tiny();
        assert_eq!(ds.label_count(), 2);
        assert_eq!(ds.label_row(2), vec![true, true]);
        let sub = ds.subset(&[3, 1]);
        assert_eq!(sub.len(), 2);
        assert_eq!(sub.instance(0).id(), 3);
        assert_eq!(sub.label_row(1), vec![false, true]);
        assert_eq!(ds.schema().feature_indices(), vec![2, 3]);
    }

    #[test]
    fn permute_labels_swaps_label_columns() {
        let ds = tiny();
        let p = ds.permute_labels(&[1, 0]).unwrap();
        assert_eq!(p.schema().label_names(), vec!["b", "a"]);
        for i in 0..ds.len() {
            let mut r = ds.label_row(i);
            r.reverse();
            assert_eq!(p.label_row(i), r);
        }
    }

    #[test]
    fn fingerprint_depends_on_schema() {
        let a = tiny();
        let b = a.permute_labels(&[1, 0]).unwrap();
        assert_ne!(a.schema().fingerprint(), b.schema().fingerprint());
        assert_eq!(a.schema().fingerprint(), tiny().schema().fingerprint());
    }
}
