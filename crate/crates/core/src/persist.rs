//! Versioned JSON model files.
//!
//! A saved model carries the schema it was trained on and a fingerprint of
//! that schema. Floats are written with shortest round-trip formatting and
//! parsed back exactly, so a reloaded model predicts bit-for-bit the same.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::AttributeSchema;
use crate::error::{Error, Result};
use crate::multilabel::MultiLabelModel;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistedModel {
    pub format_version: u32,
    /// Display name such as `CC/JRip`.
    pub name: String,
    pub fingerprint: String,
    pub schema: AttributeSchema,
    pub model: MultiLabelModel,
}

impl PersistedModel {
    pub fn new(name: impl Into<String>, schema: &AttributeSchema, model: MultiLabelModel) -> Self {
        PersistedModel {
            format_version: FORMAT_VERSION,
            name: name.into(),
            fingerprint: schema.fingerprint(),
            schema: schema.clone(),
            model,
        }
    }

    /// Errors with [`Error::SchemaMismatch`] unless `schema` is the one the
    /// model was trained on.
    pub fn check_schema(&self, schema: &AttributeSchema) -> Result<()> {
        let found = schema.fingerprint();
        if found != self.fingerprint {
            return Err(Error::SchemaMismatch {
                expected: self.fingerprint.clone(),
                found,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // Check the version before the payload so old files get a clear message.
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        match raw.get("format_version").and_then(|v| v.as_u64()) {
            Some(v) if v == FORMAT_VERSION as u64 => {}
            Some(v) => return Err(Error::Format(format!("unsupported format version {v}"))),
            None => return Err(Error::Format("missing format_version".into())),
        }
        let m: PersistedModel =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if m.schema.fingerprint() != m.fingerprint {
            return Err(Error::Format(
                "stored fingerprint does not match stored schema".into(),
            ));
        }
        Ok(m)
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_json()?.as_bytes())?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn read<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
