use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named feature values under a fixed schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub schema_id: String,
    names: Vec<String>,
    values: Vec<f64>,
}

impl FeatureVector {
    /// Panics when names repeat, lengths differ, or a value is not finite;
    /// all three indicate a bug in an extractor rather than bad input.
    pub fn new(schema_id: impl Into<String>, names: Vec<String>, values: Vec<f64>) -> Self {
        assert_eq!(
            names.len(),
            values.len(),
            "feature names and values differ in length"
        );
        let mut seen = HashSet::with_capacity(names.len());
        for n in &names {
            assert!(seen.insert(n.as_str()), "duplicate feature name `{n}`");
        }
        for (n, v) in names.iter().zip(&values) {
            assert!(v.is_finite(), "feature `{n}` is not finite: {v}");
        }
        FeatureVector {
            schema_id: schema_id.into(),
            names,
            values,
        }
    }

    pub fn from_pairs<N: Into<String>>(
        schema_id: impl Into<String>,
        pairs: impl IntoIterator<Item = (N, f64)>,
    ) -> Self {
        let (names, values): (Vec<String>, Vec<f64>) =
            pairs.into_iter().map(|(n, v)| (n.into(), v)).unzip();
        FeatureVector::new(schema_id, names, values)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().copied())
    }

    /// Appends `other` under a new schema id.
    pub fn concat(&self, other: &FeatureVector, schema_id: impl Into<String>) -> FeatureVector {
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        FeatureVector::new(schema_id, names, values)
    }

    /// Drops the named entry, if present, under a new schema id.
    pub fn without(&self, name: &str, schema_id: impl Into<String>) -> FeatureVector {
        let (names, values) = self
            .iter()
            .filter(|(n, _)| *n != name)
            .map(|(n, v)| (n.to_owned(), v))
            .unzip();
        FeatureVector::new(schema_id, names, values)
    }
}

/// Writes a feature matrix: a header of `id` plus feature names, then one
/// comma-separated row per document. All rows must share one schema.
pub fn write_matrix<W: Write>(rows: &[(String, FeatureVector)], mut w: W) -> Result<()> {
    let io = |e| Error::io("writing feature matrix", e);
    let Some((_, first)) = rows.first() else {
        return writeln!(w, "id").map_err(io);
    };
    let header: Vec<String> = std::iter::once("id".to_owned())
        .chain(first.names().iter().map(|n| csv_field(n)))
        .collect();
    writeln!(w, "{}", header.join(",")).map_err(io)?;
    for (id, fv) in rows {
        if fv.schema_id != first.schema_id || fv.names() != first.names() {
            return Err(Error::SchemaMismatch {
                expected: first.schema_id.clone(),
                found: fv.schema_id.clone(),
            });
        }
        write!(w, "{}", csv_field(id)).map_err(io)?;
        for v in fv.values() {
            write!(w, ",{v}").map_err(io)?;
        }
        writeln!(w).map_err(io)?;
    }
    Ok(())
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
