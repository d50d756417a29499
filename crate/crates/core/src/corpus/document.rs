use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A governing/dependent token index pair, `(head, dependent)`.
pub type DepPair = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Domestic,
    World,
    Society,
    Entertainment,
    Sports,
    Technology,
    Other,
}

impl Domain {
    pub const ALL: [Domain; 7] = [
        Domain::Domestic,
        Domain::World,
        Domain::Society,
        Domain::Entertainment,
        Domain::Sports,
        Domain::Technology,
        Domain::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Domestic => "domestic",
            Domain::World => "world",
            Domain::Society => "society",
            Domain::Entertainment => "entertainment",
            Domain::Sports => "sports",
            Domain::Technology => "technology",
            Domain::Other => "other",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Domain::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown domain `{s}`"))
    }
}

/// The two independent detection tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Ambiguous,
    Misleading,
}

impl Task {
    pub fn label_name(self) -> &'static str {
        match self {
            Task::Ambiguous => "label_ambiguous",
            Task::Misleading => "label_misleading",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Ambiguous => "ambiguous",
            Task::Misleading => "misleading",
        })
    }
}

/// One news item: a tokenized headline and body plus optional annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub headline: Vec<String>,
    pub body: Vec<Vec<String>>,
    pub domain: Domain,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub headline_deps: Option<Vec<DepPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body_deps: Option<Vec<Vec<DepPair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub headline_entities: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body_entity_strings: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_ambiguous: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_misleading: Option<bool>,
}

impl Document {
    /// Minimal document with no annotations or labels.
    pub fn new(id: impl Into<String>, headline: Vec<String>, body: Vec<Vec<String>>) -> Self {
        Document {
            id: id.into(),
            headline,
            body,
            domain: Domain::Other,
            source: String::new(),
            headline_deps: None,
            body_deps: None,
            headline_entities: None,
            body_entity_strings: None,
            label_ambiguous: None,
            label_misleading: None,
        }
    }

    pub fn label(&self, task: Task) -> Option<bool> {
        match task {
            Task::Ambiguous => self.label_ambiguous,
            Task::Misleading => self.label_misleading,
        }
    }

    pub fn set_label(&mut self, task: Task, value: Option<bool>) {
        match task {
            Task::Ambiguous => self.label_ambiguous = value,
            Task::Misleading => self.label_misleading = value,
        }
    }

    /// All body tokens in reading order.
    pub fn body_tokens(&self) -> impl Iterator<Item = &str> {
        self.body.iter().flatten().map(String::as_str)
    }

    pub fn body_len(&self) -> usize {
        self.body.iter().map(Vec::len).sum()
    }

    /// Checks that every annotation index points inside its sentence.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.headline.len();
        if let Some(deps) = &self.headline_deps {
            if let Some(&(h, d)) = deps.iter().find(|&&(h, d)| h >= n || d >= n) {
                return Err(format!(
                    "headline dependency ({h}, {d}) out of range for {n} tokens"
                ));
            }
        }
        if let Some(body_deps) = &self.body_deps {
            if body_deps.len() != self.body.len() {
                return Err(format!(
                    "body_deps has {} sentences but body has {}",
                    body_deps.len(),
                    self.body.len()
                ));
            }
            for (s, (deps, sentence)) in body_deps.iter().zip(&self.body).enumerate() {
                let len = sentence.len();
                if let Some(&(h, d)) = deps.iter().find(|&&(h, d)| h >= len || d >= len) {
                    return Err(format!(
                        "body sentence {s} dependency ({h}, {d}) out of range for {len} tokens"
                    ));
                }
            }
        }
        if let Some(ents) = &self.headline_entities {
            if let Some(&e) = ents.iter().find(|&&e| e >= n) {
                return Err(format!(
                    "headline entity index {e} out of range for {n} tokens"
                ));
            }
        }
        Ok(())
    }
}

/// Reads line-delimited JSON documents. Blank lines are ignored; line numbers
/// in errors are 1-based.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Corpus {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|e| Error::Corpus {
            line: line_no,
            message: e.to_string(),
        })?;
        doc.validate().map_err(|message| Error::Corpus {
            line: line_no,
            message,
        })?;
        if !seen.insert(doc.id.clone()) {
            return Err(Error::DuplicateId(doc.id));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_corpus<W: Write>(docs: &[Document], mut writer: W) -> Result<()> {
    for doc in docs {
        let line = serde_json::to_string(doc).map_err(|e| Error::json("serializing corpus", e))?;
        writeln!(writer, "{line}").map_err(|e| Error::io("writing corpus", e))?;
    }
    Ok(())
}
