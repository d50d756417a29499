//! Headline-to-label-sequence encoding for class sequential rule mining.
//!
//! Each headline token that belongs to a known word class becomes one item
//! label; tokens matching nothing are skipped. Which labels exist, and which
//! lexicon class backs each one, is set by an [`ItemInventory`].

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus::{Document, LexiconSet, Task};
use crate::error::{Error, Result};

/// Class names for labels matched by character rules instead of lexicons.
pub const RULE_NUMBER: &str = "#number";
pub const RULE_EXCLAIM: &str = "#exclaim";
pub const RULE_QUESTION: &str = "#question";
pub const RULE_ELLIPSIS: &str = "#ellipsis";

/// Default inventory: 12 word-type labels, 2 temporal labels, and one label
/// per conjunction class (23 in total). Order is match priority.
pub const DEFAULT_INVENTORY: [(&str, &str); 23] = [
    ("Number", RULE_NUMBER),
    ("Baitword", "clickbait_words"),
    ("Slang", "slang"),
    ("PunctExclaim", RULE_EXCLAIM),
    ("PunctQuestion", RULE_QUESTION),
    ("PunctEllipsis", RULE_ELLIPSIS),
    ("DegreeVery", "degree_very"),
    ("DegreeExtreme", "degree_extreme"),
    ("PosEval", "pos_eval"),
    ("NegEval", "neg_eval"),
    ("WHword", "interrogatives"),
    ("Ref", "forward_ref"),
    ("Past", "temporal_past"),
    ("Present", "temporal_present"),
    // Conjunction senses: adversative, coordinating, alternative,
    // hypothetical, causal, resultative, concessive, progressive, conditional.
    ("But", "conj_1"),
    ("And", "conj_2"),
    ("Or", "conj_3"),
    ("If", "conj_4"),
    ("Because", "conj_5"),
    ("So", "conj_6"),
    ("Although", "conj_7"),
    ("Moreover", "conj_8"),
    ("Unless", "conj_9"),
];

const CJK_NUMERALS: &str = "零〇一二两三四五六七八九十百千万亿";

/// A run of digits (ASCII, full-width, or CJK numerals), optionally with
/// decimal points, separators, or a trailing percent sign.
pub fn is_numeral(token: &str) -> bool {
    let mut digits = 0;
    for c in token.chars() {
        if c.is_numeric() || CJK_NUMERALS.contains(c) {
            digits += 1;
        } else if !matches!(c, '.' | ',' | '%' | '．' | '，' | '％') {
            return false;
        }
    }
    digits > 0
}

pub fn is_exclaim(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| matches!(c, '!' | '！'))
}

pub fn is_question(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| matches!(c, '?' | '？'))
}

pub fn is_ellipsis(token: &str) -> bool {
    if token.is_empty() {
        return false;
    }
    if token.chars().all(|c| c == '…') {
        return true;
    }
    let dots = token
        .chars()
        .filter(|&c| matches!(c, '.' | '。' | '·'))
        .count();
    dots >= 3 && dots == token.chars().count()
}

/// `!`, `?`, or ellipsis token.
pub fn is_punctuation(token: &str) -> bool {
    is_exclaim(token) || is_question(token) || is_ellipsis(token)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Matcher {
    Lexicon,
    Number,
    Exclaim,
    Question,
    Ellipsis,
}

impl Matcher {
    fn for_class(class: &str) -> Matcher {
        match class {
            RULE_NUMBER => Matcher::Number,
            RULE_EXCLAIM => Matcher::Exclaim,
            RULE_QUESTION => Matcher::Question,
            RULE_ELLIPSIS => Matcher::Ellipsis,
            _ => Matcher::Lexicon,
        }
    }

    fn matches_rule(&self, token: &str) -> bool {
        match self {
            Matcher::Lexicon => false,
            Matcher::Number => is_numeral(token),
            Matcher::Exclaim => is_exclaim(token),
            Matcher::Question => is_question(token),
            Matcher::Ellipsis => is_ellipsis(token),
        }
    }
}

/// Ordered item labels and the token lookup derived from a lexicon set.
#[derive(Debug, Clone)]
pub struct ItemInventory {
    labels: Vec<String>,
    classes: Vec<String>,
    matchers: Vec<Matcher>,
    /// Token to the first lexicon-backed label index containing it.
    lookup: HashMap<String, usize>,
}

impl ItemInventory {
    /// Builds an inventory from `(label, class)` pairs. Earlier pairs win
    /// when a token belongs to several classes.
    pub fn new<L, C>(pairs: impl IntoIterator<Item = (L, C)>, lex: &LexiconSet) -> Result<Self>
    where
        L: Into<String>,
        C: Into<String>,
    {
        let mut inv = ItemInventory {
            labels: Vec::new(),
            classes: Vec::new(),
            matchers: Vec::new(),
            lookup: HashMap::new(),
        };
        for (label, class) in pairs {
            let (label, class) = (label.into(), class.into());
            if inv.labels.contains(&label) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate item label `{label}`"
                )));
            }
            let matcher = Matcher::for_class(&class);
            if matcher == Matcher::Lexicon {
                let words = lex.class(&class).ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "label `{label}` names unknown word class `{class}`"
                    ))
                })?;
                let idx = inv.labels.len();
                for w in words {
                    inv.lookup.entry(w.clone()).or_insert(idx);
                }
            }
            inv.labels.push(label);
            inv.classes.push(class);
            inv.matchers.push(matcher);
        }
        if inv.labels.is_empty() {
            return Err(Error::InvalidConfig("item inventory is empty".into()));
        }
        Ok(inv)
    }

    pub fn default_for(lex: &LexiconSet) -> Self {
        Self::new(DEFAULT_INVENTORY, lex).expect("default inventory names known classes")
    }

    /// Parses the JSON configuration: an object mapping label to class name,
    /// key order significant.
    pub fn from_json(text: &str, lex: &LexiconSet) -> Result<Self> {
        let map: IndexMap<String, String> =
            serde_json::from_str(text).map_err(|e| Error::json("item inventory", e))?;
        Self::new(map, lex)
    }

    pub fn config(&self) -> IndexMap<String, String> {
        self.labels
            .iter()
            .cloned()
            .zip(self.classes.iter().cloned())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.config()).expect("string map serializes")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The label for one token, if any.
    pub fn label_of(&self, token: &str) -> Option<&str> {
        let lexical = self.lookup.get(token).copied().unwrap_or(usize::MAX);
        let by_rule = self.matchers[..lexical.min(self.matchers.len())]
            .iter()
            .position(|m| m.matches_rule(token));
        let idx = by_rule.or((lexical != usize::MAX).then_some(lexical))?;
        Some(&self.labels[idx])
    }
}

/// An encoded headline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSequence {
    pub items: Vec<String>,
    pub source_id: String,
}

impl LabelSequence {
    pub fn new(source_id: impl Into<String>, items: Vec<String>) -> Self {
        LabelSequence {
            items,
            source_id: source_id.into(),
        }
    }
}

/// Class label of a database entry: the positive class is the detected
/// (inaccurate) one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Positive,
    Negative,
}

impl Class {
    pub const BOTH: [Class; 2] = [Class::Positive, Class::Negative];
}

impl From<bool> for Class {
    fn from(b: bool) -> Self {
        if b {
            Class::Positive
        } else {
            Class::Negative
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Positive => "positive",
            Class::Negative => "negative",
        })
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Class::Positive),
            "negative" => Ok(Class::Negative),
            _ => Err(format!("unknown class `{s}`")),
        }
    }
}

/// Labeled label sequences: the miner's input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SequenceDatabase {
    pub entries: Vec<(LabelSequence, Class)>,
}

#[derive(Serialize, Deserialize)]
struct SequenceRecord {
    id: String,
    items: Vec<String>,
    class: Class,
}

impl SequenceDatabase {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, seq: LabelSequence, class: Class) {
        self.entries.push((seq, class));
    }

    /// Encodes every document's headline, labeled by `task`. Documents
    /// lacking the label are an error.
    pub fn from_documents(docs: &[Document], inv: &ItemInventory, task: Task) -> Result<Self> {
        let mut db = SequenceDatabase::default();
        for doc in docs {
            let label = doc.label(task).ok_or_else(|| Error::MissingLabel {
                id: doc.id.clone(),
                label: task.label_name(),
            })?;
            db.push(encode_document(doc, inv), label.into());
        }
        Ok(db)
    }

    /// Reads one `{"id", "items", "class"}` object per line.
    pub fn parse_jsonl<R: BufRead>(reader: R) -> Result<Self> {
        let mut db = SequenceDatabase::default();
        for (i, line) in reader.lines().enumerate() {
            let corpus_err = |message: String| Error::Corpus {
                line: i + 1,
                message,
            };
            let line = line.map_err(|e| corpus_err(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: SequenceRecord =
                serde_json::from_str(&line).map_err(|e| corpus_err(e.to_string()))?;
            db.push(LabelSequence::new(rec.id, rec.items), rec.class);
        }
        Ok(db)
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for (seq, class) in &self.entries {
            let rec = SequenceRecord {
                id: seq.source_id.clone(),
                items: seq.items.clone(),
                class: *class,
            };
            let line =
                serde_json::to_string(&rec).map_err(|e| Error::json("sequence record", e))?;
            writeln!(w, "{line}").map_err(|e| Error::io("writing sequences", e))?;
        }
        Ok(())
    }
}

/// Maps each matched token to its label, preserving order.
pub fn encode_headline<S: AsRef<str>>(tokens: &[S], inv: &ItemInventory) -> Vec<String> {
    tokens
        .iter()
        .filter_map(|t| inv.label_of(t.as_ref()))
        .map(str::to_owned)
        .collect()
}

pub fn encode_document(doc: &Document, inv: &ItemInventory) -> LabelSequence {
    LabelSequence::new(doc.id.clone(), encode_headline(&doc.headline, inv))
}

/// True when `needle` embeds into `haystack` at strictly increasing positions.
pub fn is_subsequence<T: PartialEq>(needle: &[T], haystack: &[T]) -> bool {
    let mut rest = haystack.iter();
    needle.iter().all(|x| rest.any(|y| y == x))
}
