use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type WordSet = BTreeSet<String>;

/// Number of conjunction classes every lexicon directory must provide.
pub const CONJUNCTION_CLASSES: usize = 9;

/// Optional single-list files, by stem. The stem doubles as the class name
/// used by item inventories.
pub const LIST_NAMES: [&str; 13] = [
    "clickbait_words",
    "slang",
    "degree_very",
    "degree_extreme",
    "pos_eval",
    "neg_eval",
    "pos_emotion",
    "neg_emotion",
    "subjective",
    "interrogatives",
    "forward_ref",
    "temporal_past",
    "temporal_present",
];

pub const RELATIONS_FILE: &str = "relations.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Synonym,
    Hypernym,
    Hyponym,
    Antonym,
}

impl Relation {
    /// The relation read in the opposite direction.
    pub fn inverse(self) -> Relation {
        match self {
            Relation::Hypernym => Relation::Hyponym,
            Relation::Hyponym => Relation::Hypernym,
            r => r,
        }
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "synonym" => Ok(Relation::Synonym),
            "hypernym" => Ok(Relation::Hypernym),
            "hyponym" => Ok(Relation::Hyponym),
            "antonym" => Ok(Relation::Antonym),
            _ => Err(format!("unknown relation `{s}`")),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Synonym => "synonym",
            Relation::Hypernym => "hypernym",
            Relation::Hyponym => "hyponym",
            Relation::Antonym => "antonym",
        })
    }
}

/// Lexical relations between word pairs. An entry `(a, b) -> Hypernym`
/// reads "b is a hypernym of a".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Relations {
    pairs: BTreeMap<String, BTreeMap<String, Relation>>,
}

impl Relations {
    pub fn insert(&mut self, a: impl Into<String>, b: impl Into<String>, rel: Relation) {
        self.pairs
            .entry(a.into())
            .or_default()
            .insert(b.into(), rel);
    }

    /// Relation of `b` relative to `a`, consulting the reversed pair when the
    /// direct one is absent.
    pub fn lookup(&self, a: &str, b: &str) -> Option<Relation> {
        let direct = |x: &str, y: &str| self.pairs.get(x).and_then(|m| m.get(y)).copied();
        direct(a, b).or_else(|| direct(b, a).map(Relation::inverse))
    }

    pub fn len(&self) -> usize {
        self.pairs.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Relations> {
        let mut rel = Relations::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_start_matches('\u{feff}').trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let bad = |message: String| Error::Lexicon {
                path: origin.to_path_buf(),
                message: format!("line {}: {message}", i + 1),
            };
            if fields.len() != 3 {
                return Err(bad(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let r = fields[2].parse::<Relation>().map_err(bad)?;
            rel.insert(fields[0], fields[1], r);
        }
        Ok(rel)
    }
}

/// Every word list consumed by the feature extractors and the encoder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexiconSet {
    pub clickbait_words: WordSet,
    pub slang: WordSet,
    pub degree_very: WordSet,
    pub degree_extreme: WordSet,
    pub pos_eval: WordSet,
    pub neg_eval: WordSet,
    pub pos_emotion: WordSet,
    pub neg_emotion: WordSet,
    pub subjective: WordSet,
    pub interrogatives: WordSet,
    /// Demonstratives and personal pronouns.
    pub forward_ref: WordSet,
    pub temporal_past: WordSet,
    pub temporal_present: WordSet,
    /// `(conj_1, ...)` through `(conj_9, ...)`, in order.
    pub conjunction_classes: Vec<(String, WordSet)>,
    pub relations: Relations,
}

fn parse_list(text: &str) -> WordSet {
    text.lines()
        .map(|l| l.trim_start_matches('\u{feff}').trim())
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect()
}

fn read_utf8(path: &Path) -> Result<Option<String>> {
    match fs::read(path) {
        Ok(bytes) => String::from_utf8(bytes)
            .map(Some)
            .map_err(|e| Error::Lexicon {
                path: path.to_path_buf(),
                message: format!("not valid UTF-8 ({e})"),
            }),
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::io(format!("reading {}", path.display()), e)),
    }
}

impl LexiconSet {
    /// Builds a set from a source of file contents keyed by file name.
    /// `source` returns `None` for files that do not exist.
    fn from_source<F>(root: &Path, mut source: F) -> Result<LexiconSet>
    where
        F: FnMut(&str) -> Result<Option<String>>,
    {
        let mut lex = LexiconSet::default();
        for name in LIST_NAMES {
            let words = source(&format!("{name}.txt"))?
                .map(|t| parse_list(&t))
                .unwrap_or_default();
            *lex.list_mut(name).expect("known list name") = words;
        }
        for k in 1..=CONJUNCTION_CLASSES {
            let name = format!("conj_{k}");
            let text = source(&format!("{name}.txt"))?.ok_or_else(|| Error::Lexicon {
                path: root.join(format!("{name}.txt")),
                message: format!(
                    "missing; all {CONJUNCTION_CLASSES} conjunction classes are required"
                ),
            })?;
            lex.conjunction_classes.push((name, parse_list(&text)));
        }
        if let Some(text) = source(RELATIONS_FILE)? {
            lex.relations = Relations::parse(&text, &root.join(RELATIONS_FILE))?;
        }
        Ok(lex)
    }

    /// Loads every list from `dir`. Missing optional lists are empty; the nine
    /// `conj_N.txt` files are mandatory.
    pub fn load(dir: &Path) -> Result<LexiconSet> {
        if !dir.is_dir() {
            return Err(Error::Lexicon {
                path: dir.to_path_buf(),
                message: "not a directory".into(),
            });
        }
        Self::from_source(dir, |file| read_utf8(&dir.join(file)))
    }

    /// The small Chinese lexicon bundled with the crate.
    pub fn builtin() -> LexiconSet {
        Self::from_source(Path::new("<builtin>"), |file| {
            Ok(builtin_file(file).map(str::to_owned))
        })
        .expect("bundled lexicons are well-formed")
    }

    fn list_mut(&mut self, name: &str) -> Option<&mut WordSet> {
        Some(match name {
            "clickbait_words" => &mut self.clickbait_words,
            "slang" => &mut self.slang,
            "degree_very" => &mut self.degree_very,
            "degree_extreme" => &mut self.degree_extreme,
            "pos_eval" => &mut self.pos_eval,
            "neg_eval" => &mut self.neg_eval,
            "pos_emotion" => &mut self.pos_emotion,
            "neg_emotion" => &mut self.neg_emotion,
            "subjective" => &mut self.subjective,
            "interrogatives" => &mut self.interrogatives,
            "forward_ref" => &mut self.forward_ref,
            "temporal_past" => &mut self.temporal_past,
            "temporal_present" => &mut self.temporal_present,
            _ => return None,
        })
    }

    /// Looks up a word class by name: a list stem or `conj_1`..`conj_9`.
    pub fn class(&self, name: &str) -> Option<&WordSet> {
        let list = match name {
            "clickbait_words" => &self.clickbait_words,
            "slang" => &self.slang,
            "degree_very" => &self.degree_very,
            "degree_extreme" => &self.degree_extreme,
            "pos_eval" => &self.pos_eval,
            "neg_eval" => &self.neg_eval,
            "pos_emotion" => &self.pos_emotion,
            "neg_emotion" => &self.neg_emotion,
            "subjective" => &self.subjective,
            "interrogatives" => &self.interrogatives,
            "forward_ref" => &self.forward_ref,
            "temporal_past" => &self.temporal_past,
            "temporal_present" => &self.temporal_present,
            _ => {
                return self
                    .conjunction_classes
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, s)| s)
            }
        };
        Some(list)
    }

    /// Total entries across all lists, counting a word once per list.
    pub fn word_count(&self) -> usize {
        let lists: usize = LIST_NAMES
            .iter()
            .filter_map(|n| self.class(n))
            .map(|s| s.len())
            .sum();
        lists
            + self
                .conjunction_classes
                .iter()
                .map(|(_, s)| s.len())
                .sum::<usize>()
    }

    pub fn set_relations(&mut self, relations: Relations) {
        self.relations = relations;
    }
}

/// Loads a standalone relations file (`word1<TAB>word2<TAB>relation`).
pub fn load_relations(path: &Path) -> Result<Relations> {
    let text = read_utf8(path)?.ok_or_else(|| Error::MissingArtifact(PathBuf::from(path)))?;
    Relations::parse(&text, path)
}

fn builtin_file(name: &str) -> Option<&'static str> {
    macro_rules! bundled {
        ($($file:literal),* $(,)?) => {
            match name {
                $($file => Some(include_str!(concat!("../../lexicons/", $file))),)*
                _ => None,
            }
        };
    }
    bundled!(
        "clickbait_words.txt",
        "slang.txt",
        "degree_very.txt",
        "degree_extreme.txt",
        "pos_eval.txt",
        "neg_eval.txt",
        "pos_emotion.txt",
        "neg_emotion.txt",
        "subjective.txt",
        "interrogatives.txt",
        "forward_ref.txt",
        "temporal_past.txt",
        "temporal_present.txt",
        "conj_1.txt",
        "conj_2.txt",
        "conj_3.txt",
        "conj_4.txt",
        "conj_5.txt",
        "conj_6.txt",
        "conj_7.txt",
        "conj_8.txt",
        "conj_9.txt",
        "relations.tsv",
    )
}

/// Writes `lex` to `dir` in the on-disk layout read by [`LexiconSet::load`].
pub fn write_lexicons(lex: &LexiconSet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let write = |file: String, body: String| {
        let path = dir.join(file);
        fs::write(&path, body).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    };
    let join = |set: &WordSet| set.iter().map(|w| format!("{w}\n")).collect::<String>();
    for name in LIST_NAMES {
        write(
            format!("{name}.txt"),
            join(lex.class(name).expect("known list")),
        )?;
    }
    for (name, set) in &lex.conjunction_classes {
        write(format!("{name}.txt"), join(set))?;
    }
    let rel: String = lex
        .relations
        .pairs
        .iter()
        .flat_map(|(a, m)| m.iter().map(move |(b, r)| format!("{a}\t{b}\t{r}\n")))
        .collect();
    write(RELATIONS_FILE.to_owned(), rel)
}
