//! Input data: documents, lexicons, embeddings, and train/test splitting.

mod document;
mod embedding;
mod lexicon;
mod split;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

pub use document::{parse_corpus, write_corpus, DepPair, Document, Domain, Task};
pub use embedding::{cosine, EmbeddingTable};
pub use lexicon::{
    load_relations, write_lexicons, LexiconSet, Relation, Relations, WordSet, CONJUNCTION_CLASSES,
    LIST_NAMES, RELATIONS_FILE,
};
pub use split::{split_stratified, split_train_test, SplitRatio};

use crate::error::{Error, Result};

pub fn load_lexicons(dir: &Path) -> Result<LexiconSet> {
    LexiconSet::load(dir)
}

pub fn read_corpus(path: &Path) -> Result<Vec<Document>> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    parse_corpus(BufReader::new(file))
}

pub fn read_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    EmbeddingTable::parse(BufReader::new(file))
}
