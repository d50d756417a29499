//! Detection of ambiguous and misleading news headlines.
//!
//! Ambiguity is detected from the headline alone: tokens are encoded as
//! sequences of item labels, class sequential rules are mined from those
//! sequences, and rule indicators join lexicon counts as classifier features.
//! Misleadingness compares the headline with its body (informality,
//! sentiment, embedding and tf-idf similarity, dependency-pair entailment)
//! and is learned from few labels by co-training a headline-only view with a
//! body view.
//!
//! ```
//! use headcheck::corpus::LexiconSet;
//! use headcheck::encoder::{encode_headline, ItemInventory};
//!
//! let lex = LexiconSet::builtin();
//! let inv = ItemInventory::default_for(&lex);
//! let items = encode_headline(&["她", "曾经", "发愁", "但", "现在"], &inv);
//! assert_eq!(items, ["Ref", "Past", "But", "Present"]);
//! ```

pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod cotrain;
pub mod csr;
pub mod encoder;
pub mod error;
pub mod eval;
pub mod features;
pub mod pipeline;
pub mod synth;

pub use error::{Error, Result};
