//! Maps headline tokens to item labels with the built-in lexicons.
//!
//! cargo run --example encode_headline -- 她 曾经 发愁 但 现在

use headcheck::corpus::LexiconSet;
use headcheck::encoder::{encode_headline, ItemInventory};

fn main() {
    let mut tokens: Vec<String> = std::env::args().skip(1).collect();
    if tokens.is_empty() {
        tokens = ["她", "曾经", "发愁", "但", "现在"]
            .map(String::from)
            .to_vec();
    }
    let lex = LexiconSet::builtin();
    let inventory = ItemInventory::default_for(&lex);

    for token in &tokens {
        println!("{token:<8} {}", inventory.label_of(token).unwrap_or("-"));
    }
    println!("items: {:?}", encode_headline(&tokens, &inventory));
}
