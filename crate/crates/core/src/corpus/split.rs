use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A `train:test` proportion such as `3:1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRatio {
    pub train: u32,
    pub test: u32,
}

impl SplitRatio {
    pub fn new(train: u32, test: u32) -> Result<Self> {
        if train == 0 || test == 0 {
            return Err(Error::InvalidConfig(format!(
                "split ratio parts must be positive, got {train}:{test}"
            )));
        }
        Ok(SplitRatio { train, test })
    }

    /// Held-out size for `n` items: `floor(n / (train + test)) * test`.
    pub fn test_size(self, n: usize) -> usize {
        n / (self.train + self.test) as usize * self.test as usize
    }
}

impl Default for SplitRatio {
    fn default() -> Self {
        SplitRatio { train: 3, test: 1 }
    }
}

impl fmt::Display for SplitRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.train, self.test)
    }
}

impl FromStr for SplitRatio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("split ratio `{s}` is not of the form A:B"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        SplitRatio::new(a, b)
    }
}

/// Indices of the held-out part; both halves stay in input order.
fn test_mask(n: usize, test_size: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut mask = vec![false; n];
    for &i in &order[..test_size] {
        mask[i] = true;
    }
    mask
}

fn partition<T: Clone>(items: &[T], mask: &[bool]) -> (Vec<T>, Vec<T>) {
    let mut train = Vec::with_capacity(items.len());
    let mut test = Vec::new();
    for (item, &held_out) in items.iter().zip(mask) {
        if held_out {
            test.push(item.clone());
        } else {
            train.push(item.clone());
        }
    }
    (train, test)
}

/// Uniform random train/test partition, deterministic in `seed`.
pub fn split_train_test<T: Clone>(
    items: &[T],
    ratio: SplitRatio,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>)> {
    if items.is_empty() {
        return Err(Error::EmptyInput("nothing to split".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = test_mask(items.len(), ratio.test_size(items.len()), &mut rng);
    Ok(partition(items, &mask))
}

/// Like [`split_train_test`], but applies the size rule within each class so
/// that both halves keep the class proportions.
pub fn split_stratified<T: Clone>(
    items: &[T],
    ratio: SplitRatio,
    seed: u64,
    class: impl Fn(&T) -> bool,
) -> Result<(Vec<T>, Vec<T>)> {
    if items.is_empty() {
        return Err(Error::EmptyInput("nothing to split".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mask = vec![false; items.len()];
    for wanted in [true, false] {
        let members: Vec<usize> = (0..items.len())
            .filter(|&i| class(&items[i]) == wanted)
            .collect();
        let sub = test_mask(members.len(), ratio.test_size(members.len()), &mut rng);
        for (&i, held_out) in members.iter().zip(sub) {
            mask[i] = held_out;
        }
    }
    Ok(partition(items, &mask))
}
