use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Word vectors of a single fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfig(
                "embedding dimension must be positive".into(),
            ));
        }
        Ok(EmbeddingTable {
            dimension,
            vectors: HashMap::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dimension {
            return Err(Error::InvalidConfig(format!(
                "vector of length {} in a table of dimension {}",
                vector.len(),
                self.dimension
            )));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "non-finite embedding component".into(),
            ));
        }
        self.vectors.insert(word.into(), vector);
        Ok(())
    }

    /// `None` signals an out-of-vocabulary word.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    /// Parses the text format: a `count dimension` header, then one
    /// `word v1 ... vd` line per entry.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let bad = |line: usize, message: String| Error::Embedding { line, message };
        let (_, header) = lines
            .next()
            .ok_or_else(|| bad(1, "missing `count dimension` header".into()))?;
        let header = header.map_err(|e| bad(1, e.to_string()))?;
        let mut fields = header.split_whitespace();
        let (count, dim) = match (fields.next(), fields.next(), fields.next()) {
            (Some(c), Some(d), None) => (
                c.parse::<usize>()
                    .map_err(|e| bad(1, format!("count: {e}")))?,
                d.parse::<usize>()
                    .map_err(|e| bad(1, format!("dimension: {e}")))?,
            ),
            _ => return Err(bad(1, "header must be `count dimension`".into())),
        };
        let mut table = EmbeddingTable::new(dim).map_err(|e| bad(1, e.to_string()))?;
        for (i, line) in lines {
            let line_no = i + 1;
            let line = line.map_err(|e| bad(line_no, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let word = parts.next().expect("non-empty line has a first field");
            let vector = parts
                .map(|p| p.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(line_no, e.to_string()))?;
            table
                .insert(word, vector)
                .map_err(|e| bad(line_no, e.to_string()))?;
        }
        if table.len() != count {
            return Err(bad(
                1,
                format!("header declares {count} vectors, found {}", table.len()),
            ));
        }
        Ok(table)
    }

    /// Writes the table in the text format, words sorted.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e| Error::io("writing embeddings", e);
        writeln!(w, "{} {}", self.len(), self.dimension).map_err(io)?;
        let mut words: Vec<_> = self.vectors.keys().collect();
        words.sort();
        for word in words {
            write!(w, "{word}").map_err(io)?;
            for v in &self.vectors[word] {
                write!(w, " {v}").map_err(io)?;
            }
            writeln!(w).map_err(io)?;
        }
        Ok(())
    }
}

/// Cosine similarity; zero-norm vectors have similarity 0.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_lookup() {
        let t = EmbeddingTable::parse("2 3\n鲤鱼 1 0 0\n鱼 0.5 0.5 0\n".as_bytes()).unwrap();
        assert_eq!(t.dimension(), 3);
        assert_eq!(t.get("鲤鱼"), Some(&[1.0, 0.0, 0.0][..]));
        assert!(t.get("猫").is_none());
    }

    #[test]
    fn wrong_arity_names_line() {
        let err = EmbeddingTable::parse("2 3\na 1 0 0\nb 1 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Embedding { line: 3, .. }), "{err}");
    }

    #[test]
    fn count_mismatch_rejected() {
        assert!(EmbeddingTable::parse("3 1\na 1\n".as_bytes()).is_err());
    }

    #[test]
    fn write_parse_roundtrip() {
        let t = EmbeddingTable::parse("2 2\nx 0.25 -1.5\ny 3 4\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        assert_eq!(EmbeddingTable::parse(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn cosine_basics() {
        assert!((cosine(&[1.0, 2.0], &[2.0, 4.0]) - 1.0).abs() < 1e-12);
        assert!((cosine(&[1.0, 0.0], &[-1.0, 0.0]) + 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), 0.0);
    }
}
