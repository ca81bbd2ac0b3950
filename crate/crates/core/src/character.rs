//! Characters: partitions of the taxon set into blocks ("states").

use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// A partition of a taxon set, stored as taxon ids into a shared label table.
///
/// Blocks are kept canonical: ids ascending within a block, blocks ordered by
/// their smallest id. Label tables are sorted, so this is also label order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    labels: Arc<[String]>,
    blocks: Vec<Vec<usize>>,
}

impl Character {
    /// Validates that `blocks` partition `0..labels.len()` and canonicalizes them.
    pub fn new(labels: Arc<[String]>, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::NotAPartition("empty block".into()));
            }
            for &i in b.iter() {
                if i >= n {
                    return Err(Error::NotAPartition(format!("taxon id {i} out of range")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::NotAPartition(format!("taxon {:?} appears twice", labels[i])));
                }
            }
            b.sort_unstable();
        }
        if let Some(i) = seen.iter().position(|&s| !s) {
            return Err(Error::NotAPartition(format!("taxon {:?} is missing", labels[i])));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Character { labels, blocks })
    }

    /// From a block index per taxon.
    pub fn from_assignment(labels: Arc<[String]>, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != labels.len() {
            return Err(Error::NotAPartition("assignment length differs from taxon count".into()));
        }
        let m = assignment.iter().copied().max().map_or(0, |x| x + 1);
        let mut blocks = vec![Vec::new(); m];
        for (taxon, &b) in assignment.iter().enumerate() {
            blocks[b].push(taxon);
        }
        blocks.retain(|b| !b.is_empty());
        Character::new(labels, blocks)
    }

    /// Builds from blocks that are already canonical. Callers guarantee validity.
    pub(crate) fn from_canonical(labels: Arc<[String]>, blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(Character::new(Arc::clone(&labels), blocks.clone()).map(|c| c.blocks == blocks).unwrap_or(false));
        Character { labels, blocks }
    }

    /// Parses `a,b|c,d`; when every label is one character the compact `ab|cd` form is accepted too.
    pub fn parse(text: &str, labels: Arc<[String]>) -> Result<Self> {
        let compact = !text.contains(',') && labels.iter().all(|l| l.chars().count() == 1);
        let lookup = |s: &str| -> Result<usize> {
            labels
                .binary_search_by(|l| l.as_str().cmp(s))
                .map_err(|_| Error::UnknownTaxon(s.to_string()))
        };
        let mut blocks = Vec::new();
        for part in text.trim().split('|') {
            let part = part.trim();
            let ids = if compact {
                part.chars().map(|c| lookup(&c.to_string())).collect::<Result<Vec<_>>>()?
            } else {
                part.split(',').map(|s| lookup(s.trim())).collect::<Result<Vec<_>>>()?
            };
            blocks.push(ids);
        }
        Character::new(labels, blocks)
    }

    /// Parses against an arbitrary (possibly unsorted) label list.
    pub fn parse_with<S: AsRef<str>>(text: &str, labels: &[S]) -> Result<Self> {
        let mut sorted: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        sorted.sort();
        Character::parse(text, sorted.into())
    }

    pub fn labels(&self) -> &Arc<[String]> {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn min_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Block index of every taxon (restricted growth string).
    pub fn assignment(&self) -> Vec<usize> {
        let mut a = vec![0; self.n()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &t in b {
                a[t] = i;
            }
        }
        a
    }

    pub fn block_labels(&self) -> Vec<Vec<&str>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&i| self.labels[i].as_str()).collect())
            .collect()
    }

    /// JSON form: array of arrays of labels.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("labels serialize")
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, &t) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&self.labels[t])?;
            }
        }
        Ok(())
    }
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.blocks.len()))?;
        for b in self.block_labels() {
            seq.serialize_element(&b)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc(n: usize) -> Arc<[String]> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    #[test]
    fn parse_both_forms() {
        let l = abc(7);
        let compact = Character::parse("fg|abde|c", l.clone()).unwrap();
        let long = Character::parse("a,b,d,e|c|f,g", l).unwrap();
        assert_eq!(compact, long);
        assert_eq!(compact.to_string(), "a,b,d,e|c|f,g");
        assert_eq!(compact.num_blocks(), 3);
        assert_eq!(compact.min_block_size(), 1);
        assert_eq!(compact.to_json(), serde_json::json!([["a", "b", "d", "e"], ["c"], ["f", "g"]]));
    }

    #[test]
    fn rejects_non_partitions() {
        let l = abc(4);
        assert!(matches!(Character::parse("ab|c", l.clone()), Err(Error::NotAPartition(_))));
        assert!(matches!(Character::parse("ab|bcd", l.clone()), Err(Error::NotAPartition(_))));
        assert!(matches!(Character::parse("ab|cz", l), Err(Error::UnknownTaxon(_))));
    }

    #[test]
    fn assignment_roundtrip() {
        let c = Character::from_assignment(abc(5), &[2, 0, 2, 1, 0]).unwrap();
        assert_eq!(c.to_string(), "a,c|b,e|d");
        assert_eq!(c.assignment(), vec![0, 1, 0, 2, 1]);
    }
}
