//! Crisp cluster label vectors.
//!
//! Labels are stored zero-based (`0..k`). Text and JSON surfaces use the
//! one-based convention `1..=k`.

use std::collections::HashMap;
use std::hash::Hash;

use crate::assignment::Permutation;
use crate::error::{Error, Result};

/// Assignment of `N` cases to clusters `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelVector {
    labels: Vec<usize>,
    k: usize,
}

impl LabelVector {
    /// Validates that every label lies in `0..k` and that there is at least
    /// one case.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if labels.is_empty() || k == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::LabelOutOfRange { label: bad, k });
        }
        Ok(Self { labels, k })
    }

    /// Labels with `k` set to one past the largest label.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Self::new(labels, k)
    }

    /// Maps arbitrary categories onto `0..k` in order of first appearance.
    /// Returns the categories indexed by their canonical label.
    pub fn from_categories<T, I>(items: I) -> Result<(Self, Vec<T>)>
    where
        T: Eq + Hash + Clone,
        I: IntoIterator<Item = T>,
    {
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut originals = Vec::new();
        let labels = items
            .into_iter()
            .map(|item| {
                *index.entry(item.clone()).or_insert_with(|| {
                    originals.push(item);
                    originals.len() - 1
                })
            })
            .collect();
        let k = originals.len();
        Ok((Self::new(labels, k)?, originals))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.labels
    }

    /// Cluster sizes, indexed by label.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Number of labels that are actually used.
    pub fn distinct(&self) -> usize {
        self.counts().iter().filter(|&&c| c > 0).count()
    }

    /// Relabels by first appearance, dropping unused labels.
    pub fn canonicalize(&self) -> Self {
        let (v, _) = Self::from_categories(self.labels.iter().copied())
            .expect("non-empty vector stays non-empty");
        v
    }

    /// Same labels with a larger label space (padding with empty clusters).
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.labels.clone(), k)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l + 1).collect()
    }

    /// One one-based label per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.labels.len() * 3);
        for l in &self.labels {
            out.push_str(&(l + 1).to_string());
            out.push('\n');
        }
        out
    }
}

/// Original category tokens, indexed by canonical (zero-based) label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMapping {
    pub originals: Vec<String>,
}

impl LabelMapping {
    /// Two-column CSV `original,canonical` with one-based canonical labels.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["original", "canonical"])
            .expect("writing to memory");
        for (i, orig) in self.originals.iter().enumerate() {
            w.write_record([orig.as_str(), &(i + 1).to_string()])
                .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }
}

/// Parses a label stream: one token per line, optional `label` header.
/// Tokens are treated as opaque category names and numbered by first
/// appearance. Trailing blank lines are ignored; a blank line followed by
/// more tokens is an error.
pub fn parse_labels(text: &str) -> Result<(LabelVector, LabelMapping)> {
    let mut tokens = Vec::new();
    let mut blank_at: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let token = raw.trim();
        if token.is_empty() {
            blank_at.get_or_insert(line);
            continue;
        }
        if let Some(blank) = blank_at {
            return Err(Error::BlankLine { line: blank });
        }
        if line == 1 && token == "label" {
            continue;
        }
        tokens.push(token.to_owned());
    }
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (labels, originals) = LabelVector::from_categories(tokens)?;
    Ok((labels, LabelMapping { originals }))
}

/// Relabels both vectors by first appearance onto a shared label space whose
/// size is the larger of the two distinct-label counts.
pub fn canonical_pair(a: &LabelVector, b: &LabelVector) -> Result<(LabelVector, LabelVector, usize)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let a = a.canonicalize();
    let b = b.canonicalize();
    let k = a.k().max(b.k());
    Ok((a.with_k(k)?, b.with_k(k)?, k))
}

/// Replaces every label `l` by `perm(l)`.
pub fn apply_permutation(v: &LabelVector, perm: &Permutation) -> Result<LabelVector> {
    let k = perm.len();
    let labels = v
        .as_slice()
        .iter()
        .map(|&l| perm.get(l).ok_or(Error::LabelOutOfRange { label: l, k }))
        .collect::<Result<Vec<_>>>()?;
    LabelVector::new(labels, k)
}
