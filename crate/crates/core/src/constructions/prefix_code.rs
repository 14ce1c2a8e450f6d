//! Infinite prefix codes inside a right-perfect subshift, extracted by
//! scanning its words by length and then lexicographically.

use std::collections::BTreeSet;

use crate::order::LanguageOracle;
use crate::word::{Alphabet, Letter, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    pub words: Vec<Word>,
}

impl PrefixCode {
    pub fn is_prefix_free(&self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, a)| self.words.iter().enumerate().all(|(j, b)| i == j || !b.starts_with(a)))
    }

    /// Later words agree with `u_j` on all but its last letter.
    pub fn has_compatible_prefixes(&self) -> bool {
        self.words.iter().enumerate().all(|(j, u)| {
            let stem = &u[..u.len() - 1];
            self.words[j + 1..].iter().all(|v| v.starts_with(stem))
        })
    }

    /// The suffix-code view: every word reversed.
    pub fn reversed(&self) -> PrefixCode {
        PrefixCode { words: self.words.iter().map(|w| w.iter().rev().copied().collect()).collect() }
    }
}

/// Each round takes the first word `u` (by length, then lexicographically)
/// among those extending the current restriction that has two one-letter
/// extensions `ua < ub`, emits `ua` and restricts to words beginning with
/// `ub`. Fails if no split shows up below `horizon`.
pub fn extract_prefix_code(oracle: &dyn LanguageOracle, count: usize, horizon: usize) -> Result<PrefixCode> {
    let mut words = Vec::with_capacity(count);
    let mut restrict: Word = Vec::new();
    while words.len() < count {
        let (ua, ub) = first_split(oracle, &restrict, horizon)?;
        words.push(ua);
        restrict = ub;
    }
    Ok(PrefixCode { words })
}

fn first_split(oracle: &dyn LanguageOracle, restrict: &[Letter], horizon: usize) -> Result<(Word, Word)> {
    for len in restrict.len().max(1)..horizon {
        let longer = oracle.words(len + 1);
        for u in oracle.words(len).into_iter().filter(|u| u.starts_with(restrict)) {
            let found: Vec<Word> = oracle
                .alphabet()
                .letters()
                .iter()
                .map(|&a| {
                    let mut x = u.clone();
                    x.push(a);
                    x
                })
                .filter(|x| longer.contains(x))
                .take(2)
                .collect();
            if let [ua, ub] = &found[..] {
                return Ok((ua.clone(), ub.clone()));
            }
        }
    }
    Err(Error::Budget(format!("no splitting word of length below {horizon}")))
}

/// The same oracle read right to left.
pub struct Reversed<'a>(pub &'a dyn LanguageOracle);

impl LanguageOracle for Reversed<'_> {
    fn alphabet(&self) -> &Alphabet {
        self.0.alphabet()
    }

    fn words(&self, n: usize) -> BTreeSet<Word> {
        self.0.words(n).into_iter().map(|w| w.into_iter().rev().collect()).collect()
    }
}

/// Suffix code of a left-perfect subshift: prefix code of the mirror image,
/// mirrored back.
pub fn extract_suffix_code(oracle: &dyn LanguageOracle, count: usize, horizon: usize) -> Result<PrefixCode> {
    extract_prefix_code(&Reversed(oracle), count, horizon).map(|c| c.reversed())
}
