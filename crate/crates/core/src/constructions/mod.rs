//! Subshifts whose decision problems encode the halting problem, driven by
//! a finite halting table in place of real machines.

pub mod countable;
pub mod dyck;
pub mod generic;
pub mod oneminimal;
pub mod prefix_code;

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ruler::ruler_value;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halting {
    /// Halts after exactly this many steps.
    HaltsAt(u64),
    NeverHalts,
}

/// Machine index to halting behaviour; indices outside the table never halt.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HaltingOracle {
    table: BTreeMap<u64, Halting>,
}

impl HaltingOracle {
    pub fn new(entries: impl IntoIterator<Item = (u64, Halting)>) -> Self {
        HaltingOracle { table: entries.into_iter().collect() }
    }

    pub fn never() -> Self {
        Self::default()
    }

    /// Random table over indices `first..first + len`, about half halting.
    pub fn random(seed: u64, first: u64, len: u64, max_step: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new((first..first + len).map(|j| {
            let h = if rng.gen_bool(0.5) { Halting::HaltsAt(rng.gen_range(0..=max_step)) } else { Halting::NeverHalts };
            (j, h)
        }))
    }

    /// Lines `INDEX halts STEP`, `INDEX never` or `default never`; `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("oracle line {}: {raw:?}", n + 1));
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["default", "never"] => {}
                [idx, "never"] => {
                    table.insert(idx.parse().map_err(|_| bad())?, Halting::NeverHalts);
                }
                [idx, "halts", step] => {
                    let step = step.parse().map_err(|_| bad())?;
                    table.insert(idx.parse().map_err(|_| bad())?, Halting::HaltsAt(step));
                }
                _ => return Err(bad()),
            }
        }
        Ok(HaltingOracle { table })
    }

    pub fn status(&self, j: u64) -> Halting {
        self.table.get(&j).copied().unwrap_or(Halting::NeverHalts)
    }

    pub fn halting_step(&self, j: u64) -> Option<u64> {
        match self.status(j) {
            Halting::HaltsAt(s) => Some(s),
            Halting::NeverHalts => None,
        }
    }

    pub fn eventually_halts(&self, j: u64) -> bool {
        self.halting_step(j).is_some()
    }

    /// Halts at a step `< i`.
    pub fn halts_before(&self, j: u64, i: u64) -> bool {
        self.halting_step(j).is_some_and(|s| s < i)
    }

    /// Halts at a step `<= i`.
    pub fn halts_within(&self, j: u64, i: u64) -> bool {
        self.halting_step(j).is_some_and(|s| s <= i)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, Halting)> + '_ {
        self.table.iter().map(|(&j, &h)| (j, h))
    }
}

impl fmt::Display for HaltingOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, h) in self.entries() {
            match h {
                Halting::HaltsAt(s) => writeln!(f, "{j} halts {s}")?,
                Halting::NeverHalts => writeln!(f, "{j} never")?,
            }
        }
        writeln!(f, "default never")
    }
}

/// The infinite-to-one dovetailing used by every construction.
pub fn dovetail(i: u64) -> u64 {
    ruler_value(i) as u64
}

/// A finite piece of a two-sided point: `word[origin]` is coordinate 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub word: crate::Word,
    pub origin: usize,
}
