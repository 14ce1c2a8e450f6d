//! A minimal subshift of the three-bracket Dyck shift whose context-free
//! model checking encodes halting: level `i+1` words are
//! `[3 u_i ]3 x` or, once machine `h(i)` halts within `i` steps,
//! `[3 ([1)^h(i) [2 ]2 (]1)^h(i) u_i ]3 x`, for the six brackets `x`.
//!
//! Levels are kept as sequences of lower-level word indices and read
//! recursively, so deep levels never need to be written out.

use super::{dovetail, HaltingOracle};
use crate::word::{Letter, Word};
use crate::{Error, Result};

pub fn open(s: u8) -> Letter {
    s as Letter
}

pub fn close(s: u8) -> Letter {
    s as Letter + 3
}

/// Index of a bracket inside a level: `[1 [2 [3 ]3 ]2 ]1`.
fn slot_open(s: u8) -> u8 {
    s - 1
}

fn slot_close(s: u8) -> u8 {
    6 - s
}

const SLOT_LETTERS: [Letter; 6] = [1, 2, 3, 6, 5, 4];

/// Longest level word the tower will build.
pub const LEVEL_LENGTH_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckLevel {
    pub index: usize,
    pub length: u64,
    /// Lower-level slots making up each of the six words; empty at level 0.
    pub parts: [Vec<u8>; 6],
    /// `h(i-1)` if the halting insertion was used to build this level.
    pub inserted: Option<u64>,
}

/// The `3·3` products `[s [s' ]s' ]s [s' ]s'` of `u_i`, as slots.
fn pair_word() -> Vec<u8> {
    let mut out = Vec::with_capacity(54);
    for s in 1..=3 {
        for t in 1..=3 {
            out.extend([slot_open(s), slot_open(t), slot_close(t), slot_close(s), slot_open(t), slot_close(t)]);
        }
    }
    out
}

pub struct DyckTower {
    pub levels: Vec<DyckLevel>,
}

impl DyckTower {
    /// Levels `0..=depth`.
    pub fn build(oracle: &HaltingOracle, depth: usize) -> Result<Self> {
        let mut levels = vec![DyckLevel { index: 0, length: 1, parts: Default::default(), inserted: None }];
        for i in 0..depth {
            let j = dovetail(i as u64);
            let halted = oracle.halts_within(j, i as u64);
            let mut prefix = vec![slot_open(3)];
            if halted {
                prefix.extend(std::iter::repeat(slot_open(1)).take(j as usize));
                prefix.extend([slot_open(2), slot_close(2)]);
                prefix.extend(std::iter::repeat(slot_close(1)).take(j as usize));
            }
            prefix.extend(pair_word());
            prefix.push(slot_close(3));
            let length = levels[i].length * (prefix.len() as u64 + 1);
            if length > LEVEL_LENGTH_CAP {
                return Err(Error::Budget(format!("level {} would have length {length}", i + 1)));
            }
            let parts = std::array::from_fn(|slot| {
                let mut p = prefix.clone();
                p.push(slot as u8);
                p
            });
            levels.push(DyckLevel { index: i + 1, length, parts, inserted: halted.then_some(j) });
        }
        Ok(DyckTower { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Feeds the letters of word `slot` of `level` to `f`.
    pub fn for_each_letter(&self, level: usize, slot: u8, f: &mut dyn FnMut(Letter)) {
        if level == 0 {
            f(SLOT_LETTERS[slot as usize]);
        } else {
            for &p in &self.levels[level].parts[slot as usize] {
                self.for_each_letter(level - 1, p, f);
            }
        }
    }

    pub fn materialize(&self, level: usize, slot: u8) -> Result<Word> {
        if self.levels[level].length > 1 << 22 {
            return Err(Error::Budget("word too long to materialize".into()));
        }
        let mut out = Vec::with_capacity(self.levels[level].length as usize);
        self.for_each_letter(level, slot, &mut |l| out.push(l));
        Ok(out)
    }

    /// Runs the pushdown automaton over one level word.
    pub fn trace(&self, level: usize, slot: u8, pattern: Option<usize>) -> PdaTrace {
        let mut pda = Pda::new(pattern);
        let n = self.levels[level].length;
        let mut read = 0u64;
        self.for_each_letter(level, slot, &mut |l| {
            pda.step(l);
            read += 1;
            if read < n {
                pda.check_prefix_shape();
            }
            if read == n - 1 && !pda.stack.is_empty() {
                pda.trace.body_balanced = false;
            }
        });
        pda.finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdaTrace {
    /// No closing bracket met a different open bracket.
    pub legal: bool,
    /// Closing brackets popped below the starting stack.
    pub underflow: bool,
    /// Stack empty at the end.
    pub balanced: bool,
    /// How many times the watched pattern appeared on top of the stack.
    pub pattern_hits: usize,
    /// Every proper prefix left the stack empty or starting with 3.
    pub prefix_shape: bool,
    /// All letters but the last cancel out.
    pub body_balanced: bool,
}

/// Deterministic pushdown reader of bracket words, watching for `3 1^k 2`
/// on top of the stack.
struct Pda {
    stack: Vec<u8>,
    pattern: Option<Vec<u8>>,
    on_top: bool,
    trace: PdaTrace,
}

impl Pda {
    fn new(k: Option<usize>) -> Self {
        let pattern = k.map(|k| {
            let mut p = vec![3];
            p.extend(std::iter::repeat(1).take(k));
            p.push(2);
            p
        });
        Pda {
            stack: Vec::new(),
            pattern,
            on_top: false,
            trace: PdaTrace {
                legal: true,
                underflow: false,
                balanced: true,
                pattern_hits: 0,
                prefix_shape: true,
                body_balanced: true,
            },
        }
    }

    fn step(&mut self, l: Letter) {
        match l {
            1..=3 => self.stack.push(l as u8),
            4..=6 => match self.stack.last() {
                Some(&top) if top as Letter == l - 3 => {
                    self.stack.pop();
                }
                Some(_) => self.trace.legal = false,
                None => self.trace.underflow = true,
            },
            _ => self.trace.legal = false,
        }
        if let Some(p) = &self.pattern {
            let now = self.stack.ends_with(p);
            if now && !self.on_top {
                self.trace.pattern_hits += 1;
            }
            self.on_top = now;
        }
    }

    fn check_prefix_shape(&mut self) {
        if self.trace.underflow || self.stack.first().is_some_and(|&b| b != 3) {
            self.trace.prefix_shape = false;
        }
    }

    fn finish(mut self) -> PdaTrace {
        self.trace.balanced = self.stack.is_empty() && !self.trace.underflow;
        self.trace
    }
}

/// Runs the automaton on `w` from an empty stack.
pub fn pda_check(w: &[Letter], k: Option<usize>) -> PdaTrace {
    let mut pda = Pda::new(k);
    for &l in w {
        pda.step(l);
    }
    pda.finish()
}

/// Whether machine `j` halts, read off the table.
pub fn cfl_solver(oracle: &HaltingOracle, j: u64) -> bool {
    oracle.eventually_halts(j)
}

/// Whether `3 1^j 2` reaches the top of the stack while reading some word
/// of the top level.
pub fn cfl_verifier(tower: &DyckTower, j: usize) -> bool {
    let top = tower.depth();
    (0..6).any(|slot| tower.trace(top, slot, Some(j)).pattern_hits > 0)
}
