//! Images `τ(ψ)` of the two-sided ruler point under substitutions whose
//! images start with a marker letter, and the transitive construction whose
//! only proper subsystem is a given minimal subshift.

use std::collections::BTreeMap;

use super::prefix_code::{extract_prefix_code, extract_suffix_code, PrefixCode};
use super::{dovetail, HaltingOracle, Window};
use crate::order::{LanguageOracle, SubstitutionOracle};
use crate::ruler::psi_window;
use crate::word::{Alphabet, Letter, Word};
use crate::{Error, Result};

/// The ruler point's window and its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedWindow {
    pub psi: Word,
    pub window: Window,
}

impl MarkedWindow {
    /// Splits the image at markers and maps every complete block back
    /// through `tau`; `None` for a block that is not an image.
    pub fn decode(&self, marker: Letter, images: &BTreeMap<Word, u32>) -> Vec<Option<u32>> {
        let w = &self.window.word;
        let starts: Vec<usize> = (0..w.len()).filter(|&i| w[i] == marker).collect();
        starts.windows(2).map(|p| images.get(&w[p[0]..p[1]]).copied()).collect()
    }
}

/// `τ(ψ[-radius, radius])` with coordinate 0 at the start of `τ(ψ_0)`.
/// Checks on the symbols used that every image is the marker followed by
/// letters of `y_alphabet`, and that image lengths never decrease and grow
/// overall.
pub fn generic_build(
    y_alphabet: &Alphabet,
    marker: Letter,
    tau: &mut dyn FnMut(u32) -> Result<Word>,
    radius: u64,
) -> Result<MarkedWindow> {
    if y_alphabet.contains(marker) {
        return Err(Error::Invalid("marker must lie outside the alphabet".into()));
    }
    let psi = psi_window(radius);
    let top = *psi.iter().max().expect("window is nonempty");
    let mut images = Vec::with_capacity(top as usize + 1);
    for n in 0..=top {
        let img = tau(n)?;
        if img.first() != Some(&marker) || !img[1..].iter().all(|&l| y_alphabet.contains(l)) {
            return Err(Error::Invalid(format!("image of {n} is not the marker followed by alphabet letters")));
        }
        if let Some(prev) = images.last().map(|p: &Word| p.len()) {
            if img.len() < prev {
                return Err(Error::Invalid(format!("image of {n} is shorter than the previous one")));
            }
        }
        images.push(img);
    }
    if top > 0 && images[top as usize].len() <= images[0].len() {
        return Err(Error::Invalid("image lengths do not grow".into()));
    }
    let mut word = Vec::new();
    let mut origin = 0;
    for (k, &n) in psi.iter().enumerate() {
        if k as u64 == radius {
            origin = word.len();
        }
        word.extend(&images[n as usize]);
    }
    Ok(MarkedWindow { psi, window: Window { word, origin } })
}

/// The transitive quasiminimal construction over `{0} ∪ Y` with
/// `τ(i) = 0 u_h(i) w_i v_h(i)` or `0 u_h(i) w_i v_(h(i)+1)` once machine
/// `h(i)` has halted before step `i`.
pub struct TransitiveLt {
    oracle: HaltingOracle,
    y: SubstitutionOracle,
    prefixes: PrefixCode,
    suffixes: PrefixCode,
    images: Vec<Word>,
}

/// Marker letter of the construction.
pub const MARKER: Letter = 0;

const CODE_HORIZON: usize = 200;
const SEARCH_SLACK: usize = 200;

impl TransitiveLt {
    /// Prepares images for all symbols up to `top`.
    pub fn new(oracle: HaltingOracle, y: SubstitutionOracle, top: u32) -> Result<Self> {
        if y.alphabet().contains(MARKER) {
            return Err(Error::Invalid("the minimal subshift must avoid letter 0".into()));
        }
        let codes = (top as u64 + 1).ilog2() as usize + 2;
        let prefixes = extract_prefix_code(&y, codes, CODE_HORIZON)?;
        let suffixes = extract_suffix_code(&y, codes, CODE_HORIZON)?;
        let mut t = TransitiveLt { oracle, y, prefixes, suffixes, images: Vec::new() };
        for i in 0..=top {
            let img = t.build_image(i)?;
            t.images.push(img);
        }
        Ok(t)
    }

    /// Fibonacci fixture for the minimal subshift.
    pub fn with_fibonacci(oracle: HaltingOracle, top: u32) -> Result<Self> {
        Self::new(oracle, SubstitutionOracle::fibonacci(), top)
    }

    pub fn prefix_word(&self, j: usize) -> &[Letter] {
        &self.prefixes.words[j]
    }

    pub fn suffix_word(&self, j: usize) -> &[Letter] {
        &self.suffixes.words[j]
    }

    pub fn image(&self, i: u32) -> Option<&Word> {
        self.images.get(i as usize)
    }

    pub fn image_table(&self) -> BTreeMap<Word, u32> {
        self.images.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect()
    }

    fn halted(&self, i: u32) -> bool {
        self.oracle.halts_before(dovetail(i as u64), i as u64)
    }

    // Occurrence number n of machine j picks the target (k, r) of a
    // triangular enumeration; even k asks u_j w_i to begin with the r-th
    // word of Y starting with u_j, odd k asks w_i v_j to end with the r-th
    // word ending with v_j. Every target recurs for infinitely many i.
    fn build_image(&self, i: u32) -> Result<Word> {
        let j = dovetail(i as u64) as usize;
        let n = (i as u64) >> (j + 1);
        let k = ((((8 * n + 1) as f64).sqrt() - 1.0) / 2.0).floor() as u64;
        let r = (n - k * (k + 1) / 2) as usize;
        let u = self.prefix_word(j);
        let v = self.suffix_word(j);
        let last = if self.halted(i) { self.suffix_word(j + 1) } else { v };
        let target = self.nth_word(u, v, k % 2 == 0, r)?;
        let min_len = self.images.last().map_or(0, |p| p.len() + 1);
        let base = (i as usize).max(min_len.saturating_sub(1 + u.len() + last.len()));
        for len in base..base + SEARCH_SLACK {
            let total = u.len() + len + v.len();
            for y in self.y.words(total) {
                if !y.starts_with(u) || !y.ends_with(v) {
                    continue;
                }
                let middle = &y[u.len()..u.len() + len];
                let hit = if k % 2 == 0 { y[..total - v.len()].starts_with(&target) } else { y[u.len()..].ends_with(&target) };
                if hit {
                    let mut img = vec![MARKER];
                    img.extend(u);
                    img.extend(middle);
                    img.extend(last);
                    return Ok(img);
                }
            }
        }
        Err(Error::Budget(format!("no middle word found for symbol {i}")))
    }

    /// The `r`-th word of Y (by length, then lexicographically) beginning
    /// with `u` (or ending with `v`).
    fn nth_word(&self, u: &[Letter], v: &[Letter], prefix: bool, r: usize) -> Result<Word> {
        let base = if prefix { u.len() } else { v.len() };
        let mut seen = 0;
        for len in base..base + SEARCH_SLACK {
            for y in self.y.words(len) {
                let ok = if prefix { y.starts_with(u) } else { y.ends_with(v) };
                if ok {
                    if seen == r {
                        return Ok(y);
                    }
                    seen += 1;
                }
            }
        }
        Err(Error::Budget("target enumeration exhausted".into()))
    }

    pub fn window(&self, radius: u64) -> Result<MarkedWindow> {
        let alphabet = self.y.alphabet().clone();
        generic_build(
            &alphabet,
            MARKER,
            &mut |n| self.image(n).cloned().ok_or_else(|| Error::Budget(format!("symbol {n} not prepared"))),
            radius,
        )
    }

    /// Whether machine `j` halts, read off the table.
    pub fn solver(&self, j: u64) -> bool {
        self.oracle.eventually_halts(j)
    }

    /// Whether the window has a factor `0 u_j y v_(j+1) 0` with `y` free of 0.
    pub fn verifier(&self, window: &MarkedWindow, j: usize) -> bool {
        let w = &window.window.word;
        let (u, v) = (self.prefix_word(j), self.suffix_word(j + 1));
        let starts: Vec<usize> = (0..w.len()).filter(|&i| w[i] == MARKER).collect();
        starts.windows(2).any(|p| {
            let block = &w[p[0] + 1..p[1]];
            block.len() >= u.len() + v.len() && block.starts_with(u) && block.ends_with(v)
        })
    }
}
