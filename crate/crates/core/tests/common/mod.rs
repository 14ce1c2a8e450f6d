//! Brute-force oracles and random generators shared by the integration
//! tests. Nothing here calls the decision procedures it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use quasiminimal::automata::{Nfa, Regex};
use quasiminimal::substitution::Substitution;
use quasiminimal::template::{BlockTemplate, Part, TemplateSubshift};
use quasiminimal::word::{Alphabet, ClopenSet, EventuallyPeriodicPoint, Letter, Word};
use rand::Rng;

/// Every word of length `n` over `0..k`.
pub fn all_words(k: u32, n: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w: Word| (0..k).map(move |a| [w.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Every word of length at most `n` over `0..k`.
pub fn words_up_to(k: u32, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|m| all_words(k, m)).collect()
}

pub fn contains_factor(w: &[Letter], u: &[Letter]) -> bool {
    u.is_empty() || w.windows(u.len()).any(|x| x == u)
}

// ---------------------------------------------------------------- regexes

/// End positions `j >= i` such that `w[i..j]` matches `re`.
fn ends(re: &Regex, w: &[Letter], i: usize) -> BTreeSet<usize> {
    match re {
        Regex::Empty => BTreeSet::new(),
        Regex::Epsilon => [i].into(),
        Regex::Letter(l) => (i < w.len() && w[i] == *l).then_some(i + 1).into_iter().collect(),
        Regex::Any => (i < w.len()).then_some(i + 1).into_iter().collect(),
        Regex::Concat(a, b) => ends(a, w, i).into_iter().flat_map(|m| ends(b, w, m)).collect(),
        Regex::Union(a, b) => ends(a, w, i).union(&ends(b, w, i)).copied().collect(),
        Regex::Star(a) => {
            let mut reached: BTreeSet<usize> = [i].into();
            let mut todo = vec![i];
            while let Some(m) = todo.pop() {
                for e in ends(a, w, m) {
                    if reached.insert(e) {
                        todo.push(e);
                    }
                }
            }
            reached
        }
        Regex::Complement(a) => {
            let hit = ends(a, w, i);
            (i..=w.len()).filter(|j| !hit.contains(j)).collect()
        }
    }
}

/// Direct recursive matcher.
pub fn regex_matches(re: &Regex, w: &[Letter]) -> bool {
    ends(re, w, 0).contains(&w.len())
}

pub fn random_regex(rng: &mut impl Rng, k: u32, depth: usize) -> Regex {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Regex::Any,
            1 => Regex::Epsilon,
            _ => Regex::Letter(rng.gen_range(0..k)),
        };
    }
    let sub = |rng: &mut _| random_regex(rng, k, depth - 1);
    match rng.gen_range(0..5) {
        0 | 1 => sub(rng).concat(sub(rng)),
        2 => sub(rng).or(sub(rng)),
        3 => sub(rng).star(),
        _ => sub(rng).complement(),
    }
}

// ---------------------------------------------------------- substitutions

pub fn random_substitution(rng: &mut impl Rng, max_letters: u32, max_image: usize) -> Substitution {
    let k = rng.gen_range(1..=max_letters);
    let images = (0..k).map(|_| (0..rng.gen_range(1..=max_image)).map(|_| rng.gen_range(0..k)).collect()).collect();
    Substitution::new(Alphabet::range(k), images).expect("non-erasing images over the alphabet")
}

/// Lengths `|τ^n(a)|` for `n = 0..=steps`, by the recursion on images.
pub fn iterate_lengths(tau: &Substitution, steps: usize) -> Vec<Vec<u128>> {
    let letters = tau.alphabet().letters().to_vec();
    let mut rows = vec![vec![1u128; letters.len()]];
    for _ in 0..steps {
        let prev = rows.last().unwrap().clone();
        rows.push(
            letters
                .iter()
                .map(|&a| tau.image(a).iter().map(|&b| prev[tau.alphabet().index_of(b).unwrap()]).sum())
                .collect(),
        );
    }
    rows
}

/// Runs the automaton over `τ^n(a)` by expanding images recursively, with
/// memoized state-set maps so that long iterates need not be written out.
pub struct IterateRunner<'a> {
    tau: &'a Substitution,
    nfa: &'a Nfa,
    memo: HashMap<(u64, Letter, BTreeSet<usize>), BTreeSet<usize>>,
}

impl<'a> IterateRunner<'a> {
    pub fn new(tau: &'a Substitution, nfa: &'a Nfa) -> Self {
        IterateRunner { tau, nfa, memo: HashMap::new() }
    }

    pub fn run(&mut self, n: u64, a: Letter, from: BTreeSet<usize>) -> BTreeSet<usize> {
        if from.is_empty() {
            return from;
        }
        let key = (n, a, from.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let out = if n == 0 {
            let i = self.nfa.alphabet().index_of(a).unwrap();
            from.iter().flat_map(|&q| self.nfa.targets(q, i).iter().copied()).collect()
        } else {
            let img = self.tau.image(a).to_vec();
            img.into_iter().fold(from, |cur, b| self.run(n - 1, b, cur))
        };
        self.memo.insert(key, out.clone());
        out
    }

    pub fn accepts(&mut self, n: u64, a: Letter) -> bool {
        let start = self.nfa.initial().clone();
        self.run(n, a, start).iter().any(|&q| self.nfa.is_final(q))
    }

    /// Pairs `(p, q)` linked by `τ^n(a)`.
    pub fn relation(&mut self, n: u64, a: Letter) -> Vec<BTreeSet<usize>> {
        (0..self.nfa.num_states()).map(|p| self.run(n, a, [p].into())).collect()
    }
}

// -------------------------------------------------------------- templates

pub fn random_word(rng: &mut impl Rng, k: u32, lo: usize, hi: usize) -> Word {
    (0..rng.gen_range(lo..=hi)).map(|_| rng.gen_range(0..k)).collect()
}

/// Small random template systems over `0..k` with at most two blocks per template.
pub fn random_template_system(rng: &mut impl Rng, k: u32) -> TemplateSubshift {
    let count = rng.gen_range(1..=2);
    let ts = (0..count)
        .map(|_| {
            let left = random_word(rng, k, 1, 2);
            let right = random_word(rng, k, 1, 2);
            let mut parts = Vec::new();
            let mut blocks = 0;
            for _ in 0..rng.gen_range(0..=3) {
                if blocks < 2 && rng.gen_bool(0.5) {
                    blocks += 1;
                    parts.push(Part::Block(random_word(rng, k, 1, 2)));
                } else {
                    parts.push(Part::Connector(random_word(rng, k, 1, 2)));
                }
            }
            BlockTemplate::new(left, parts, right).expect("nonempty tails")
        })
        .collect();
    TemplateSubshift::new(ts)
}

pub fn random_clopen(rng: &mut impl Rng, k: u32) -> ClopenSet {
    let width = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=2);
    ClopenSet::new((0..n).map(|_| random_word(rng, k, width, width))).unwrap()
}

/// All realizations with every exponent at most `max_exp`.
pub fn realizations(sys: &TemplateSubshift, max_exp: u64) -> Vec<EventuallyPeriodicPoint> {
    let mut out = Vec::new();
    for t in sys.templates() {
        let b = t.block_count();
        let mut exps = vec![0u64; b];
        loop {
            out.push(t.realize(&exps));
            let mut i = 0;
            while i < b && exps[i] == max_exp {
                exps[i] = 0;
                i += 1;
            }
            if i == b {
                break;
            }
            exps[i] += 1;
        }
    }
    out
}

/// A finite stretch `[lo, hi)` of a point with per-position tests.
pub struct Stretch {
    pub lo: i64,
    pub word: Word,
}

impl Stretch {
    /// Covers the center and `margin` symbols on each side, plus `extra` at the right.
    pub fn new(p: &EventuallyPeriodicPoint, margin: i64, extra: i64) -> Self {
        let lo = p.origin().min(0) - margin;
        let hi = p.right_start().max(0) + margin + extra;
        Stretch { lo, word: p.window(lo, hi) }
    }

    pub fn holds(&self, c: &ClopenSet, i: i64) -> bool {
        let s = (i - self.lo) as usize;
        s + c.width() <= self.word.len() && c.contains_word(&self.word[s..s + c.width()])
    }

    pub fn positions(&self, pad: usize) -> std::ops::Range<i64> {
        self.lo..self.lo + self.word.len() as i64 - pad as i64
    }
}

fn margin(sys: &TemplateSubshift, slack: i64) -> i64 {
    let tails: i64 = sys.templates().iter().map(|t| (t.left().len() + t.right().len()) as i64).max().unwrap_or(1);
    4 * tails * (slack + 3) + 16
}

/// Some realization (exponents at most `max_exp`) has `from` at `i` and
/// `to` at `i + j`, `j >= min_j`, optionally `j ≡ r (mod m)`.
pub fn brute_halting(
    sys: &TemplateSubshift,
    from: &ClopenSet,
    to: &ClopenSet,
    min_j: u64,
    modular: Option<(u64, u64)>,
    max_exp: u64,
) -> bool {
    let slack = min_j as i64 + modular.map_or(0, |(_, m)| m as i64);
    let mg = margin(sys, slack);
    realizations(sys, max_exp).iter().any(|p| {
        let s = Stretch::new(p, mg, 4);
        let pos: Vec<i64> = s.positions(4).collect();
        pos.iter().any(|&i| {
            s.holds(from, i)
                && pos.iter().any(|&i2| {
                    let j = i2 - i;
                    j >= min_j as i64 && modular.is_none_or(|(r, m)| j.rem_euclid(m as i64) == r as i64) && s.holds(to, i2)
                })
        })
    })
}

/// Counting semantics: every position strictly between lies in `along`,
/// except exactly `count` of them which lie in `marked`.
pub fn brute_counting(
    sys: &TemplateSubshift,
    from: &ClopenSet,
    to: &ClopenSet,
    along: &ClopenSet,
    marked: &ClopenSet,
    count: u64,
    max_exp: u64,
) -> bool {
    let mg = margin(sys, count as i64);
    realizations(sys, max_exp).iter().any(|p| {
        let s = Stretch::new(p, mg, 4);
        let pos: Vec<i64> = s.positions(4).collect();
        pos.iter().any(|&i| {
            if !s.holds(from, i) {
                return false;
            }
            pos.iter().filter(|&&i2| i2 >= i).any(|&i2| {
                if !s.holds(to, i2) {
                    return false;
                }
                // Choose A among the intermediate positions.
                let (mut must, mut may) = (0, 0);
                for q in i + 1..i2 {
                    match (s.holds(along, q), s.holds(marked, q)) {
                        (false, false) => return false,
                        (false, true) => must += 1,
                        (true, true) => may += 1,
                        (true, false) => {}
                    }
                }
                must <= count && count <= must + may
            })
        })
    })
}

/// Some realization has the words at strictly increasing positions.
pub fn brute_tuple(sys: &TemplateSubshift, tuple: &[Word], max_exp: u64) -> bool {
    let mg = margin(sys, tuple.len() as i64);
    realizations(sys, max_exp).iter().any(|p| {
        let s = Stretch::new(p, mg, 4);
        let mut next = 0usize;
        for w in tuple {
            match (next..s.word.len()).find(|&i| s.word[i..].starts_with(w)) {
                Some(i) => next = i + 1,
                None => return false,
            }
        }
        true
    })
}

/// Factors of length `n` of all realizations with exponents at most `max_exp`.
pub fn brute_language(sys: &TemplateSubshift, n: usize, max_exp: u64) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for p in realizations(sys, max_exp) {
        let s = Stretch::new(&p, 2 * n as i64 + 4, 0);
        out.extend(s.word.windows(n.max(1)).filter(|_| n > 0).map(|w| w.to_vec()));
        if n == 0 {
            out.insert(vec![]);
        }
    }
    out
}
