//! Substitutions `τ : S -> S+` and the subshifts they generate: iteration,
//! growth, syndeticity of long letters, subsystem counts and the regular
//! intersection decision.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::automata::{BoolMatrix, Nfa};
use crate::word::{self, Alphabet, Letter, Word};
use crate::{Error, Result};

/// Longest word `iterate` will materialize.
pub const ITERATE_CAP: usize = 10_000_000;

/// Longest relation sequence explored before giving up on finding its period.
pub const RELATION_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Substitution {
    /// `images[i]` is the image of the `i`-th letter of the alphabet.
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Invalid("one image per letter".into()));
        }
        for img in &images {
            if img.is_empty() {
                return Err(Error::Invalid("substitutions are non-erasing".into()));
            }
            alphabet.check_word(img)?;
        }
        Ok(Substitution { alphabet, images })
    }

    /// Builds from `(letter, image)` rules; the alphabet is the set of heads.
    pub fn from_rules(rules: &[(Letter, Word)]) -> Result<Self> {
        let map: BTreeMap<Letter, Word> = rules.iter().cloned().collect();
        if map.len() != rules.len() {
            return Err(Error::Invalid("duplicate rule".into()));
        }
        let alphabet = Alphabet::new(map.keys().copied().collect())?;
        Self::new(alphabet, map.into_values().collect())
    }

    /// Parses `letter -> word` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, body) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("line {}: expected `letter -> word`", no + 1)))?;
            let head = word::parse_word(head)?;
            if head.len() != 1 {
                return Err(Error::Parse(format!("line {}: rule head must be one glyph", no + 1)));
            }
            rules.push((head[0], word::parse_word(body)?));
        }
        Self::from_rules(&rules)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, l: Letter) -> &[Letter] {
        &self.images[self.alphabet.index_of(l).expect("letter of the alphabet")]
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        w.iter().flat_map(|&l| self.image(l).iter().copied()).collect()
    }

    /// `|τ^n(a)|` for every letter, saturating.
    fn lengths(&self, n: u64) -> Vec<u128> {
        let k = self.alphabet.len();
        let mut len = vec![1u128; k];
        for _ in 0..n {
            let next: Vec<u128> = (0..k)
                .map(|i| {
                    self.images[i]
                        .iter()
                        .fold(0u128, |acc, &l| acc.saturating_add(len[self.alphabet.index_of(l).unwrap()]))
                })
                .collect();
            if next == len {
                break;
            }
            len = next;
        }
        len
    }

    /// `τ^n(a)`.
    pub fn iterate(&self, a: Letter, n: u64) -> Result<Word> {
        let i = self.alphabet.index_of(a).ok_or(Error::UnknownLetter(a))?;
        let len = self.lengths(n)[i];
        if len > ITERATE_CAP as u128 {
            return Err(Error::Budget(format!("|τ^{n}({a})| = {len} exceeds {ITERATE_CAP}")));
        }
        let mut w = vec![a];
        for _ in 0..n {
            let next = self.apply(&w);
            if next == w {
                break;
            }
            w = next;
        }
        Ok(w)
    }

    /// `M[a][b]` = number of occurrences of `b` in `τ(a)`.
    pub fn incidence_matrix(&self) -> Vec<Vec<BigUint>> {
        let k = self.alphabet.len();
        let mut m = vec![vec![BigUint::zero(); k]; k];
        for (i, img) in self.images.iter().enumerate() {
            for &l in img {
                m[i][self.alphabet.index_of(l).unwrap()] += 1u32;
            }
        }
        m
    }

    /// `|τ^n(a)|` as the `a`-row sum of `M^n`.
    pub fn iterate_length(&self, a: Letter, n: u64) -> Result<BigUint> {
        let i = self.alphabet.index_of(a).ok_or(Error::UnknownLetter(a))?;
        let p = matrix_power(&self.incidence_matrix(), n);
        Ok(p[i].iter().sum())
    }

    /// Letters whose iterates grow without bound: exactly those reaching a
    /// cycle through a letter with an image of length at least 2.
    pub fn long_symbols(&self) -> BTreeSet<Letter> {
        let k = self.alphabet.len();
        let succ: Vec<Vec<usize>> = self
            .images
            .iter()
            .map(|img| {
                let mut s: Vec<usize> = img.iter().map(|&l| self.alphabet.index_of(l).unwrap()).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let reach = |from: usize| -> Vec<bool> {
            let mut seen = vec![false; k];
            let mut stack: Vec<usize> = succ[from].clone();
            while let Some(x) = stack.pop() {
                if !seen[x] {
                    seen[x] = true;
                    stack.extend(&succ[x]);
                }
            }
            seen
        };
        let reaches: Vec<Vec<bool>> = (0..k).map(reach).collect();
        let pumps: Vec<usize> = (0..k).filter(|&d| self.images[d].len() >= 2 && reaches[d][d]).collect();
        (0..k)
            .filter(|&a| pumps.iter().any(|&d| a == d || reaches[a][d]))
            .map(|a| self.alphabet.letters()[a])
            .collect()
    }

    /// Decides whether long letters occur with bounded gaps in every `τ^n(a)`.
    ///
    /// Tracks maximal runs of short letters together with the long letters
    /// (or word edges) flanking them. A run is unbounded exactly when some
    /// cycle of flank pairs adds short letters on each turn.
    pub fn syndetic_long(&self, cap: usize) -> Syndeticity {
        let long = self.long_symbols();
        let is_long = |l: Letter| long.contains(&l);
        let mut pairs: BTreeSet<(Flank, Flank)> = BTreeSet::new();
        let mut seeds: Vec<Run> = Vec::new();
        for &a in self.alphabet.letters() {
            if is_long(a) {
                seeds.push(Run { left: Flank::Edge, body: vec![], right: Flank::Long(a) });
                seeds.push(Run { left: Flank::Long(a), body: vec![], right: Flank::Edge });
            } else {
                seeds.push(Run { left: Flank::Edge, body: vec![a], right: Flank::Edge });
            }
        }
        // Flank pairs reachable, independent of the run bodies.
        let mut queue: VecDeque<(Flank, Flank)> = seeds.iter().map(|r| (r.left, r.right)).collect();
        let mut edges: Vec<((Flank, Flank), (Flank, Flank), usize)> = Vec::new();
        while let Some(pair) = queue.pop_front() {
            if !pairs.insert(pair) {
                continue;
            }
            let probe = Run { left: pair.0, body: vec![], right: pair.1 };
            let (middle, others) = self.split_image(&probe, &is_long);
            edges.push((pair, (middle.left, middle.right), middle.body.len()));
            queue.push_back((middle.left, middle.right));
            queue.extend(others.iter().map(|r| (r.left, r.right)));
        }
        let adjacency: BTreeMap<(Flank, Flank), Vec<(Flank, Flank)>> =
            edges.iter().fold(BTreeMap::new(), |mut m, (from, to, _)| {
                m.entry(*from).or_insert_with(Vec::new).push(*to);
                m
            });
        let reaches = |from: (Flank, Flank), to: (Flank, Flank)| {
            let mut seen = BTreeSet::new();
            let mut stack = vec![from];
            while let Some(x) = stack.pop() {
                if x == to {
                    return true;
                }
                if seen.insert(x) {
                    stack.extend(adjacency.get(&x).into_iter().flatten().copied());
                }
            }
            false
        };
        for (from, to, weight) in &edges {
            if *weight > 0 && reaches(*to, *from) {
                return Syndeticity::NonSyndetic { left: from.0.letter(), right: from.1.letter() };
            }
        }
        let mut seen: HashSet<Run> = HashSet::new();
        let mut queue: VecDeque<Run> = seeds.into_iter().collect();
        let mut longest = 0;
        while let Some(run) = queue.pop_front() {
            if seen.contains(&run) {
                continue;
            }
            if seen.len() >= cap {
                return Syndeticity::Budget;
            }
            longest = longest.max(run.body.len());
            let (middle, others) = self.split_image(&run, &is_long);
            queue.push_back(middle);
            queue.extend(others);
            seen.insert(run);
        }
        Syndeticity::Syndetic(longest + 1)
    }

    /// Image of a flanked run: the run containing `τ(body)` and the runs
    /// strictly between long letters of the flank images.
    fn split_image(&self, run: &Run, is_long: &dyn Fn(Letter) -> bool) -> (Run, Vec<Run>) {
        let image = |f: Flank| f.letter().map(|l| self.image(l).to_vec()).unwrap_or_default();
        let mut others = Vec::new();
        let inner = |img: &[Letter], out: &mut Vec<Run>| {
            let longs: Vec<usize> = (0..img.len()).filter(|&i| is_long(img[i])).collect();
            for w in longs.windows(2) {
                out.push(Run {
                    left: Flank::Long(img[w[0]]),
                    body: img[w[0] + 1..w[1]].to_vec(),
                    right: Flank::Long(img[w[1]]),
                });
            }
            longs
        };
        let left_img = image(run.left);
        let right_img = image(run.right);
        let left_longs = inner(&left_img, &mut others);
        let right_longs = inner(&right_img, &mut others);
        let mut body = Vec::new();
        let left = match left_longs.last() {
            Some(&i) => {
                body.extend(&left_img[i + 1..]);
                Flank::Long(left_img[i])
            }
            None => Flank::Edge,
        };
        body.extend(self.apply(&run.body));
        let right = match right_longs.first() {
            Some(&i) => {
                body.extend(&right_img[..i]);
                Flank::Long(right_img[i])
            }
            None => Flank::Edge,
        };
        (Run { left, body, right }, others)
    }

    /// Length-`n` factors of `τ^l(a)` over all letters and `l <= depth`.
    /// This over-approximates the language of the generated subshift.
    pub fn xtau_factors(&self, n: usize, depth: u64) -> Result<BTreeSet<Word>> {
        let mut out = BTreeSet::new();
        for &a in self.alphabet.letters() {
            for l in 0..=depth {
                out.extend(word::factors(&self.iterate(a, l)?, n));
            }
        }
        Ok(out)
    }

    /// Lines of `letter -> word`, in letter order.
    pub fn render(&self) -> String {
        self.alphabet
            .letters()
            .iter()
            .zip(&self.images)
            .map(|(&l, img)| format!("{} -> {}\n", word::format_word(&[l]), word::format_word(img)))
            .collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<String> = self
            .alphabet
            .letters()
            .iter()
            .zip(&self.images)
            .map(|(&l, img)| format!("{}↦{}", word::format_word(&[l]), word::format_word(img)))
            .collect();
        write!(f, "({})", rules.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Flank {
    Edge,
    Long(Letter),
}

impl Flank {
    fn letter(self) -> Option<Letter> {
        match self {
            Flank::Edge => None,
            Flank::Long(l) => Some(l),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Run {
    left: Flank,
    body: Word,
    right: Flank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syndeticity {
    /// Every factor of length `m` of every iterate contains a long letter.
    Syndetic(usize),
    /// Runs of short letters between these flanks (`None` = word edge) pump.
    NonSyndetic { left: Option<Letter>, right: Option<Letter> },
    Budget,
}

fn matrix_power(m: &[Vec<BigUint>], mut n: u64) -> Vec<Vec<BigUint>> {
    let k = m.len();
    let mul = |a: &[Vec<BigUint>], b: &[Vec<BigUint>]| -> Vec<Vec<BigUint>> {
        (0..k)
            .map(|i| (0..k).map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum()).collect())
            .collect()
    };
    let mut result: Vec<Vec<BigUint>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect()).collect();
    let mut base = m.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        n >>= 1;
    }
    result
}

/// `2^(|S|^(m+1))`, the bound on the number of subshifts of a substitutive
/// subshift whose long letters are `m`-syndetic.
pub fn quasiminimal_bound(alphabet_size: u32, m: u32) -> Result<BigUint> {
    let exp = BigUint::from(alphabet_size).pow(m + 1);
    let bits: u64 = exp
        .to_string()
        .parse()
        .ok()
        .filter(|&b: &u64| b <= 1 << 24)
        .ok_or_else(|| Error::Budget(format!("2^{exp} is too large to materialize")))?;
    Ok(BigUint::one() << bits)
}

/// `B(k) = Σ_j C(k, j) 2^(j(j-1))`.
pub fn subsystem_count_b(k: u32) -> BigUint {
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    for j in 0..=k {
        total += &binom * (BigUint::one() << (j as u64 * (j as u64).saturating_sub(1)));
        binom = binom * (k - j) / (j + 1);
    }
    total
}

/// A subsystem of `B⁻¹(∪ b_i* b_j*)`: the fixed points `b_i` for `i` in the
/// first set and the transition orbits `∞b_i b_j∞` for the pairs in the second.
pub type SubsystemChoice = (BTreeSet<u32>, BTreeSet<(u32, u32)>);

/// Enumerates every `(K, J)` with `J` a set of ordered pairs of distinct
/// elements of `K ⊆ {1..k}`.
pub fn brute_force_subsystems(k: u32) -> Result<Vec<SubsystemChoice>> {
    if k > 4 {
        return Err(Error::Budget("brute-force subsystem enumeration is limited to k <= 4".into()));
    }
    let mut out = Vec::new();
    for kmask in 0u32..(1 << k) {
        let members: Vec<u32> = (1..=k).filter(|i| kmask >> (i - 1) & 1 == 1).collect();
        let pairs: Vec<(u32, u32)> = members
            .iter()
            .flat_map(|&i| members.iter().filter(move |&&j| j != i).map(move |&j| (i, j)))
            .collect();
        for jmask in 0u64..(1 << pairs.len()) {
            let chosen = pairs.iter().enumerate().filter(|(t, _)| jmask >> t & 1 == 1).map(|(_, &p)| p).collect();
            out.push((members.iter().copied().collect(), chosen));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `τ^n(a) ∈ L` for this least `n`.
    Yes(u64),
    No,
}

/// Verdict plus the period data `R_t = R_{t+p}` of the relation sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegIntersectCertificate {
    pub verdict: Verdict,
    pub t: u64,
    pub p: u64,
}

/// The sequence `R_i(s)`, the relation of `τ^i(s)` in the automaton,
/// up to its first repetition.
#[derive(Debug, Clone)]
pub struct RelationSequence {
    pub terms: Vec<Vec<BoolMatrix>>,
    pub t: u64,
    pub p: u64,
}

impl RelationSequence {
    pub fn compute(tau: &Substitution, nfa: &Nfa) -> Result<Self> {
        if tau.alphabet().letters() != nfa.alphabet().letters() {
            return Err(Error::Invalid("automaton and substitution alphabets differ".into()));
        }
        let k = tau.alphabet().len();
        let idx: Vec<Vec<usize>> = tau
            .images
            .iter()
            .map(|img| img.iter().map(|&l| tau.alphabet().index_of(l).unwrap()).collect())
            .collect();
        let mut current: Vec<BoolMatrix> = (0..k).map(|a| nfa.letter_relation(a)).collect();
        let mut seen: HashMap<Vec<BoolMatrix>, usize> = HashMap::new();
        let mut terms = Vec::new();
        loop {
            if let Some(&t) = seen.get(&current) {
                let p = terms.len() - t;
                return Ok(RelationSequence { terms, t: t as u64, p: p as u64 });
            }
            if terms.len() >= RELATION_CAP {
                return Err(Error::Budget(format!("relation sequence longer than {RELATION_CAP}")));
            }
            seen.insert(current.clone(), terms.len());
            let next: Vec<BoolMatrix> = idx
                .iter()
                .map(|img| {
                    img.iter().skip(1).fold(current[img[0]].clone(), |acc, &c| acc.compose(&current[c]))
                })
                .collect();
            terms.push(std::mem::replace(&mut current, next));
        }
    }

    fn first_hit(&self, nfa: &Nfa, a: usize) -> Option<u64> {
        self.terms.iter().position(|r| nfa.relation_accepts(&r[a])).map(|n| n as u64)
    }
}

/// Whether `τ^n(a) ∈ L` for some `n`. Only `n < t + p` need be checked once
/// the relation sequence repeats.
pub fn decide_regular_intersection(tau: &Substitution, a: Letter, nfa: &Nfa) -> Result<RegIntersectCertificate> {
    let i = tau.alphabet().index_of(a).ok_or(Error::UnknownLetter(a))?;
    let seq = RelationSequence::compute(tau, nfa)?;
    let verdict = seq.first_hit(nfa, i).map_or(Verdict::No, Verdict::Yes);
    Ok(RegIntersectCertificate { verdict, t: seq.t, p: seq.p })
}

/// Per-letter answers to "does some `τ^n(a)` have a factor in `L`".
///
/// This decides intersection with the factors of all iterates, which can be
/// strictly larger than the language of the bi-infinite subshift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageVerdict {
    pub per_letter: Vec<(Letter, RegIntersectCertificate)>,
}

impl LanguageVerdict {
    pub fn nonempty(&self) -> bool {
        self.witness().is_some()
    }

    /// Least `(n, a)` with `τ^n(a) ∈ S* L S*`.
    pub fn witness(&self) -> Option<(Letter, u64)> {
        self.per_letter
            .iter()
            .filter_map(|(a, c)| match c.verdict {
                Verdict::Yes(n) => Some((*a, n)),
                Verdict::No => None,
            })
            .min_by_key(|&(a, n)| (n, a))
    }
}

pub fn decide_language_intersection(tau: &Substitution, nfa: &Nfa) -> Result<LanguageVerdict> {
    let closed = nfa.factor_closure()?;
    let seq = RelationSequence::compute(tau, &closed)?;
    let per_letter = tau
        .alphabet()
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let verdict = seq.first_hit(&closed, i).map_or(Verdict::No, Verdict::Yes);
            (a, RegIntersectCertificate { verdict, t: seq.t, p: seq.p })
        })
        .collect();
    Ok(LanguageVerdict { per_letter })
}
