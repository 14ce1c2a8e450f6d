//! The generating order `u ≤ v` ("every point containing `v` contains
//! `u`"), semidecided through SFT approximations, and the table-driven
//! halting decision built on it.

use std::collections::{BTreeMap, BTreeSet};

use crate::substitution::Substitution;
use crate::template::TemplateSubshift;
use crate::word::{self, Alphabet, Letter, Word};
use crate::{Error, Result};

/// Access to `B_n(X)` for a factor-closed, extendable language.
pub trait LanguageOracle {
    fn alphabet(&self) -> &Alphabet;
    fn words(&self, n: usize) -> BTreeSet<Word>;

    fn contains(&self, w: &[Letter]) -> bool {
        self.words(w.len()).contains(w)
    }
}

pub struct TemplateOracle {
    system: TemplateSubshift,
    alphabet: Alphabet,
}

impl TemplateOracle {
    pub fn new(system: TemplateSubshift) -> Result<Self> {
        let alphabet = Alphabet::new(system.letters().into_iter().collect())?;
        Ok(TemplateOracle { system, alphabet })
    }

    pub fn system(&self) -> &TemplateSubshift {
        &self.system
    }
}

impl LanguageOracle for TemplateOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn words(&self, n: usize) -> BTreeSet<Word> {
        self.system.language_n(n)
    }
}

/// Shift of finite type given by forbidden words, with no dead ends.
pub struct SftOracle {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
}

impl SftOracle {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Word>) -> Self {
        SftOracle { alphabet, forbidden }
    }

    /// Binary words without `11`.
    pub fn golden_mean() -> Self {
        Self::new(Alphabet::range(2), vec![vec![1, 1]])
    }

    fn locally_ok(&self, w: &[Letter]) -> bool {
        !self.forbidden.iter().any(|f| word::is_subword(f, w))
    }
}

impl LanguageOracle for SftOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    // Assumes every locally allowed word extends on both sides, as for
    // the forbidden lists used here.
    fn words(&self, n: usize) -> BTreeSet<Word> {
        extend_all(&self.alphabet, n, |w| self.locally_ok(w)).into_iter().collect()
    }
}

/// Subshift of a primitive substitution.
pub struct SubstitutionOracle {
    tau: Substitution,
    pairs: BTreeSet<Word>,
}

impl SubstitutionOracle {
    pub fn new(tau: Substitution) -> Result<Self> {
        // Legal two-letter words: close the pairs inside single images under τ.
        let mut pairs: BTreeSet<Word> = BTreeSet::new();
        for &a in tau.alphabet().letters() {
            pairs.extend(word::factors(tau.image(a), 2));
        }
        loop {
            let next: BTreeSet<Word> =
                pairs.iter().flat_map(|p| word::factors(&tau.apply(p), 2)).chain(pairs.iter().cloned()).collect();
            if next.len() == pairs.len() {
                break;
            }
            pairs = next;
        }
        if pairs.is_empty() {
            return Err(Error::Invalid("substitution generates no two-letter words".into()));
        }
        Ok(SubstitutionOracle { tau, pairs })
    }

    /// `1 -> 12, 2 -> 1`.
    pub fn fibonacci() -> Self {
        let tau = Substitution::from_rules(&[(1, vec![1, 2]), (2, vec![1])]).expect("valid rules");
        Self::new(tau).expect("primitive")
    }
}

impl LanguageOracle for SubstitutionOracle {
    fn alphabet(&self) -> &Alphabet {
        self.tau.alphabet()
    }

    // A length-n factor lies inside τ^l(ab) for a legal pair ab once every
    // τ^l(c) has length at least n.
    fn words(&self, n: usize) -> BTreeSet<Word> {
        let letters = self.tau.alphabet().letters();
        let mut images: Vec<Word> = letters.iter().map(|&c| vec![c]).collect();
        let mut rounds = 0;
        while images.iter().any(|x| x.len() < n) && rounds <= letters.len() * n.max(1) {
            images = images.iter().map(|x| self.tau.apply(x)).collect();
            rounds += 1;
        }
        let mut out = BTreeSet::new();
        for p in &self.pairs {
            let mut x = p.clone();
            for _ in 0..rounds {
                x = self.tau.apply(&x);
            }
            out.extend(word::factors(&x, n));
        }
        out
    }
}

/// All words of length `n` built letter by letter while `ok` holds for
/// every prefix.
fn extend_all(alphabet: &Alphabet, n: usize, ok: impl Fn(&[Letter]) -> bool) -> Vec<Word> {
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for &a in alphabet.letters() {
                let mut x = w.clone();
                x.push(a);
                if ok(&x) {
                    next.push(x);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Length-`m` words whose every length-`k` factor is in `B_k(X)`.
pub fn sft_approx_words(oracle: &dyn LanguageOracle, k: usize, m: usize) -> Result<BTreeSet<Word>> {
    if k == 0 || m < k {
        return Err(Error::Invalid(format!("need 1 <= k <= m, got k={k}, m={m}")));
    }
    let allowed = oracle.words(k);
    let ok = |w: &[Letter]| w.len() < k || allowed.contains(&w[w.len() - k..]);
    Ok(extend_all(oracle.alphabet(), m, ok).into_iter().collect())
}

/// Every word of length `|v| + 2h` of the order-`k` approximation that has
/// `v` at position `h` contains `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvenBound {
    pub u: Word,
    pub v: Word,
    pub h: usize,
    pub k: usize,
}

impl ProvenBound {
    /// Re-checks the bound by listing the approximation words explicitly.
    pub fn verify(&self, oracle: &dyn LanguageOracle, k: usize) -> Result<bool> {
        let m = self.v.len() + 2 * self.h;
        if k > m {
            return Ok(true);
        }
        let words = sft_approx_words(oracle, k, m)?;
        Ok(words
            .iter()
            .filter(|w| w[self.h..self.h + self.v.len()] == self.v[..])
            .all(|w| word::is_subword(&self.u, w)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Semidecision<T> {
    Proven(T),
    Unknown,
}

impl<T> Semidecision<T> {
    pub fn is_proven(&self) -> bool {
        matches!(self, Semidecision::Proven(_))
    }
}

/// Whether some word of length `|v| + 2h` in the order-`k` approximation
/// has `v` at position `h` and avoids `u`.
fn has_counterexample(allowed: &BTreeSet<Word>, alphabet: &Alphabet, k: usize, u: &[Letter], v: &[Letter], h: usize) -> bool {
    let m = v.len() + 2 * h;
    let mut w: Word = Vec::with_capacity(m);
    fn go(
        w: &mut Word,
        m: usize,
        allowed: &BTreeSet<Word>,
        alphabet: &Alphabet,
        k: usize,
        u: &[Letter],
        v: &[Letter],
        h: usize,
    ) -> bool {
        if w.len() >= u.len() && w[w.len() - u.len()..] == u[..] {
            return false;
        }
        if w.len() == m {
            return true;
        }
        let p = w.len();
        let choices: Vec<Letter> = if p >= h && p < h + v.len() { vec![v[p - h]] } else { alphabet.letters().to_vec() };
        for a in choices {
            w.push(a);
            let ok = w.len() < k || allowed.contains(&w[w.len() - k..]);
            if ok && go(w, m, allowed, alphabet, k, u, v, h) {
                w.pop();
                return true;
            }
            w.pop();
        }
        false
    }
    go(&mut w, m, allowed, alphabet, k, u, v, h)
}

/// Searches `(k, h)` with `k + h <= budget`, smaller sums first and smaller
/// `h` first within a sum.
pub fn leq_semidecide(
    oracle: &dyn LanguageOracle,
    u: &[Letter],
    v: &[Letter],
    budget: usize,
) -> Result<Semidecision<ProvenBound>> {
    for w in [u, v] {
        if w.is_empty() || !oracle.contains(w) {
            return Err(Error::NotAFactor(word::format_word(w)));
        }
    }
    let mut cache: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
    for s in 1..=budget {
        for h in 0..s {
            let k = s - h;
            if k > v.len() + 2 * h {
                continue;
            }
            let allowed = cache.entry(k).or_insert_with(|| oracle.words(k));
            if !has_counterexample(allowed, oracle.alphabet(), k, u, v, h) {
                return Ok(Semidecision::Proven(ProvenBound { u: u.to_vec(), v: v.to_vec(), h, k }));
            }
        }
    }
    Ok(Semidecision::Unknown)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorCheck {
    Proven(Vec<ProvenBound>),
    /// The first probe word not shown to be below the candidate.
    Unknown(Word),
}

/// Whether every `u ∈ B_n(X)` is provably below `w`.
pub fn generator_check(oracle: &dyn LanguageOracle, w: &[Letter], n: usize, budget: usize) -> Result<GeneratorCheck> {
    let mut bounds = Vec::new();
    for u in oracle.words(n) {
        match leq_semidecide(oracle, &u, w, budget)? {
            Semidecision::Proven(b) => bounds.push(b),
            Semidecision::Unknown => return Ok(GeneratorCheck::Unknown(u)),
        }
    }
    Ok(GeneratorCheck::Proven(bounds))
}

/// Class data for one word: its representative and the two bounds
/// `h_{u,w_i}` and `h_{w_i,u}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub rep: usize,
    pub up: usize,
    pub down: usize,
}

/// Look-up tables for the halting decision: representatives of the
/// generating order, their halting answers and a class table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltingTables {
    pub reps: Vec<Word>,
    pub halts: Vec<Vec<bool>>,
    pub classes: BTreeMap<Word, ClassEntry>,
}

impl HaltingTables {
    /// Resolves each word against the representatives with `leq_semidecide`
    /// in both directions. `halts[i][j]` must be supplied.
    pub fn resolve(
        oracle: &dyn LanguageOracle,
        reps: Vec<Word>,
        halts: Vec<Vec<bool>>,
        words: &[Word],
        budget: usize,
    ) -> Result<Self> {
        let mut classes = BTreeMap::new();
        'words: for u in words {
            for (i, r) in reps.iter().enumerate() {
                let (Semidecision::Proven(a), Semidecision::Proven(b)) =
                    (leq_semidecide(oracle, u, r, budget)?, leq_semidecide(oracle, r, u, budget)?)
                else {
                    continue;
                };
                classes.insert(u.clone(), ClassEntry { rep: i, up: a.h, down: b.h });
                continue 'words;
            }
            return Err(Error::Invalid(format!("no representative found for {}", word::format_word(u))));
        }
        Ok(HaltingTables { reps, halts, classes })
    }
}

/// Whether some point has `u` at `i` and `v` at `i + j` with `j >= min_j`.
/// Short transitions are checked directly, longer ones answered by the table.
pub fn halting_with_tables(
    oracle: &dyn LanguageOracle,
    tables: &HaltingTables,
    u: &[Letter],
    v: &[Letter],
    min_j: usize,
) -> Result<bool> {
    let entry = |w: &[Letter]| {
        tables
            .classes
            .get(w)
            .ok_or_else(|| Error::Invalid(format!("no class entry for {}", word::format_word(w))))
    };
    let (cu, cv) = (entry(u)?, entry(v)?);
    let (wi, wj) = (&tables.reps[cu.rep], &tables.reps[cv.rep]);
    let window = wi.len() + cu.up + cu.down + wj.len() + cv.up + cv.down;
    let n = window + u.len().max(v.len());
    for w in oracle.words(n) {
        for i in 0..=w.len() - u.len() {
            if w[i..i + u.len()] != u[..] {
                continue;
            }
            for d in min_j..=window {
                if i + d + v.len() <= w.len() && w[i + d..i + d + v.len()] == v[..] {
                    return Ok(true);
                }
            }
        }
    }
    Ok(tables.halts[cu.rep][cv.rep])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn sunny() -> TemplateOracle {
        TemplateOracle::new(TemplateSubshift::parse("L:0 | C:1 | R:0").unwrap()).unwrap()
    }

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn approximations() {
        let o = sunny();
        let got = sft_approx_words(&o, 2, 3).unwrap();
        let want: BTreeSet<Word> = ["000", "001", "010", "100", "101"].iter().map(|s| w(s)).collect();
        assert_eq!(got, want);
        assert_eq!(sft_approx_words(&o, 3, 3).unwrap(), o.words(3));
        let g = SftOracle::golden_mean();
        assert!(sft_approx_words(&g, 2, 4).unwrap().iter().all(|x| !word::is_subword(&[1, 1], x)));
        assert!(sft_approx_words(&o, 3, 2).is_err());
    }

    #[test]
    fn fibonacci_language() {
        let f = SubstitutionOracle::fibonacci();
        assert_eq!(f.words(2).len(), 3);
        assert_eq!(f.words(5).len(), 6);
        assert!(!f.contains(&[2, 2]));
    }

    #[test]
    fn order_examples() {
        let o = sunny();
        let Semidecision::Proven(b) = leq_semidecide(&o, &w("01"), &w("1"), 6).unwrap() else { panic!() };
        assert_eq!((b.h, b.k), (1, 2));
        assert!(b.verify(&o, 3).unwrap());
        let Semidecision::Proven(b) = leq_semidecide(&o, &w("1"), &w("1"), 6).unwrap() else { panic!() };
        assert_eq!(b.h, 0);
        assert!(leq_semidecide(&o, &w("11"), &w("1"), 6).is_err());
        assert_eq!(leq_semidecide(&o, &w("1"), &w("0"), 10).unwrap(), Semidecision::Unknown);
    }

    #[test]
    fn generators() {
        let o = sunny();
        assert!(matches!(generator_check(&o, &w("1"), 2, 12).unwrap(), GeneratorCheck::Proven(_)));
        assert_eq!(generator_check(&o, &w("0"), 1, 12).unwrap(), GeneratorCheck::Unknown(w("1")));
    }

    #[test]
    fn table_halting() {
        let o = sunny();
        let reps = vec![w("0"), w("1")];
        let halts = vec![vec![true, true], vec![true, true]];
        let t = HaltingTables::resolve(&o, reps.clone(), halts, &[w("0"), w("1"), w("01")], 12).unwrap();
        assert_eq!(t.classes[&w("01")].rep, 1);
        assert!(halting_with_tables(&o, &t, &w("0"), &w("1"), 0).unwrap());
        assert!(halting_with_tables(&o, &t, &w("1"), &w("1"), 0).unwrap());
        let strict = HaltingTables { halts: vec![vec![true, true], vec![true, false]], ..t };
        assert!(!halting_with_tables(&o, &strict, &w("1"), &w("1"), 1).unwrap());
        assert!(halting_with_tables(&o, &strict, &w("2"), &w("1"), 0).is_err());
    }
}
