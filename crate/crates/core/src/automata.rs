//! Finite automata over integer alphabets: NFAs, a small regex language,
//! builders for the piecewise testable, local and renewal families, and
//! the syntactic monoid of a regular language.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::word::{Alphabet, Letter, Word};
use crate::{Error, Result};

/// Largest number of states a determinization may produce.
pub const DETERMINIZE_CAP: usize = 1 << 16;

/// Largest syntactic monoid we are willing to enumerate.
pub const MONOID_CAP: usize = 200_000;

/// Nondeterministic automaton without epsilon moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    // delta[state][letter index] = sorted targets
    delta: Vec<Vec<Vec<usize>>>,
    initial: BTreeSet<usize>,
    finals: Vec<bool>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, states: usize) -> Self {
        let k = alphabet.len();
        Nfa { alphabet, delta: vec![vec![Vec::new(); k]; states], initial: BTreeSet::new(), finals: vec![false; states] }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    fn add_state(&mut self) -> usize {
        self.delta.push(vec![Vec::new(); self.alphabet.len()]);
        self.finals.push(false);
        self.delta.len() - 1
    }

    pub fn add_transition(&mut self, from: usize, letter: Letter, to: usize) -> Result<()> {
        let a = self.alphabet.index_of(letter).ok_or(Error::UnknownLetter(letter))?;
        if from >= self.num_states() || to >= self.num_states() {
            return Err(Error::Invalid(format!("transition {from}->{to} names an undeclared state")));
        }
        self.link(from, a, to);
        Ok(())
    }

    fn link(&mut self, from: usize, a: usize, to: usize) {
        let targets = &mut self.delta[from][a];
        if let Err(pos) = targets.binary_search(&to) {
            targets.insert(pos, to);
        }
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial.insert(q);
    }

    pub fn set_final(&mut self, q: usize, yes: bool) {
        self.finals[q] = yes;
    }

    /// Successors of `q` on the letter with alphabet index `a`.
    pub fn targets(&self, q: usize, a: usize) -> &[usize] {
        &self.delta[q][a]
    }

    pub fn empty(alphabet: &Alphabet) -> Self {
        let mut n = Nfa::new(alphabet.clone(), 1);
        n.set_initial(0);
        n
    }

    pub fn epsilon(alphabet: &Alphabet) -> Self {
        let mut n = Self::empty(alphabet);
        n.set_final(0, true);
        n
    }

    pub fn letter(alphabet: &Alphabet, l: Letter) -> Result<Self> {
        let mut n = Nfa::new(alphabet.clone(), 2);
        n.set_initial(0);
        n.set_final(1, true);
        n.add_transition(0, l, 1)?;
        Ok(n)
    }

    pub fn any_letter(alphabet: &Alphabet) -> Self {
        let mut n = Nfa::new(alphabet.clone(), 2);
        n.set_initial(0);
        n.set_final(1, true);
        for a in 0..alphabet.len() {
            n.link(0, a, 1);
        }
        n
    }

    /// All words over the alphabet.
    pub fn universal(alphabet: &Alphabet) -> Self {
        let mut n = Self::epsilon(alphabet);
        for a in 0..alphabet.len() {
            n.link(0, a, 0);
        }
        n
    }

    /// The word `w` alone.
    pub fn word(alphabet: &Alphabet, w: &[Letter]) -> Result<Self> {
        alphabet.check_word(w)?;
        let mut n = Nfa::new(alphabet.clone(), w.len() + 1);
        n.set_initial(0);
        n.set_final(w.len(), true);
        for (i, &l) in w.iter().enumerate() {
            n.add_transition(i, l, i + 1)?;
        }
        Ok(n)
    }

    fn same_alphabet(&self, other: &Nfa) -> Result<()> {
        if self.alphabet.letters() != other.alphabet.letters() {
            return Err(Error::Invalid("automata over different alphabets".into()));
        }
        Ok(())
    }

    /// Copies `other` into `self`, returning the state offset.
    fn absorb(&mut self, other: &Nfa) -> usize {
        let off = self.num_states();
        for row in &other.delta {
            self.delta.push(row.iter().map(|t| t.iter().map(|q| q + off).collect()).collect());
        }
        self.finals.extend(&other.finals);
        off
    }

    pub fn accepts_epsilon(&self) -> bool {
        self.initial.iter().any(|&q| self.finals[q])
    }

    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        self.same_alphabet(other)?;
        let mut n = self.clone();
        let off = n.absorb(other);
        n.initial.extend(other.initial.iter().map(|q| q + off));
        Ok(n)
    }

    pub fn concat(&self, other: &Nfa) -> Result<Nfa> {
        self.same_alphabet(other)?;
        let left_nullable = self.accepts_epsilon();
        let right_nullable = other.accepts_epsilon();
        let mut n = self.clone();
        let off = n.absorb(other);
        for q in 0..off {
            n.finals[q] = self.finals[q] && right_nullable;
        }
        let second_starts: Vec<usize> = other.initial.iter().map(|q| q + off).collect();
        for p in 0..off {
            for a in 0..self.alphabet.len() {
                if self.delta[p][a].iter().any(|&q| self.finals[q]) {
                    for &s in &second_starts {
                        n.link(p, a, s);
                    }
                }
            }
        }
        if left_nullable {
            n.initial.extend(second_starts);
        }
        Ok(n)
    }

    pub fn star(&self) -> Nfa {
        let mut n = self.clone();
        let starts: Vec<usize> = self.initial.iter().copied().collect();
        for p in 0..self.num_states() {
            for a in 0..self.alphabet.len() {
                if self.delta[p][a].iter().any(|&q| self.finals[q]) {
                    for &s in &starts {
                        n.link(p, a, s);
                    }
                }
            }
        }
        let fresh = n.add_state();
        n.set_final(fresh, true);
        n.set_initial(fresh);
        n
    }

    pub fn intersect(&self, other: &Nfa) -> Result<Nfa> {
        self.same_alphabet(other)?;
        let k = self.alphabet.len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut n = Nfa::new(self.alphabet.clone(), 0);
        for &p in &self.initial {
            for &q in &other.initial {
                let id = n.add_state();
                ids.insert((p, q), id);
                n.set_initial(id);
                queue.push_back((p, q));
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let id = ids[&(p, q)];
            n.finals[id] = self.finals[p] && other.finals[q];
            for a in 0..k {
                for &p2 in &self.delta[p][a] {
                    for &q2 in &other.delta[q][a] {
                        let target = match ids.get(&(p2, q2)) {
                            Some(&t) => t,
                            None => {
                                let t = n.add_state();
                                ids.insert((p2, q2), t);
                                queue.push_back((p2, q2));
                                t
                            }
                        };
                        n.link(id, a, target);
                    }
                }
            }
        }
        if n.num_states() == 0 {
            return Ok(Nfa::empty(&self.alphabet));
        }
        Ok(n)
    }

    pub fn complement(&self) -> Result<Nfa> {
        let mut d = self.determinize()?;
        for f in d.finals.iter_mut() {
            *f = !*f;
        }
        Ok(d.to_nfa())
    }

    /// Subset construction; the result is complete.
    pub fn determinize(&self) -> Result<Dfa> {
        let k = self.alphabet.len();
        let start: Vec<usize> = self.initial.iter().copied().collect();
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let mut next: Vec<usize> = sets[i].iter().flat_map(|&q| self.delta[q][a].iter().copied()).collect();
                next.sort_unstable();
                next.dedup();
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= DETERMINIZE_CAP {
                            return Err(Error::Budget(format!(
                                "determinization exceeds {DETERMINIZE_CAP} states"
                            )));
                        }
                        ids.insert(next.clone(), sets.len());
                        sets.push(next);
                        sets.len() - 1
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = sets.iter().map(|s| s.iter().any(|&q| self.finals[q])).collect();
        Ok(Dfa { alphabet: self.alphabet.clone(), delta, start: 0, finals })
    }

    /// Membership; letters outside the alphabet are rejected.
    pub fn accepts(&self, w: &[Letter]) -> bool {
        let mut cur: BTreeSet<usize> = self.initial.clone();
        for &l in w {
            let Some(a) = self.alphabet.index_of(l) else { return false };
            cur = cur.iter().flat_map(|&q| self.delta[q][a].iter().copied()).collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&q| self.finals[q])
    }

    pub fn is_empty_language(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = self.initial.iter().copied().collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            if self.finals[q] {
                return false;
            }
            for t in &self.delta[q] {
                for &r in t {
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
        true
    }

    /// `S* L S*`: words having a factor in the language.
    pub fn factor_closure(&self) -> Result<Nfa> {
        let all = Nfa::universal(&self.alphabet);
        all.concat(self)?.concat(&all)
    }

    /// Relation of the letter with alphabet index `a`.
    pub fn letter_relation(&self, a: usize) -> BoolMatrix {
        let mut m = BoolMatrix::zero(self.num_states());
        for p in 0..self.num_states() {
            for &q in &self.delta[p][a] {
                m.set(p, q, true);
            }
        }
        m
    }

    /// Whether a relation links some initial state to some final state.
    pub fn relation_accepts(&self, r: &BoolMatrix) -> bool {
        self.initial.iter().any(|&p| (0..self.num_states()).any(|q| self.finals[q] && r.get(p, q)))
    }
}

/// `(q, q')` is set iff the automaton can move from `q` to `q'` reading `w`.
pub fn word_relation(nfa: &Nfa, w: &[Letter]) -> Result<BoolMatrix> {
    let mut r = BoolMatrix::identity(nfa.num_states());
    for &l in w {
        let a = nfa.alphabet.index_of(l).ok_or(Error::UnknownLetter(l))?;
        r = r.compose(&nfa.letter_relation(a));
    }
    Ok(r)
}

/// Complete deterministic automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<Vec<usize>>,
    start: usize,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        let mut q = self.start;
        for &l in w {
            let Some(a) = self.alphabet.index_of(l) else { return false };
            q = self.delta[q][a];
        }
        self.finals[q]
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.alphabet.clone(), self.num_states());
        n.set_initial(self.start);
        for (q, row) in self.delta.iter().enumerate() {
            n.finals[q] = self.finals[q];
            for (a, &t) in row.iter().enumerate() {
                n.link(q, a, t);
            }
        }
        n
    }

    /// Minimal equivalent automaton by partition refinement.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut order = vec![self.start];
        let mut index = vec![usize::MAX; self.num_states()];
        index[self.start] = 0;
        let mut i = 0;
        while i < order.len() {
            for a in 0..k {
                let t = self.delta[order[i]][a];
                if index[t] == usize::MAX {
                    index[t] = order.len();
                    order.push(t);
                }
            }
            i += 1;
        }
        let n = order.len();
        let mut class: Vec<usize> = order.iter().map(|&q| usize::from(self.finals[q])).collect();
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0; n];
            for s in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[s]);
                for a in 0..k {
                    sig.push(class[index[self.delta[order[s]][a]]]);
                }
                let fresh = sigs.len();
                next[s] = *sigs.entry(sig).or_insert(fresh);
            }
            let new_count = sigs.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut delta = vec![vec![0; k]; count];
        let mut finals = vec![false; count];
        for s in 0..n {
            finals[class[s]] = self.finals[order[s]];
            for a in 0..k {
                delta[class[s]][a] = class[index[self.delta[order[s]][a]]];
            }
        }
        Dfa { alphabet: self.alphabet.clone(), delta, start: class[0], finals }
    }
}

/// Square boolean matrix stored as bit rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zero(n: usize) -> Self {
        let stride = n.div_ceil(64).max(1);
        BoolMatrix { n, stride, bits: vec![0; n * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let cell = &mut self.bits[i * self.stride + j / 64];
        if v {
            *cell |= 1 << (j % 64);
        } else {
            *cell &= !(1 << (j % 64));
        }
    }

    /// Relational composition: first `self`, then `other`.
    pub fn compose(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n, "relation sizes differ");
        let mut out = BoolMatrix::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    let (dst, src) = (i * self.stride, k * self.stride);
                    for c in 0..self.stride {
                        out.bits[dst + c] |= other.bits[src + c];
                    }
                }
            }
        }
        out
    }
}

/// Regular expression syntax tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Letter(Letter),
    Any,
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Complement(Box<Regex>),
}

impl Regex {
    /// Parses the glyph syntax: juxtaposition, `+`, postfix `*`, prefix `~`,
    /// `@` for any letter, parentheses. Whitespace is ignored. The empty
    /// string denotes the empty language and `()` the empty word.
    pub fn parse(src: &str, alphabet: &Alphabet) -> Result<Regex> {
        let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Ok(Regex::Empty);
        }
        let mut p = RegexParser { chars, pos: 0, alphabet };
        let r = p.union()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("unexpected {:?} at offset {}", p.chars[p.pos], p.pos)));
        }
        Ok(r)
    }

    pub fn concat(self, other: Regex) -> Regex {
        Regex::Concat(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Regex) -> Regex {
        Regex::Union(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Regex {
        Regex::Star(Box::new(self))
    }

    pub fn complement(self) -> Regex {
        Regex::Complement(Box::new(self))
    }

    pub fn word(w: &[Letter]) -> Regex {
        w.iter().fold(Regex::Epsilon, |acc, &l| match acc {
            Regex::Epsilon => Regex::Letter(l),
            acc => acc.concat(Regex::Letter(l)),
        })
    }

    pub fn depth(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Letter(_) | Regex::Any => 0,
            Regex::Concat(a, b) | Regex::Union(a, b) => 1 + a.depth().max(b.depth()),
            Regex::Star(a) | Regex::Complement(a) => 1 + a.depth(),
        }
    }

    pub fn compile(&self, alphabet: &Alphabet) -> Result<Nfa> {
        match self {
            Regex::Empty => Ok(Nfa::empty(alphabet)),
            Regex::Epsilon => Ok(Nfa::epsilon(alphabet)),
            Regex::Letter(l) => Nfa::letter(alphabet, *l),
            Regex::Any => Ok(Nfa::any_letter(alphabet)),
            Regex::Concat(a, b) => a.compile(alphabet)?.concat(&b.compile(alphabet)?),
            Regex::Union(a, b) => a.compile(alphabet)?.union(&b.compile(alphabet)?),
            Regex::Star(a) => Ok(a.compile(alphabet)?.star()),
            Regex::Complement(a) => a.compile(alphabet)?.complement(),
        }
    }

    /// Renders in the parse syntax with the given alphabet's glyphs.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            Regex::Empty => "~(@*)".into(),
            Regex::Epsilon => "()".into(),
            Regex::Letter(l) => alphabet.format_word(&[*l]),
            Regex::Any => "@".into(),
            Regex::Concat(a, b) => format!("({}{})", a.render(alphabet), b.render(alphabet)),
            Regex::Union(a, b) => format!("({}+{})", a.render(alphabet), b.render(alphabet)),
            Regex::Star(a) => format!("({})*", a.render(alphabet)),
            Regex::Complement(a) => format!("~({})", a.render(alphabet)),
        }
    }
}

struct RegexParser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl RegexParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<Regex> {
        let mut r = self.concat()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            r = r.or(self.concat()?);
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut r: Option<Regex> = None;
        while let Some(c) = self.peek() {
            if c == '+' || c == ')' {
                break;
            }
            let t = self.prefixed()?;
            r = Some(match r {
                None => t,
                Some(r) => r.concat(t),
            });
        }
        r.ok_or_else(|| Error::Parse(format!("empty operand at offset {}", self.pos)))
    }

    fn prefixed(&mut self) -> Result<Regex> {
        if self.peek() == Some('~') {
            self.pos += 1;
            return Ok(self.prefixed()?.complement());
        }
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = r.star();
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        let c = self.peek().ok_or_else(|| Error::Parse("unexpected end of pattern".into()))?;
        self.pos += 1;
        match c {
            '@' => Ok(Regex::Any),
            '(' => {
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Regex::Epsilon);
                }
                let r = self.union()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse(format!("missing ')' at offset {}", self.pos)));
                }
                self.pos += 1;
                Ok(r)
            }
            '*' | '+' | ')' | '~' => Err(Error::Parse(format!("unexpected {c:?} at offset {}", self.pos - 1))),
            g => self
                .alphabet
                .letter_for_glyph(g)
                .map(Regex::Letter)
                .ok_or_else(|| Error::Parse(format!("glyph {g:?} not in alphabet"))),
        }
    }
}

/// `a_1 S* a_2 S* ... S* a_k`.
pub fn build_elementary_pt(alphabet: &Alphabet, letters: &[Letter]) -> Result<Nfa> {
    if letters.is_empty() {
        return Err(Error::Invalid("piecewise testable pattern needs a letter".into()));
    }
    alphabet.check_word(letters)?;
    let k = letters.len();
    let mut n = Nfa::new(alphabet.clone(), k + 1);
    n.set_initial(0);
    n.set_final(k, true);
    for (i, &l) in letters.iter().enumerate() {
        n.add_transition(i, l, i + 1)?;
        if i > 0 {
            for a in 0..alphabet.len() {
                n.link(i, a, i);
            }
        }
    }
    Ok(n)
}

/// `(A S* ∩ S* B) \ S* F S*` for a set `F` of two-letter words.
pub fn build_local(
    alphabet: &Alphabet,
    first: &BTreeSet<Letter>,
    last: &BTreeSet<Letter>,
    forbidden: &BTreeSet<Word>,
) -> Result<Nfa> {
    for f in forbidden {
        if f.len() != 2 {
            return Err(Error::Invalid("forbidden words of a local language have length 2".into()));
        }
        alphabet.check_word(f)?;
    }
    alphabet.check_word(&first.iter().chain(last).copied().collect::<Vec<_>>())?;
    // State 0 is the start; state 1 + i remembers that letter i was read last.
    let k = alphabet.len();
    let mut n = Nfa::new(alphabet.clone(), k + 1);
    n.set_initial(0);
    for (i, &x) in alphabet.letters().iter().enumerate() {
        if first.contains(&x) {
            n.link(0, i, 1 + i);
        }
        n.set_final(1 + i, last.contains(&x));
        for (j, &y) in alphabet.letters().iter().enumerate() {
            if !forbidden.contains(&vec![x, y]) {
                n.link(1 + i, j, 1 + j);
            }
        }
    }
    Ok(n)
}

/// `u (w_1 + ... + w_k)* v`.
pub fn build_renewal(alphabet: &Alphabet, u: &[Letter], v: &[Letter], ws: &[Word]) -> Result<Nfa> {
    let body = ws.iter().fold(Regex::Empty, |acc, w| match acc {
        Regex::Empty => Regex::word(w),
        acc => acc.or(Regex::word(w)),
    });
    Regex::word(u).concat(body.star()).concat(Regex::word(v)).compile(alphabet)
}

/// Outcome of the idempotent-exponent computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    /// Least `p` with `m^p = m^(p+1)` for every element `m`.
    Aperiodic(usize),
    NotAperiodic,
}

/// Transition monoid of the minimal automaton of a language.
#[derive(Debug, Clone)]
pub struct SyntacticMonoid {
    elements: Vec<Vec<usize>>,
    representatives: Vec<Word>,
    index: HashMap<Vec<usize>, usize>,
}

impl SyntacticMonoid {
    pub fn of(nfa: &Nfa) -> Result<Self> {
        let dfa = nfa.determinize()?.minimize();
        let n = dfa.num_states();
        let id: Vec<usize> = (0..n).collect();
        let mut elements = vec![id.clone()];
        let mut representatives = vec![Vec::new()];
        let mut index = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elements.len() {
            for (a, &l) in nfa.alphabet().letters().iter().enumerate() {
                let next: Vec<usize> = elements[i].iter().map(|&q| dfa.step(q, a)).collect();
                if !index.contains_key(&next) {
                    if elements.len() >= MONOID_CAP {
                        return Err(Error::Budget(format!("syntactic monoid exceeds {MONOID_CAP} elements")));
                    }
                    let mut rep = representatives[i].clone();
                    rep.push(l);
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    representatives.push(rep);
                }
            }
            i += 1;
        }
        Ok(SyntacticMonoid { elements, representatives, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the identity element.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn representative(&self, m: usize) -> &[Letter] {
        &self.representatives[m]
    }

    /// Product `x` then `y`.
    pub fn product(&self, x: usize, y: usize) -> usize {
        let f: Vec<usize> = self.elements[x].iter().map(|&q| self.elements[y][q]).collect();
        self.index[&f]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|x| (0..self.len()).map(|y| self.product(x, y)).collect()).collect()
    }

    pub fn idempotent_exponent(&self) -> Exponent {
        let mut best = 1;
        for m in 0..self.len() {
            let mut powers = vec![m];
            loop {
                let next = self.product(*powers.last().unwrap(), m);
                if let Some(pos) = powers.iter().position(|&x| x == next) {
                    if powers.len() - pos > 1 {
                        return Exponent::NotAperiodic;
                    }
                    // powers[pos] = m^(pos+1) is the first fixed power.
                    best = best.max(pos + 1);
                    break;
                }
                powers.push(next);
            }
        }
        Exponent::Aperiodic(best)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Aperiodic(p) => write!(f, "{p}"),
            Exponent::NotAperiodic => write!(f, "NOT-APERIODIC"),
        }
    }
}
