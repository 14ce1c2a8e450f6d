//! Alphabets, finite words, eventually periodic bi-infinite points,
//! clopen sets and semilinear occurrence sets.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::{Error, Result};

pub type Letter = u32;
pub type Word = Vec<Letter>;

/// Standard glyph table: `0-9`, then `a-z`, then `A-Z`.
pub fn standard_glyph(letter: Letter) -> Option<char> {
    match letter {
        0..=9 => char::from_digit(letter, 10),
        10..=35 => Some((b'a' + (letter - 10) as u8) as char),
        36..=61 => Some((b'A' + (letter - 36) as u8) as char),
        _ => None,
    }
}

pub fn letter_of_glyph(c: char) -> Option<Letter> {
    match c {
        '0'..='9' => Some(c as u32 - '0' as u32),
        'a'..='z' => Some(c as u32 - 'a' as u32 + 10),
        'A'..='Z' => Some(c as u32 - 'A' as u32 + 36),
        _ => None,
    }
}

/// Parses a word with the standard glyph table; whitespace is ignored.
pub fn parse_word(s: &str) -> Result<Word> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| letter_of_glyph(c).ok_or_else(|| Error::Parse(format!("bad glyph {c:?}"))))
        .collect()
}

/// Formats a word with the standard glyph table, falling back to `<n>`.
pub fn format_word(w: &[Letter]) -> String {
    w.iter()
        .map(|&l| standard_glyph(l).map(String::from).unwrap_or_else(|| format!("<{l}>")))
        .collect()
}

/// Space-separated decimal rendering, used for words over the naturals.
pub fn format_decimal(w: &[Letter]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Letter>,
    glyphs: Vec<Option<char>>,
}

impl Alphabet {
    /// Letters must be strictly increasing; glyphs come from the standard table.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let glyphs = letters.iter().map(|&l| standard_glyph(l)).collect();
        Self::with_glyphs(letters, glyphs)
    }

    pub fn with_glyphs(letters: Vec<Letter>, glyphs: Vec<Option<char>>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Invalid("empty alphabet".into()));
        }
        if letters.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Invalid("alphabet letters must be strictly increasing".into()));
        }
        if glyphs.len() != letters.len() {
            return Err(Error::Invalid("one glyph slot per letter".into()));
        }
        let named: Vec<char> = glyphs.iter().flatten().copied().collect();
        let distinct: BTreeSet<char> = named.iter().copied().collect();
        if distinct.len() != named.len() {
            return Err(Error::Invalid("duplicate glyph".into()));
        }
        Ok(Alphabet { letters, glyphs })
    }

    /// The letters `0..n`.
    pub fn range(n: u32) -> Self {
        Self::new((0..n.max(1)).collect()).expect("range alphabet is valid")
    }

    /// Alphabet whose letters are the standard-table values of the glyphs.
    pub fn from_glyphs(s: &str) -> Result<Self> {
        let mut letters: Vec<Letter> = parse_word(s)?;
        letters.sort_unstable();
        letters.dedup();
        Self::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.index_of(l).is_some()
    }

    pub fn index_of(&self, l: Letter) -> Option<usize> {
        self.letters.binary_search(&l).ok()
    }

    pub fn glyph(&self, l: Letter) -> Option<char> {
        self.index_of(l).and_then(|i| self.glyphs[i])
    }

    pub fn letter_for_glyph(&self, c: char) -> Option<Letter> {
        self.glyphs.iter().position(|g| *g == Some(c)).map(|i| self.letters[i])
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|&&l| !self.contains(l)) {
            Some(&l) => Err(Error::UnknownLetter(l)),
            None => Ok(()),
        }
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                self.letter_for_glyph(c)
                    .ok_or_else(|| Error::Parse(format!("glyph {c:?} not in alphabet")))
            })
            .collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|&l| match self.glyph(l) {
                Some(c) => c.to_string(),
                None => format!("<{l}>"),
            })
            .collect()
    }

    /// All words of length `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * self.len());
            for w in &out {
                for &l in &self.letters {
                    let mut x = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            out = next;
        }
        out
    }
}

/// All length-`n` factors of `w`.
pub fn factors(w: &[Letter], n: usize) -> BTreeSet<Word> {
    if n == 0 || n > w.len() {
        return BTreeSet::new();
    }
    w.windows(n).map(|s| s.to_vec()).collect()
}

pub fn is_subword(u: &[Letter], w: &[Letter]) -> bool {
    u.is_empty() || w.windows(u.len()).any(|s| s == u)
}

/// Shortest `r` with `w = r^k`.
pub fn primitive_root(w: &[Letter]) -> Word {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w[i] == w[i - p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

/// Index `s` of the lexicographically least rotation `w[s..] w[..s]`.
pub fn least_rotation_index(w: &[Letter]) -> usize {
    let n = w.len();
    (0..n)
        .min_by(|&a, &b| {
            let ra = w[a..].iter().chain(&w[..a]);
            let rb = w[b..].iter().chain(&w[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0)
}

pub fn rotate_left(w: &[Letter], s: usize) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    let s = s % w.len();
    w[s..].iter().chain(&w[..s]).copied().collect()
}

/// The bi-infinite point `∞u v w∞` whose center `v` starts at coordinate `origin`.
///
/// Values are always in canonical form: both periods primitive, the left
/// tail extended as far right as possible, then the right tail as far left
/// as possible. A periodic point is stored with empty center, equal least-rotation
/// periods and `origin` reduced into `[0, period)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventuallyPeriodicPoint {
    left: Word,
    center: Word,
    right: Word,
    origin: i64,
}

impl EventuallyPeriodicPoint {
    pub fn new(left: Word, center: Word, right: Word, origin: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Invalid("periods must be nonempty".into()));
        }
        Ok(Self::canonicalize(left, center, right, origin))
    }

    /// The periodic point `∞w∞` with `w` starting at coordinate 0.
    pub fn periodic(w: Word) -> Result<Self> {
        Self::new(w.clone(), Vec::new(), w, 0)
    }

    fn canonicalize(left: Word, mut center: Word, right: Word, mut origin: i64) -> Self {
        let mut u = primitive_root(&left);
        let mut w = primitive_root(&right);
        // Absorb the center into the left tail, letter by letter.
        while !center.is_empty() && center[0] == u[0] {
            u.rotate_left(1);
            center.remove(0);
            origin += 1;
        }
        while let (Some(&last), Some(&wl)) = (center.last(), w.last()) {
            if last != wl {
                break;
            }
            w.rotate_right(1);
            center.pop();
        }
        if center.is_empty() {
            if u == w {
                let s = least_rotation_index(&w);
                let r = rotate_left(&w, s);
                let p = r.len() as i64;
                return EventuallyPeriodicPoint {
                    left: r.clone(),
                    center: Vec::new(),
                    right: r,
                    origin: (origin + s as i64).rem_euclid(p),
                };
            }
            // Push the boundary right while the left tail keeps matching.
            while u[0] == w[0] {
                u.rotate_left(1);
                w.rotate_left(1);
                origin += 1;
            }
        }
        EventuallyPeriodicPoint { left: u, center, right: w, origin }
    }

    pub fn left_period(&self) -> &[Letter] {
        &self.left
    }

    pub fn center(&self) -> &[Letter] {
        &self.center
    }

    pub fn right_period(&self) -> &[Letter] {
        &self.right
    }

    /// Coordinate of the first center letter.
    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// First coordinate of the right tail.
    pub fn right_start(&self) -> i64 {
        self.origin + self.center.len() as i64
    }

    pub fn is_periodic(&self) -> bool {
        self.center.is_empty() && self.left == self.right
    }

    pub fn at(&self, i: i64) -> Letter {
        let a = self.origin;
        let b = self.right_start();
        if i < a {
            let p = self.left.len() as i64;
            let back = (a - 1 - i).rem_euclid(p) as usize;
            self.left[self.left.len() - 1 - back]
        } else if i < b {
            self.center[(i - a) as usize]
        } else {
            let p = self.right.len() as i64;
            self.right[(i - b).rem_euclid(p) as usize]
        }
    }

    /// Letters at coordinates `from..to`.
    pub fn window(&self, from: i64, to: i64) -> Word {
        (from..to).map(|i| self.at(i)).collect()
    }

    /// `σ^k`: the letter at coordinate `i` of the result is `self.at(i + k)`.
    pub fn shift(&self, k: i64) -> Self {
        Self::canonicalize(self.left.clone(), self.center.clone(), self.right.clone(), self.origin - k)
    }

    /// Equality up to shift.
    pub fn same_orbit(&self, other: &Self) -> bool {
        self.left == other.left && self.center == other.center && self.right == other.right
    }

    /// Representative of the orbit: the canonical form with origin 0.
    pub fn orbit_key(&self) -> (Word, Word, Word) {
        (self.left.clone(), self.center.clone(), self.right.clone())
    }

    /// A window containing one copy of each tail period beyond the center,
    /// padded by `pad` on both sides. Every factor of length `<= pad` of the
    /// point occurs inside it.
    pub fn core_window(&self, pad: usize) -> (i64, Word) {
        let from = self.origin - (self.left.len() + pad) as i64;
        let to = self.right_start() + (self.right.len() + pad) as i64;
        (from, self.window(from, to))
    }

    pub fn factors(&self, n: usize) -> BTreeSet<Word> {
        factors(&self.core_window(n).1, n)
    }

    pub fn contains_factor(&self, u: &[Letter]) -> bool {
        is_subword(u, &self.core_window(u.len()).1)
    }

    /// Positions `i` with `self.window(i, i + |u|) == u`.
    pub fn occurrences(&self, u: &[Letter]) -> SemilinearSet {
        assert!(!u.is_empty(), "occurrences of the empty word");
        let n = u.len() as i64;
        let a = self.origin;
        let b = self.right_start();
        let pl = self.left.len() as i64;
        let pr = self.right.len() as i64;
        let hit = |i: i64| (0..n).all(|t| self.at(i + t) == u[(t) as usize]);
        let mut progs = Vec::new();
        // Windows entirely inside the left tail: one period's worth, lifted downward.
        let top = a - n;
        for i in (top - pl + 1)..=top {
            if hit(i) {
                progs.push(Progression { offset: i, step: -pl });
            }
        }
        for i in (top + 1)..b {
            if hit(i) {
                progs.push(Progression { offset: i, step: 0 });
            }
        }
        for i in b..b + pr {
            if hit(i) {
                progs.push(Progression { offset: i, step: pr });
            }
        }
        SemilinearSet::new(progs)
    }
}

impl fmt::Display for EventuallyPeriodicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.origin.min(0);
        let hi = self.right_start().max(0);
        let left = self.window(lo - self.left.len() as i64, lo);
        let right = self.window(hi, hi + self.right.len() as i64);
        write!(
            f,
            "INF({}) {} . {} INF({})",
            format_word(&left),
            format_word(&self.window(lo, 0)),
            format_word(&self.window(0, hi)),
            format_word(&right)
        )
    }
}

impl std::str::FromStr for EventuallyPeriodicPoint {
    type Err = Error;

    /// Parses `INF(u) v . v' INF(w)`; the dot marks coordinate 0 and
    /// defaults to the start of the center.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::Parse(format!("point literal {s:?}: {m}"));
        let rest = s.strip_prefix("INF(").ok_or_else(|| bad("expected INF( prefix"))?;
        let close = rest.find(')').ok_or_else(|| bad("unclosed left period"))?;
        let left = parse_word(&rest[..close])?;
        let rest = &rest[close + 1..];
        let tail = rest.rfind("INF(").ok_or_else(|| bad("expected INF( for the right period"))?;
        let right_src = rest[tail + 4..]
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| bad("unclosed right period"))?;
        let right = parse_word(right_src)?;
        let middle = &rest[..tail];
        let (before, after) = match middle.find('.') {
            Some(d) => (&middle[..d], &middle[d + 1..]),
            None => ("", middle),
        };
        let before = parse_word(before)?;
        let after = parse_word(after)?;
        if left.is_empty() || right.is_empty() {
            return Err(bad("empty period"));
        }
        let origin = -(before.len() as i64);
        let mut center = before;
        center.extend(after);
        Self::new(left, center, right, origin)
    }
}

/// `{offset + n*step : n >= 0}`; `step == 0` is a singleton and a negative
/// step runs towards minus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    pub offset: i64,
    pub step: i64,
}

impl Progression {
    pub fn contains(&self, i: i64) -> bool {
        let d = i - self.offset;
        match self.step {
            0 => d == 0,
            s if s > 0 => d >= 0 && d % s == 0,
            s => d <= 0 && d % s == 0,
        }
    }

    /// Least element strictly greater than `bound`, if any.
    pub fn least_above(&self, bound: i64) -> Option<i64> {
        match self.step {
            0 => (self.offset > bound).then_some(self.offset),
            s if s > 0 => {
                if self.offset > bound {
                    Some(self.offset)
                } else {
                    let n = (bound - self.offset).div_euclid(s) + 1;
                    Some(self.offset + n * s)
                }
            }
            s => {
                if self.offset <= bound {
                    return None;
                }
                let q = -s;
                let n = (self.offset - bound - 1).div_euclid(q);
                Some(self.offset - n * q)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SemilinearSet {
    progs: Vec<Progression>,
}

impl SemilinearSet {
    pub fn new(mut progs: Vec<Progression>) -> Self {
        progs.sort();
        progs.dedup();
        let infinite: Vec<Progression> = progs.iter().filter(|p| p.step != 0).copied().collect();
        progs.retain(|p| p.step != 0 || !infinite.iter().any(|q| q.contains(p.offset)));
        // Fold a singleton sitting one step before an infinite progression into it.
        loop {
            let mut merged = false;
            for i in 0..progs.len() {
                if progs[i].step != 0 {
                    continue;
                }
                let x = progs[i].offset;
                if let Some(j) = progs.iter().position(|q| q.step != 0 && q.offset - q.step == x) {
                    progs[j].offset = x;
                    progs.remove(i);
                    merged = true;
                    break;
                }
            }
            if !merged {
                break;
            }
        }
        progs.sort();
        SemilinearSet { progs }
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progs
    }

    pub fn is_empty(&self) -> bool {
        self.progs.is_empty()
    }

    pub fn contains(&self, i: i64) -> bool {
        self.progs.iter().any(|p| p.contains(i))
    }

    pub fn unbounded_below(&self) -> bool {
        self.progs.iter().any(|p| p.step < 0)
    }

    pub fn unbounded_above(&self) -> bool {
        self.progs.iter().any(|p| p.step > 0)
    }

    /// Least element, `None` when empty or unbounded below.
    pub fn min(&self) -> Option<i64> {
        if self.unbounded_below() {
            return None;
        }
        self.progs.iter().map(|p| p.offset).min()
    }

    /// Greatest element, `None` when empty or unbounded above.
    pub fn max(&self) -> Option<i64> {
        if self.unbounded_above() {
            return None;
        }
        self.progs.iter().map(|p| p.offset).max()
    }

    pub fn least_above(&self, bound: i64) -> Option<i64> {
        self.progs.iter().filter_map(|p| p.least_above(bound)).min()
    }

    /// Elements inside `[lo, hi]`, ascending.
    pub fn elements_between(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&i| self.contains(i)).collect()
    }
}

/// Union of cylinders `[w]_0` over a set of words of one common width.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    width: usize,
    words: BTreeSet<Word>,
}

impl ClopenSet {
    pub fn new<I: IntoIterator<Item = Word>>(words: I) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        let width = words.iter().next().map_or(0, |w| w.len());
        if width == 0 {
            return Err(Error::Invalid("clopen set needs nonempty words".into()));
        }
        if words.iter().any(|w| w.len() != width) {
            return Err(Error::Invalid("clopen words must share one width".into()));
        }
        Ok(ClopenSet { width, words })
    }

    pub fn single(w: Word) -> Result<Self> {
        Self::new([w])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn contains_word(&self, w: &[Letter]) -> bool {
        self.words.contains(w)
    }

    /// Whether `σ^i(x)` lies in the set.
    pub fn holds_at(&self, x: &EventuallyPeriodicPoint, i: i64) -> bool {
        self.words.contains(&x.window(i, i + self.width as i64))
    }

    /// Whether the window starting at `i` of a finite word lies in the set.
    pub fn holds_in(&self, w: &[Letter], i: usize) -> bool {
        i + self.width <= w.len() && self.words.contains(&w[i..i + self.width])
    }
}

/// Length-`n` language of the union of the orbit closures of `points`.
pub fn language_n(points: &[EventuallyPeriodicPoint], n: usize) -> BTreeSet<Word> {
    points.iter().flat_map(|p| p.factors(n)).collect()
}

/// Least common multiple of a list of lengths.
pub fn lcm_all<I: IntoIterator<Item = usize>>(it: I) -> usize {
    it.into_iter().fold(1, |a, b| a.lcm(&b.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn pt(s: &str) -> EventuallyPeriodicPoint {
        s.parse().unwrap()
    }

    #[test]
    fn factors_examples() {
        let got = factors(&w("0102010"), 3);
        let want: BTreeSet<Word> = ["010", "102", "020", "201"].iter().map(|s| w(s)).collect();
        assert_eq!(got, want);
        assert_eq!(factors(&w("000"), 1), [w("0")].into_iter().collect());
        assert!(factors(&w("01"), 3).is_empty());
    }

    #[test]
    fn sunny_side_up_occurrences() {
        let p = pt("INF(0) . 1 INF(0)");
        let ones = p.occurrences(&w("1"));
        assert_eq!(ones.progressions(), &[Progression { offset: 0, step: 0 }]);
        let zeros = p.occurrences(&w("0"));
        for i in -30..30 {
            assert_eq!(zeros.contains(i), i != 0);
        }
        assert_eq!(zeros.progressions().len(), 2);
    }

    #[test]
    fn periodic_occurrences_are_even() {
        let p = pt("INF(01) . 01 INF(01)");
        let occ = p.occurrences(&w("01"));
        for i in -20..20 {
            assert_eq!(occ.contains(i), i % 2 == 0);
        }
    }

    #[test]
    fn language_examples() {
        let sunny = pt("INF(0) . 1 INF(0)");
        let want: BTreeSet<Word> = ["000", "001", "010", "100"].iter().map(|s| w(s)).collect();
        assert_eq!(language_n(&[sunny], 3), want);
        let fixed = pt("INF(a) . a INF(a)");
        assert_eq!(language_n(&[fixed], 2), [w("aa")].into_iter().collect());
        let p = pt("INF(0) . 12 INF(0)");
        let want: BTreeSet<Word> = ["00", "01", "12", "20"].iter().map(|s| w(s)).collect();
        assert_eq!(language_n(&[p], 2), want);
    }

    #[test]
    fn shift_examples() {
        let sunny = pt("INF(0) . 1 INF(0)");
        assert_eq!(sunny.shift(0), sunny);
        assert_eq!(sunny.shift(1).at(-1), 1);
        let per = pt("INF(01) . 01 INF(01)");
        assert_eq!(per.shift(2), per);
        assert_ne!(per.shift(1), per);
        assert!(per.shift(1).same_orbit(&per));
    }

    #[test]
    fn presentations_agree() {
        assert_eq!(pt("INF(00) . 1 INF(0)"), pt("INF(0) . 1 INF(0)"));
        assert_eq!(pt("INF(0) 0 . 1 0 0 INF(00)"), pt("INF(0) . 1 INF(0)"));
        assert_eq!(pt("INF(01) 0101 . INF(01)"), pt("INF(01) . INF(01)"));
        let seam = pt("INF(01) 0101 . INF(10)");
        assert!(!seam.is_periodic());
        assert_eq!(seam.window(-2, 2), w("0110"));
    }

    #[test]
    fn literal_round_trip() {
        for s in ["INF(0) . 1 INF(0)", "INF(01) 2 . 3 INF(4)", "INF(0) . INF(1)", "INF(12) . INF(12)"] {
            let p = pt(s);
            assert_eq!(pt(&p.to_string()), p, "{s}");
        }
        assert!("INF() . 1 INF(0)".parse::<EventuallyPeriodicPoint>().is_err());
    }

    #[test]
    fn alphabet_rejects_bad_input() {
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec![1, 1]).is_err());
        assert!(Alphabet::with_glyphs(vec![0, 1], vec![Some('x'), Some('x')]).is_err());
        let ab = Alphabet::from_glyphs("ba").unwrap();
        assert_eq!(ab.letters(), &[10, 11]);
        assert_eq!(ab.format_word(&ab.parse_word("abba").unwrap()), "abba");
    }

    #[test]
    fn semilinear_bounds() {
        let s = SemilinearSet::new(vec![
            Progression { offset: 3, step: 0 },
            Progression { offset: 5, step: 2 },
        ]);
        assert_eq!(s.progressions(), &[Progression { offset: 3, step: 2 }]);
        assert_eq!(s.least_above(4), Some(5));
        assert_eq!(s.min(), Some(3));
        assert_eq!(s.max(), None);
        let down = Progression { offset: 10, step: -3 };
        assert_eq!(down.least_above(0), Some(1));
        assert_eq!(down.least_above(10), None);
    }
}
