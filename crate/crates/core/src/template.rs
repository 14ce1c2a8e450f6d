//! Countable subshifts given as finite unions of block templates
//! `∞p c_1 q_1^e_1 c_2 ... q_s^e_s c_{s+1} r∞`, closed under letting any
//! exponent go to infinity.
//!
//! Decisions enumerate realizations with every exponent below a saturation
//! cap: past the cap a block has an untouched copy whose removal keeps the
//! witness intact, so larger exponents add nothing new.

use std::collections::BTreeSet;
use std::fmt;

use crate::word::{self, ClopenSet, EventuallyPeriodicPoint, Letter, SemilinearSet, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Connector(Word),
    /// Repeated any finite number of times, including zero.
    Block(Word),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockTemplate {
    left: Word,
    parts: Vec<Part>,
    right: Word,
}

impl BlockTemplate {
    pub fn new(left: Word, parts: Vec<Part>, right: Word) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::Invalid("template tails must be nonempty".into()));
        }
        if parts.iter().any(|p| matches!(p, Part::Block(q) if q.is_empty())) {
            return Err(Error::Invalid("template blocks must be nonempty".into()));
        }
        Ok(BlockTemplate { left, parts, right })
    }

    /// Parses `L:p | C:c | E:q | ... | R:r`.
    pub fn parse(line: &str) -> Result<Self> {
        let tokens: Vec<&str> = line.split('|').map(str::trim).collect();
        let bad = |m: String| Error::Parse(format!("template {line:?}: {m}"));
        let field = |tok: &str, tag: &str| -> Option<Result<Word>> { tok.strip_prefix(tag).map(word::parse_word) };
        if tokens.len() < 2 {
            return Err(bad("needs at least L: and R: tokens".into()));
        }
        let left = field(tokens[0], "L:").ok_or_else(|| bad("first token must be L:".into()))??;
        let right = field(tokens[tokens.len() - 1], "R:").ok_or_else(|| bad("last token must be R:".into()))??;
        let mut parts = Vec::new();
        for tok in &tokens[1..tokens.len() - 1] {
            if let Some(w) = field(tok, "C:") {
                parts.push(Part::Connector(w?));
            } else if let Some(w) = field(tok, "E:") {
                parts.push(Part::Block(w?));
            } else {
                return Err(bad(format!("unknown token {tok:?}")));
            }
        }
        Self::new(left, parts, right)
    }

    /// The template whose only realization is `p`.
    pub fn from_point(p: &EventuallyPeriodicPoint) -> Self {
        let parts = if p.center().is_empty() { vec![] } else { vec![Part::Connector(p.center().to_vec())] };
        BlockTemplate { left: p.left_period().to_vec(), parts, right: p.right_period().to_vec() }
    }

    pub fn left(&self) -> &[Letter] {
        &self.left
    }

    pub fn right(&self) -> &[Letter] {
        &self.right
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn blocks(&self) -> Vec<&Word> {
        self.parts
            .iter()
            .filter_map(|p| match p {
                Part::Block(q) => Some(q),
                Part::Connector(_) => None,
            })
            .collect()
    }

    pub fn block_count(&self) -> usize {
        self.blocks().len()
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut s: BTreeSet<Letter> = self.left.iter().chain(&self.right).copied().collect();
        for p in &self.parts {
            match p {
                Part::Connector(w) | Part::Block(w) => s.extend(w),
            }
        }
        s
    }

    /// Center word with the given exponents, one per block.
    pub fn center_word(&self, exps: &[u64]) -> Word {
        let mut out = Vec::new();
        let mut e = exps.iter();
        for p in &self.parts {
            match p {
                Part::Connector(w) => out.extend(w),
                Part::Block(q) => {
                    for _ in 0..*e.next().expect("one exponent per block") {
                        out.extend(q);
                    }
                }
            }
        }
        out
    }

    /// The point with the given exponents, center starting at coordinate 0.
    pub fn realize(&self, exps: &[u64]) -> EventuallyPeriodicPoint {
        EventuallyPeriodicPoint::new(self.left.clone(), self.center_word(exps), self.right.clone(), 0)
            .expect("tails are nonempty")
    }

    /// Letting block `i` go to infinity: the piece ending in `q^∞` and the
    /// piece starting with `∞q`.
    pub fn split(&self, i: usize) -> (BlockTemplate, BlockTemplate) {
        let pos = self
            .parts
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Part::Block(_)))
            .nth(i)
            .map(|(k, _)| k)
            .expect("block index in range");
        let Part::Block(q) = &self.parts[pos] else { unreachable!() };
        let first = BlockTemplate { left: self.left.clone(), parts: self.parts[..pos].to_vec(), right: q.clone() };
        let second = BlockTemplate { left: q.clone(), parts: self.parts[pos + 1..].to_vec(), right: self.right.clone() };
        (first, second)
    }

    fn without_block(&self, i: usize) -> BlockTemplate {
        let mut seen = 0;
        let parts = self
            .parts
            .iter()
            .filter(|p| {
                if matches!(p, Part::Block(_)) {
                    seen += 1;
                    seen - 1 != i
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        BlockTemplate { left: self.left.clone(), parts, right: self.right.clone() }
    }

    /// Whether the orbit of a realization ignores block `i`'s exponent.
    fn is_degenerate(&self, i: usize) -> bool {
        let s = self.block_count();
        let mut exps = vec![0u64; s];
        let combos = 3usize.pow(s as u32 - 1);
        for c in 0..combos {
            let mut rest = c;
            for (k, e) in exps.iter_mut().enumerate() {
                if k != i {
                    *e = (rest % 3) as u64;
                    rest /= 3;
                }
            }
            exps[i] = 0;
            let base = self.realize(&exps);
            for e in 1..=2 {
                exps[i] = e;
                if !self.realize(&exps).same_orbit(&base) {
                    return false;
                }
            }
        }
        true
    }

    /// Primitive tails, merged connectors, blocks absorbed into tails
    /// removed; exponent-free templates become canonical points.
    pub fn normalize(&self) -> BlockTemplate {
        let mut t = self.clone();
        loop {
            let mut parts: Vec<Part> = Vec::new();
            for p in t.parts.drain(..) {
                match (parts.last_mut(), p) {
                    (_, Part::Connector(w)) if w.is_empty() => {}
                    (Some(Part::Connector(prev)), Part::Connector(w)) => prev.extend(w),
                    (_, p) => parts.push(p),
                }
            }
            t.parts = parts;
            match (0..t.block_count()).find(|&i| t.is_degenerate(i)) {
                Some(i) => t = t.without_block(i),
                None => break,
            }
        }
        if t.block_count() == 0 {
            return BlockTemplate::from_point(&t.realize(&[]));
        }
        t.left = word::primitive_root(&t.left);
        t.right = word::primitive_root(&t.right);
        t
    }

    /// Points of the closure that are not isolated in it.
    pub fn derivative(&self) -> Vec<BlockTemplate> {
        let t = self.normalize();
        if t.block_count() == 0 {
            let p = t.realize(&[]);
            if p.is_periodic() {
                return vec![];
            }
            return [t.left.clone(), t.right.clone()]
                .into_iter()
                .map(|w| BlockTemplate { left: w.clone(), parts: vec![], right: w }.normalize())
                .collect();
        }
        (0..t.block_count())
            .flat_map(|i| {
                let (a, b) = t.split(i);
                [a.normalize(), b.normalize()]
            })
            .collect()
    }

    /// Calls `f` on every exponent vector below `caps` until it returns true.
    fn any_realization(&self, caps: &[u64], mut f: impl FnMut(&EventuallyPeriodicPoint) -> bool) -> bool {
        let mut exps = vec![0u64; caps.len()];
        loop {
            if f(&self.realize(&exps)) {
                return true;
            }
            let mut k = 0;
            while k < exps.len() && exps[k] == caps[k] {
                exps[k] = 0;
                k += 1;
            }
            if k == exps.len() {
                return false;
            }
            exps[k] += 1;
        }
    }

    /// Per-block caps: `touched` windows of total length `span`, plus `extra`.
    fn caps(&self, span: usize, windows: usize, extra: usize) -> Vec<u64> {
        self.blocks().iter().map(|q| (span.div_ceil(q.len()) + windows + extra) as u64).collect()
    }
}

impl fmt::Display for BlockTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L:{}", word::format_word(&self.left))?;
        for p in &self.parts {
            match p {
                Part::Connector(w) => write!(f, " | C:{}", word::format_word(w))?,
                Part::Block(q) => write!(f, " | E:{}", word::format_word(q))?,
            }
        }
        write!(f, " | R:{}", word::format_word(&self.right))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reachability {
    /// `x ∈ [C]` at coordinate `from` and the target set is hit `j` steps later.
    Reachable { point: EventuallyPeriodicPoint, from: i64, j: u64 },
    Unreachable,
}

impl Reachability {
    pub fn is_reachable(&self) -> bool {
        matches!(self, Reachability::Reachable { .. })
    }
}

/// Finite union of block templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSubshift {
    templates: Vec<BlockTemplate>,
}

impl TemplateSubshift {
    pub fn new(templates: Vec<BlockTemplate>) -> Self {
        TemplateSubshift { templates }
    }

    /// One template per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let templates = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(BlockTemplate::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(templates))
    }

    pub fn render(&self) -> String {
        self.templates.iter().map(|t| format!("{t}\n")).collect()
    }

    pub fn templates(&self) -> &[BlockTemplate] {
        &self.templates
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.templates.iter().flat_map(|t| t.letters()).collect()
    }

    pub fn member(&self, w: &[Letter]) -> bool {
        if w.is_empty() {
            return !self.is_empty();
        }
        self.templates.iter().any(|t| t.any_realization(&t.caps(w.len(), 1, 0), |p| p.contains_factor(w)))
    }

    /// Length-`n` factors of points in the closure.
    pub fn language_n(&self, n: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for t in &self.templates {
            t.any_realization(&t.caps(n, 1, 0), |p| {
                out.extend(p.factors(n));
                false
            });
        }
        out
    }

    /// The set of non-isolated points, normalized and deduplicated.
    pub fn cb_derivative(&self) -> TemplateSubshift {
        let set: BTreeSet<BlockTemplate> = self.templates.iter().flat_map(|t| t.derivative()).collect();
        TemplateSubshift::new(set.into_iter().collect())
    }

    /// Number of derivatives needed to reach the empty set.
    pub fn cb_rank(&self) -> usize {
        let mut cur = self.clone();
        let mut rank = 0;
        while !cur.is_empty() {
            cur = cur.cb_derivative();
            rank += 1;
        }
        rank
    }

    /// Some point visits `[C]` and then, `j >= min_j` steps later, `[D]`.
    pub fn decide_halting(&self, from: &ClopenSet, to: &ClopenSet, min_j: u64) -> Reachability {
        let span = from.width() + to.width() + min_j as usize;
        for t in &self.templates {
            let mut found = None;
            t.any_realization(&t.caps(span, 3, 0), |p| {
                found = halting_witness(p, from, to, min_j, None);
                found.is_some()
            });
            if let Some(r) = found {
                return r;
            }
        }
        Reachability::Unreachable
    }

    /// As `decide_halting` with `j ≡ residue (mod modulus)`.
    pub fn decide_modular(
        &self,
        from: &ClopenSet,
        to: &ClopenSet,
        residue: u64,
        modulus: u64,
        min_j: u64,
    ) -> Result<Reachability> {
        if modulus == 0 || residue >= modulus {
            return Err(Error::Invalid("need 0 <= residue < modulus".into()));
        }
        let span = from.width() + to.width() + min_j as usize;
        for t in &self.templates {
            let mut found = None;
            t.any_realization(&t.caps(span, 3, 3 * modulus as usize), |p| {
                found = halting_witness(p, from, to, min_j, Some((residue, modulus)));
                found.is_some()
            });
            if let Some(r) = found {
                return Ok(r);
            }
        }
        Ok(Reachability::Unreachable)
    }

    /// Some point travels from `[C]` to `[D]` in `j` steps, every
    /// intermediate position lying in `[E]` except exactly `count` of them,
    /// which lie in `[F]`.
    pub fn decide_counting(
        &self,
        from: &ClopenSet,
        to: &ClopenSet,
        along: &ClopenSet,
        marked: &ClopenSet,
        count: u64,
    ) -> Reachability {
        let span = from.width() + to.width() + along.width().max(marked.width());
        for t in &self.templates {
            let mut found = None;
            t.any_realization(&t.caps(span, 4, count as usize), |p| {
                found = counting_witness(p, from, to, along, marked, count);
                found.is_some()
            });
            if let Some(r) = found {
                return r;
            }
        }
        Reachability::Unreachable
    }

    /// Some point contains the words in this order at strictly increasing positions.
    pub fn decide_tuple(&self, tuple: &[Word]) -> Result<bool> {
        if tuple.is_empty() || tuple.iter().any(|w| w.is_empty()) {
            return Err(Error::Invalid("tuple needs nonempty words".into()));
        }
        let span: usize = tuple.iter().map(|w| w.len()).sum();
        Ok(self
            .templates
            .iter()
            .any(|t| t.any_realization(&t.caps(span, tuple.len(), 1), |p| tuple_in_order(p, tuple))))
    }
}

/// Occurrences `i` of `from` and `i'` of `to` with `i' - i >= min_j`, and
/// with a prescribed residue when given.
fn halting_witness(
    p: &EventuallyPeriodicPoint,
    from: &ClopenSet,
    to: &ClopenSet,
    min_j: u64,
    modular: Option<(u64, u64)>,
) -> Option<Reachability> {
    let froms: Vec<SemilinearSet> = from.words().iter().map(|c| p.occurrences(c)).collect();
    let tos: Vec<SemilinearSet> = to.words().iter().map(|d| p.occurrences(d)).collect();
    let min_j = min_j as i64;
    for oc in &froms {
        for od in &tos {
            for pc in oc.progressions() {
                for pd in od.progressions() {
                    let hit = match modular {
                        None => gap_pair(pc.offset, pc.step, pd.offset, pd.step, min_j),
                        Some((k, m)) => residue_pair(pc.offset, pc.step, pd.offset, pd.step, min_j, k as i64, m as i64),
                    };
                    if let Some((i, i2)) = hit {
                        return Some(Reachability::Reachable { point: p.clone(), from: i, j: (i2 - i) as u64 });
                    }
                }
            }
        }
    }
    None
}

fn gap_pair(oc: i64, sc: i64, od: i64, sd: i64, min_j: i64) -> Option<(i64, i64)> {
    if sc < 0 {
        let target = od - min_j;
        let q = -sc;
        let n = if oc > target { (oc - target + q - 1) / q } else { 0 };
        Some((oc - n * q, od))
    } else if sd > 0 {
        let need = oc + min_j;
        let n = if od < need { (need - od + sd - 1) / sd } else { 0 };
        Some((oc, od + n * sd))
    } else {
        (od - oc >= min_j).then_some((oc, od))
    }
}

fn residue_pair(oc: i64, sc: i64, od: i64, sd: i64, min_j: i64, k: i64, m: i64) -> Option<(i64, i64)> {
    let rounds = |s: i64| if s == 0 { 1 } else { m };
    for n1 in 0..rounds(sc) {
        for n2 in 0..rounds(sd) {
            let i = oc + n1 * sc;
            let i2 = od + n2 * sd;
            let d = i2 - i;
            if (d - k).rem_euclid(m) != 0 {
                continue;
            }
            if d >= min_j {
                return Some((i, i2));
            }
            let short = min_j - d;
            if sd > 0 {
                let t = (short + m * sd - 1) / (m * sd);
                return Some((i, i2 + t * m * sd));
            }
            if sc < 0 {
                let t = (short + m * -sc - 1) / (m * -sc);
                return Some((i - t * m * -sc, i2));
            }
        }
    }
    None
}

fn counting_witness(
    p: &EventuallyPeriodicPoint,
    from: &ClopenSet,
    to: &ClopenSet,
    along: &ClopenSet,
    marked: &ClopenSet,
    count: u64,
) -> Option<Reachability> {
    let k = count as i64;
    let widths = (from.width() + to.width() + along.width() + marked.width()) as i64;
    let lo = p.origin() - (k + 3) * p.left_period().len() as i64 - widths;
    let hi = p.right_start() + (k + 3) * p.right_period().len() as i64 + widths;
    let win = p.window(lo, hi + widths);
    let at = |c: &ClopenSet, i: i64| c.holds_in(&win, (i - lo) as usize);
    for i in lo..=hi {
        if !at(from, i) {
            continue;
        }
        let (mut forced, mut free) = (0i64, 0i64);
        for q in i..=hi {
            if at(to, q) && forced <= k && k <= forced + free {
                return Some(Reachability::Reachable { point: p.clone(), from: i, j: (q - i) as u64 });
            }
            if q == i {
                continue;
            }
            // q is intermediate for every later target.
            match (at(along, q), at(marked, q)) {
                (false, false) => break,
                (false, true) => forced += 1,
                (true, true) => free += 1,
                (true, false) => {}
            }
            if forced > k {
                break;
            }
        }
    }
    None
}

fn tuple_in_order(p: &EventuallyPeriodicPoint, tuple: &[Word]) -> bool {
    // None stands for "as far left as needed".
    let mut cur: Option<i64> = None;
    for w in tuple {
        let occ = p.occurrences(w);
        if occ.is_empty() {
            return false;
        }
        cur = match cur {
            None if occ.unbounded_below() => None,
            None => occ.min(),
            Some(c) => match occ.least_above(c) {
                Some(x) => Some(x),
                None => return false,
            },
        };
    }
    true
}
