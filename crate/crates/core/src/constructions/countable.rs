//! Countable constructions `x = ∞0.τ(0)τ(1)τ(2)...` where nonzero symbols
//! drift apart, so every limit point has at most one nonzero symbol.
//!
//! Machine 0 cannot be observed by the modular and counting constructions
//! (no prime is attached to it, and `(0^i 1)^0` is empty), so their solvers
//! and verifiers are meant for `j >= 1`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{dovetail, HaltingOracle, Window};
use crate::word::{Letter, Word};
use crate::{Error, Result};

/// Longest prefix of `x` that is ever materialized.
pub const MATERIALIZE_CAP: usize = 1 << 24;

pub trait CountableConstruction {
    /// `τ(i)`; its first letter is nonzero.
    fn image(&self, i: u64) -> Word;

    /// Lower bound, nondecreasing in `i`, on the distance between a nonzero
    /// symbol of `τ(i)` and the previous nonzero symbol of `x`.
    fn spacing(&self, i: u64) -> u64;

    /// Whether the symbol occurs infinitely often, i.e. `∞0 s 0∞` is a limit point.
    fn recurrent(&self, s: Letter) -> bool;

    /// `x[-pad, len)`, with the left tail of zeros.
    fn window(&self, pad: usize, len: usize) -> Result<Window> {
        if len > MATERIALIZE_CAP {
            return Err(Error::Budget(format!("window of length {len} is too long")));
        }
        let mut word = vec![0; pad];
        let mut i = 0;
        while word.len() < pad + len {
            word.extend(self.image(i));
            i += 1;
        }
        word.truncate(pad + len);
        Ok(Window { word, origin: pad })
    }

    /// Position after which nonzero symbols are more than `n` apart.
    fn m_bound(&self, n: u64) -> u64 {
        let mut pos = 0;
        let mut i = 0;
        while self.spacing(i) <= n {
            pos += self.image(i).len() as u64;
            i += 1;
        }
        pos
    }
}

/// Decides `w ⊏ X`: a word with two nonzero symbols at distance `d` only
/// occurs before position `m(d)`; a word with one nonzero symbol occurs iff
/// the symbol recurs; a zero word always occurs.
pub fn countable_member(c: &dyn CountableConstruction, w: &[Letter]) -> Result<bool> {
    let nonzero: Vec<usize> = (0..w.len()).filter(|&i| w[i] != 0).collect();
    match nonzero.len() {
        0 => Ok(true),
        1 => Ok(c.recurrent(w[nonzero[0]])),
        _ => {
            let d = nonzero.windows(2).map(|p| p[1] - p[0]).min().expect("two entries") as u64;
            let m = c.m_bound(d) as usize;
            let win = c.window(w.len(), m + 2 * w.len())?;
            Ok(win.word.windows(w.len()).any(|f| f == w))
        }
    }
}

/// Lengths of the zero runs between consecutive nonzero symbols of a word.
pub fn zero_runs(w: &[Letter]) -> Vec<usize> {
    let ones: Vec<usize> = (0..w.len()).filter(|&i| w[i] != 0).collect();
    ones.windows(2).map(|p| p[1] - p[0] - 1).collect()
}

/// The `j`-th odd prime, `odd_prime(1) = 3`.
pub fn odd_prime(j: u64) -> u64 {
    assert!(j >= 1, "odd primes are numbered from 1");
    let mut count = 0;
    let mut n = 1;
    loop {
        n += 2;
        if (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            count += 1;
            if count == j {
                return n;
            }
        }
    }
}

/// `τ(i) = 1 0^(2^i)`, or `1 0^(p_j 2^i)` once machine `j = h(i)` has
/// halted before step `i`.
pub struct ModularSimple {
    pub oracle: HaltingOracle,
}

impl ModularSimple {
    pub fn new(oracle: HaltingOracle) -> Self {
        ModularSimple { oracle }
    }

    fn halted(&self, i: u64) -> Option<u64> {
        let j = dovetail(i);
        (j >= 1 && self.oracle.halts_before(j, i)).then_some(j)
    }

    /// Zero run following the `i`-th 1.
    pub fn run(&self, i: u64) -> u64 {
        let base = 1u64 << i;
        self.halted(i).map_or(base, |j| odd_prime(j) * base)
    }

    pub fn solver(&self, j: u64) -> bool {
        self.oracle.eventually_halts(j)
    }

    /// Some zero run of the window between two 1s is divisible by `p_j`.
    pub fn verifier(&self, window: &Window, j: u64) -> bool {
        let p = odd_prime(j) as usize;
        zero_runs(&window.word[window.origin..]).iter().any(|&r| r % p == 0)
    }
}

impl CountableConstruction for ModularSimple {
    fn image(&self, i: u64) -> Word {
        let mut w = vec![1];
        w.resize(1 + self.run(i) as usize, 0);
        w
    }

    fn spacing(&self, i: u64) -> u64 {
        if i == 0 {
            0
        } else {
            1 + (1u64 << (i - 1))
        }
    }

    fn recurrent(&self, s: Letter) -> bool {
        s == 1
    }
}

/// `τ(i) = 2 0^i`, or `2 (0^i 1)^j 0^i` once machine `j = h(i)` has halted
/// before step `i`.
pub struct Counting {
    pub oracle: HaltingOracle,
}

impl Counting {
    pub fn new(oracle: HaltingOracle) -> Self {
        Counting { oracle }
    }

    pub fn solver(&self, j: u64) -> bool {
        self.oracle.eventually_halts(j)
    }

    /// Two consecutive 2s with only 0s and exactly `j` 1s between them.
    pub fn verifier(&self, window: &Window, j: usize) -> bool {
        let w = &window.word;
        let twos: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 2).collect();
        twos.windows(2).any(|p| w[p[0] + 1..p[1]].iter().filter(|&&l| l == 1).count() == j)
    }
}

impl CountableConstruction for Counting {
    fn image(&self, i: u64) -> Word {
        let j = dovetail(i);
        let reps = if self.oracle.halts_before(j, i) { j } else { 0 };
        let mut w = vec![2];
        for _ in 0..reps {
            w.extend(std::iter::repeat(0).take(i as usize));
            w.push(1);
        }
        w.extend(std::iter::repeat(0).take(i as usize));
        w
    }

    fn spacing(&self, i: u64) -> u64 {
        i
    }

    fn recurrent(&self, s: Letter) -> bool {
        match s {
            2 => true,
            1 => self.oracle.entries().any(|(j, _)| j >= 1 && self.oracle.eventually_halts(j)),
            _ => false,
        }
    }
}

/// One level of the primorial construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimorialLevel {
    pub i: u64,
    /// `p(f(i))`.
    pub prime: u64,
    /// `p(f(i))#`.
    pub primorial: BigUint,
    /// `k_i` when machine `h(i)` has halted before step `i`.
    pub k: Option<u64>,
    /// Distance from the 1 starting `τ(i)` to the next 1.
    pub distance: BigUint,
}

/// Distances `p(f(i))#` between consecutive 1s, with a correction making
/// the distance `≡ 1 (mod p(f(h(i))))` once machine `h(i)` has halted.
pub struct Primorial {
    pub oracle: HaltingOracle,
    pub levels: Vec<PrimorialLevel>,
    /// Growth condition on `f` dropped; small primes for scan tests.
    pub toy: bool,
}

/// Conforming levels that fit in memory: `p(f(2)) >= 29^29` has no
/// computable primorial.
pub const PRIMORIAL_MAX_LEVELS: usize = 2;

fn primorial(n: u64) -> BigUint {
    let mut acc = BigUint::from(2u32);
    let mut j = 1;
    loop {
        let p = odd_prime(j);
        if p > n {
            return acc;
        }
        acc *= p;
        j += 1;
    }
}

impl Primorial {
    /// `f(0) = 1` and `f(i)` the least index with `p(f(i)) >= p(f(i-1))^p(f(i-1))`;
    /// in toy mode `f(i) = i + 1`.
    pub fn new(oracle: HaltingOracle, levels: usize, toy: bool) -> Result<Self> {
        if !toy && levels > PRIMORIAL_MAX_LEVELS {
            return Err(Error::Budget(format!("only {PRIMORIAL_MAX_LEVELS} conforming levels are computable")));
        }
        let mut primes: Vec<u64> = Vec::with_capacity(levels);
        for i in 0..levels {
            let p = if toy || i == 0 {
                odd_prime(i as u64 + 1)
            } else {
                let prev = primes[i - 1];
                let need = prev.checked_pow(prev as u32).ok_or_else(|| Error::Budget("prime bound overflow".into()))?;
                (1..).map(odd_prime).find(|&p| p >= need).expect("primes are unbounded")
            };
            primes.push(p);
        }
        let mut out = Vec::with_capacity(levels);
        for i in 0..levels as u64 {
            let prime = primes[i as usize];
            let pr = primorial(prime);
            let j = dovetail(i);
            let (k, distance) = if oracle.halts_before(j, i) {
                let q = primes[j as usize];
                let quotient = &pr / q;
                let r = (&quotient % q).to_u64().expect("small");
                let k = (1..q).find(|k| (r * k) % q == 1).ok_or_else(|| Error::Invalid("no inverse".into()))?;
                (Some(k), &pr + &quotient * k)
            } else {
                (None, pr.clone())
            };
            out.push(PrimorialLevel { i, prime, primorial: pr, k, distance });
        }
        Ok(Primorial { oracle, levels: out, toy })
    }

    /// `k_i` satisfies its congruence and is the unique solution in `(0, q)`.
    pub fn check_k(&self) -> bool {
        self.levels.iter().all(|l| match l.k {
            None => true,
            Some(k) => {
                let q = self.levels[dovetail(l.i) as usize].prime;
                let r = (&l.primorial / q % q).to_u64().expect("small");
                (1..q).filter(|c| (r * c) % q == 1).collect::<Vec<_>>() == vec![k]
            }
        })
    }

    /// `2j p(f(j-1))# <= p(f(j-1))^p(f(j-1)) <= p(f(j))` for every computed `j >= 1`.
    pub fn check_growth(&self) -> bool {
        (1..self.levels.len()).all(|j| {
            let prev = &self.levels[j - 1];
            let power = BigUint::from(prev.prime).pow(prev.prime as u32);
            BigUint::from(2 * j as u64) * &prev.primorial <= power && power <= BigUint::from(self.levels[j].prime)
        })
    }

    /// Non-halting distances `ℓ_i` with `i >= j` are divisible by `p(f(j))`.
    pub fn check_divisibility(&self) -> bool {
        self.levels.iter().enumerate().all(|(j, lj)| {
            self.levels[j..].iter().filter(|l| l.k.is_none()).all(|l| (&l.distance % lj.prime).is_zero())
        })
    }

    /// Two 1s among the computed ones at distance `≡ 1 (mod p(f(j)))`.
    pub fn symbolic_solver(&self, j: usize) -> bool {
        let q = self.levels[j].prime;
        let n = self.levels.len();
        (0..n).any(|a| {
            let mut sum = BigUint::zero();
            (a..n).any(|b| {
                sum += &self.levels[b].distance;
                (&sum % q).is_one()
            })
        })
    }

    /// Whether machine `h(i) = j` halted before some computed step `i`.
    pub fn halted_in_range(&self, j: usize) -> bool {
        self.levels.iter().any(|l| dovetail(l.i) == j as u64 && l.k.is_some())
    }

    /// `τ(0)...τ(n-1)` followed by the next 1 (toy mode only).
    pub fn materialize(&self) -> Result<Word> {
        let total: BigUint = self.levels.iter().map(|l| &l.distance).sum();
        let len = total.to_usize().filter(|&n| n < MATERIALIZE_CAP).ok_or_else(|| Error::Budget("too long".into()))?;
        let mut w = Vec::with_capacity(len + 1);
        for l in &self.levels {
            w.push(1);
            w.resize(w.len() + l.distance.to_usize().expect("bounded") - 1, 0);
        }
        w.push(1);
        Ok(w)
    }

    /// Scans a materialized word for two 1s at distance `≡ 1 (mod p(f(j)))`.
    pub fn scan_solver(word: &[Letter], prime: u64) -> bool {
        let ones: Vec<usize> = (0..word.len()).filter(|&i| word[i] == 1).collect();
        ones.iter().enumerate().any(|(a, &x)| ones[a + 1..].iter().any(|&y| ((y - x) as u64).mod_floor(&prime) == 1))
    }
}
