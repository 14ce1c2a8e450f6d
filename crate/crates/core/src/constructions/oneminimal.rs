//! The recursive subshift over `{0,1,2,3}` generated by the points
//! `∞0.1^i 2^(i+s) 3∞` (machine `i` halts after `s` steps) and `∞0.1^i 2∞`
//! (machine `i` never halts), `i >= 1`.

use super::HaltingOracle;
use crate::template::{BlockTemplate, Part, TemplateSubshift};
use crate::word::{EventuallyPeriodicPoint, Letter, Word};

pub fn point(oracle: &HaltingOracle, i: u64) -> EventuallyPeriodicPoint {
    assert!(i >= 1, "machines are numbered from 1");
    let mut center: Word = vec![1; i as usize];
    let right = match oracle.halting_step(i) {
        Some(s) => {
            center.extend(std::iter::repeat(2).take((i + s) as usize));
            vec![3]
        }
        None => vec![2],
    };
    EventuallyPeriodicPoint::new(vec![0], center, right, 0).expect("nonempty tails")
}

/// Run lengths of `0^a 1^b 2^c 3^d`, or `None` if `w` is not of that shape.
fn runs(w: &[Letter]) -> Option<[u64; 4]> {
    let mut counts = [0u64; 4];
    let mut prev = 0;
    for &l in w {
        if l > 3 || l < prev {
            return None;
        }
        counts[l as usize] += 1;
        prev = l;
    }
    Some(counts)
}

/// Decides whether `w` is a factor of some point of the subshift.
pub fn member(oracle: &HaltingOracle, w: &[Letter]) -> bool {
    let Some([a, b, c, d]) = runs(w) else { return false };
    let present: Vec<usize> = [a, b, c, d].iter().enumerate().filter(|(_, &n)| n > 0).map(|(k, _)| k).collect();
    let (Some(&lo), Some(&hi)) = (present.first(), present.last()) else { return true };
    if hi - lo + 1 != present.len() {
        return false;
    }
    let halting = || oracle.entries().filter_map(|(i, _)| oracle.halting_step(i).map(|s| (i, s))).filter(|&(i, _)| i >= 1);
    match (lo, hi) {
        _ if lo == hi => true,
        (0, 1) | (1, 2) => true,
        (2, 3) => halting().any(|(i, s)| i + s >= c),
        // The run of 1s is complete, so it names the machine.
        (0, 2) => match oracle.halting_step(b) {
            Some(s) => c <= b + s,
            None => true,
        },
        (0, 3) => oracle.halting_step(b).is_some_and(|s| c == b + s),
        (1, 3) => halting().any(|(i, s)| i >= b && i + s == c),
        _ => unreachable!("runs are contiguous"),
    }
}

/// Whether machine `i` halts, read off the table.
pub fn solver(oracle: &HaltingOracle, i: u64) -> bool {
    oracle.eventually_halts(i)
}

/// A transition from `[0 1^i 2]` to `[3]` in the generating point `x_i`,
/// as (start, distance).
pub fn verifier(oracle: &HaltingOracle, i: u64) -> Option<(i64, u64)> {
    let x = point(oracle, i);
    let mut pattern = vec![0];
    pattern.extend(std::iter::repeat(1).take(i as usize));
    pattern.push(2);
    let from = x.occurrences(&pattern).min()?;
    let to = x.occurrences(&[3]).least_above(from)?;
    Some((from, (to - from) as u64))
}

/// The envelope `∞0 1^e 2∞` plus one template per halting machine.
pub fn templates(oracle: &HaltingOracle) -> TemplateSubshift {
    let mut ts = vec![BlockTemplate::new(vec![0], vec![Part::Block(vec![1])], vec![2]).expect("valid")];
    for (i, _) in oracle.entries() {
        if let (true, Some(s)) = (i >= 1, oracle.halting_step(i)) {
            let mut c: Word = vec![1; i as usize];
            c.extend(std::iter::repeat(2).take((i + s) as usize));
            ts.push(BlockTemplate::new(vec![0], vec![Part::Connector(c)], vec![3]).expect("valid"));
        }
    }
    TemplateSubshift::new(ts)
}
