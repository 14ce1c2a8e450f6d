//! The ruler sequence `0 1 0 2 0 1 0 3 ...`, its factors and maximal words,
//! and the two-sided computable point built by alternating extensions.

use crate::word::{Letter, Progression, SemilinearSet, Word};
use crate::{Error, Result};

/// Largest top symbol for which `is_factor` scans the sequence directly.
const SCAN_LIMIT: Letter = 20;

/// Largest top symbol whose maximal word is materialized.
pub const MAX_EXTENSION_TOP: Letter = 24;

/// 2-adic valuation of `i + 1`.
pub fn ruler_value(i: u64) -> Letter {
    (i + 1).trailing_zeros()
}

/// Coordinates `from..to` of the one-sided sequence.
pub fn ruler_window(from: u64, to: u64) -> Word {
    (from..to).map(ruler_value).collect()
}

/// `{n 2^(j+1) + 2^j - 1 : n >= 0}`, the positions holding `j`.
pub fn positions(j: u32) -> SemilinearSet {
    SemilinearSet::new(vec![Progression { offset: (1i64 << j) - 1, step: 1i64 << (j + 1) }])
}

/// The maximal word with top symbol `k`: length `2^(k+1) - 1`, `k` in the middle.
pub fn maximal_word(k: Letter) -> Word {
    ruler_window(0, (1u64 << (k + 1)) - 1)
}

/// Whether `w` occurs in the ruler sequence.
pub fn is_factor(w: &[Letter]) -> bool {
    let Some(&top) = w.iter().max() else { return true };
    if top <= SCAN_LIMIT {
        let span = (1u64 << (top + 2)) + w.len() as u64;
        let n = w.len() as u64;
        (0..span - n).any(|s| w.iter().enumerate().all(|(t, &l)| ruler_value(s + t as u64) == l))
    } else {
        is_factor_by_halving(w)
    }
}

// Every even coordinate holds 0 and φ(2n+1) = φ(n) + 1, so a factor splits
// into zeros and a shifted factor of half the length.
fn is_factor_by_halving(w: &[Letter]) -> bool {
    if w.len() <= 1 {
        return true;
    }
    (0..2).any(|parity| {
        let zeros_ok = w.iter().skip(parity).step_by(2).all(|&l| l == 0);
        let rest: Option<Word> = w.iter().skip(1 - parity).step_by(2).map(|&l| l.checked_sub(1)).collect();
        zeros_ok && rest.is_some_and(|r| is_factor_by_halving(&r))
    })
}

/// Extends `w` to the unique maximal word with the same top symbol.
/// Returns the word and the offset of `w` inside it.
pub fn deterministic_extension_at(w: &[Letter]) -> Result<(Word, usize)> {
    let Some(&top) = w.iter().max() else {
        return Err(Error::Invalid("cannot extend the empty word".into()));
    };
    if !is_factor(w) {
        return Err(Error::NotAFactor(crate::word::format_decimal(w)));
    }
    if top > MAX_EXTENSION_TOP {
        return Err(Error::Budget(format!("maximal word for symbol {top} is too long")));
    }
    // A factor carries its top symbol exactly once.
    let at = w.iter().position(|&l| l == top).expect("top symbol present");
    let mid = (1usize << top) - 1;
    let u = maximal_word(top);
    let offset = mid - at;
    debug_assert_eq!(&u[offset..offset + w.len()], w);
    Ok((u, offset))
}

pub fn deterministic_extension(w: &[Letter]) -> Result<Word> {
    deterministic_extension_at(w).map(|(u, _)| u)
}

/// Writes `left` and/or `right` next to the deterministic extension of `w`
/// and extends again. With top symbol `k` the admissible choices are
/// `k+1` on one side and anything above `k+1` on the other.
pub fn extend(w: &[Letter], left: Option<Letter>, right: Option<Letter>) -> Result<Word> {
    let u = deterministic_extension(w)?;
    let mut x: Word = left.into_iter().collect();
    x.extend(&u);
    x.extend(right);
    deterministic_extension(&x)
}

/// `ψ[-radius, radius]` for the point grown from `0` at coordinate 0 by
/// alternately adding the smallest missing symbol on the right and on the
/// left, extending deterministically after each step.
pub fn psi_window(radius: u64) -> Word {
    let r = radius as i64;
    let mut word: Word = vec![0];
    let mut start: i64 = 0;
    let mut right_turn = true;
    while start > -r || start + word.len() as i64 <= r {
        let missing = (0..).find(|l| !word.contains(l)).expect("some symbol is missing");
        if right_turn {
            word.push(missing);
        } else {
            word.insert(0, missing);
            start -= 1;
        }
        let (u, off) = deterministic_extension_at(&word).expect("psi stays inside the ruler language");
        start -= off as i64;
        word = u;
        right_turn = !right_turn;
    }
    let from = (-r - start) as usize;
    word[from..from + 2 * radius as usize + 1].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(ruler_value(0), 0);
        assert_eq!(ruler_value(7), 3);
        assert_eq!(ruler_value(15), 4);
        assert_eq!(ruler_window(0, 8), vec![0, 1, 0, 2, 0, 1, 0, 3]);
    }

    #[test]
    fn position_sets() {
        let p0 = positions(0);
        assert_eq!(p0.progressions(), &[Progression { offset: 0, step: 2 }]);
        for j in 0..4 {
            let p = positions(j);
            for i in 0..100u64 {
                assert_eq!(p.contains(i as i64), ruler_value(i) == j);
            }
        }
        assert!(positions(3).contains(7) && positions(3).contains(23) && positions(3).contains(39));
    }

    #[test]
    fn maximal_words() {
        assert_eq!(maximal_word(0), vec![0]);
        assert_eq!(maximal_word(1), vec![0, 1, 0]);
        assert_eq!(maximal_word(2), vec![0, 1, 0, 2, 0, 1, 0]);
        assert_eq!(deterministic_extension(&[3]).unwrap(), maximal_word(3));
        assert_eq!(deterministic_extension(&[0]).unwrap(), vec![0]);
    }

    #[test]
    fn factor_checks() {
        assert!(!is_factor(&[4, 5]));
        assert!(is_factor(&[0, 1, 0, 2, 0, 1, 0]));
        assert!(is_factor(&[0, 3, 0]));
        assert!(!is_factor(&[0, 0]));
        assert!(matches!(deterministic_extension(&[1, 1]), Err(Error::NotAFactor(_))));
    }

    #[test]
    fn halving_agrees_with_scan() {
        for len in 1..=6usize {
            let mut w = vec![0u32; len];
            loop {
                assert_eq!(is_factor(&w), is_factor_by_halving(&w), "{w:?}");
                let mut i = 0;
                while i < len && w[i] == 4 {
                    w[i] = 0;
                    i += 1;
                }
                if i == len {
                    break;
                }
                w[i] += 1;
            }
        }
        let mut big = maximal_word(3);
        big[7] = 30;
        assert!(is_factor(&big));
    }

    #[test]
    fn psi_prefix_consistency() {
        let small = psi_window(5);
        let large = psi_window(9);
        assert_eq!(&large[4..15], &small[..]);
    }
}
