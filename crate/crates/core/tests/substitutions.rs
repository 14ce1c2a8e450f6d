mod common;

use std::collections::BTreeSet;

use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use quasiminimal::automata::Regex;
use quasiminimal::ruler::ruler_value;
use quasiminimal::substitution::*;
use quasiminimal::word::{factors, Alphabet, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn doubling() -> Substitution {
    Substitution::parse("0 -> 00\n1 -> 101\n").unwrap()
}

/// Zero runs between consecutive 1s.
fn gaps(w: &[u32]) -> Vec<usize> {
    let ones: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 1).collect();
    ones.windows(2).map(|p| p[1] - p[0] - 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn long_symbols_match_length_growth(seed in any::<u64>()) {
        let tau = random_substitution(&mut ChaCha8Rng::seed_from_u64(seed), 5, 4);
        let k = tau.alphabet().len();
        // Bounded letters are constant from step k on; a growing letter sits
        // over a cycle of length at most k and gains a symbol every turn.
        let rows = iterate_lengths(&tau, 2 * k);
        let want: BTreeSet<u32> = tau.alphabet().letters().iter().enumerate()
            .filter(|&(i, _)| rows[2 * k][i] > rows[k][i]).map(|(_, &a)| a).collect();
        prop_assert_eq!(tau.long_symbols(), want);
    }
}

#[test]
fn growth_can_stall_between_steps() {
    let tau = Substitution::parse("0 -> 3\n1 -> 0\n2 -> 02\n3 -> 41\n4 -> 4").unwrap();
    let rows = iterate_lengths(&tau, 10);
    assert_eq!(rows[5][0], rows[6][0]);
    assert!(rows[10][0] > rows[5][0]);
    assert!(tau.long_symbols().contains(&0));
}

proptest! {
    #[test]
    fn iterate_lengths_match(seed in any::<u64>()) {
        let tau = random_substitution(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        let rows = iterate_lengths(&tau, 20);
        for (i, &a) in tau.alphabet().letters().iter().enumerate() {
            for n in 0..=20u64 {
                prop_assert_eq!(tau.iterate_length(a, n).unwrap(), BigUint::from(rows[n as usize][i]));
                if rows[n as usize][i] < 5000 {
                    prop_assert_eq!(tau.iterate(a, n).unwrap().len() as u128, rows[n as usize][i]);
                }
            }
        }
    }

    #[test]
    fn regular_intersection_matches_iteration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_substitution(&mut rng, 3, 3);
        let k = tau.alphabet().len() as u32;
        let nfa = random_regex(&mut rng, k, 3).compile(tau.alphabet()).unwrap();
        let mut runner = IterateRunner::new(&tau, &nfa);
        for &a in tau.alphabet().letters() {
            let cert = decide_regular_intersection(&tau, a, &nfa).unwrap();
            let horizon = cert.t + cert.p;
            let first = (0..horizon).find(|&n| runner.accepts(n, a));
            match cert.verdict {
                Verdict::Yes(n) => prop_assert_eq!(first, Some(n)),
                Verdict::No => {
                    prop_assert_eq!(first, None);
                    // Stable under doubling the horizon.
                    prop_assert!((horizon..2 * horizon + 2).all(|n| !runner.accepts(n, a)));
                }
            }
            for &b in tau.alphabet().letters() {
                prop_assert_eq!(runner.relation(cert.t, b), runner.relation(cert.t + cert.p, b));
            }
        }
    }

    #[test]
    fn xtau_factors_grow_with_depth(seed in any::<u64>(), n in 1usize..4) {
        let tau = random_substitution(&mut ChaCha8Rng::seed_from_u64(seed), 3, 3);
        let mut prev = BTreeSet::new();
        for depth in 1..=4 {
            let Ok(cur) = tau.xtau_factors(n, depth) else { break };
            prop_assert!(prev.is_subset(&cur));
            prev = cur;
        }
    }

    #[test]
    fn file_format_round_trips(seed in any::<u64>()) {
        let tau = random_substitution(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        prop_assert_eq!(Substitution::parse(&tau.render()).unwrap(), tau);
    }
}

#[test]
fn gap_structure() {
    let tau = doubling();
    for n in 1..=10u64 {
        let w = tau.iterate(1, n).unwrap();
        let want: Vec<usize> = (0..(1u64 << n) - 1).map(|i| 1usize << ruler_value(i)).collect();
        assert_eq!(gaps(&w), want, "n={n}");
    }
}

#[test]
fn subsystem_counts() {
    let shown = [1u32, 2, 7, 80, 4381, 1069742];
    for (k, &b) in shown.iter().enumerate() {
        assert_eq!(subsystem_count_b(k as u32), BigUint::from(b));
    }
    for k in 0..=3u32 {
        let brute = brute_force_subsystems(k).unwrap();
        assert_eq!(BigUint::from(brute.len()), subsystem_count_b(k));
        // Pairs stay inside the chosen letters.
        assert!(brute.iter().all(|(set, pairs)| pairs.iter().all(|(i, j)| set.contains(i) && set.contains(j))));
    }
    assert_eq!(brute_force_subsystems(2).unwrap().len(), 7);
    for k in 0..=8u32 {
        assert!(subsystem_count_b(k) >= BigUint::from(2u32).pow(k * k.saturating_sub(1)));
    }
}

#[test]
fn quasiminimal_bounds() {
    assert_eq!(quasiminimal_bound(2, 1).unwrap(), BigUint::from(16u32));
    assert_eq!(quasiminimal_bound(3, 1).unwrap(), BigUint::from(512u32));
    assert_eq!(quasiminimal_bound(2, 2).unwrap(), BigUint::from(256u32));
}

#[test]
fn model_checking_examples() {
    let tau = doubling();
    let a = tau.alphabet().clone();
    let l = |s: &str| Regex::parse(s, &a).unwrap().compile(&a).unwrap();
    let yes = decide_regular_intersection(&tau, 1, &l("@*1001@*")).unwrap();
    assert_eq!(yes.verdict, Verdict::Yes(2));
    assert!(factors(&tau.iterate(1, 2).unwrap(), 4).contains(&vec![1, 0, 0, 1]));
    assert_eq!(decide_regular_intersection(&tau, 1, &l("@*11@*")).unwrap().verdict, Verdict::No);
    assert!((0..=8).all(|n| !factors(&tau.iterate(1, n).unwrap(), 2).contains(&vec![1, 1])));

    assert!(!decide_language_intersection(&tau, &l("11")).unwrap().nonempty());
    assert!(decide_language_intersection(&tau, &l("1001")).unwrap().nonempty());
    let drift = Substitution::parse("0 -> 00\n1 -> 10").unwrap();
    let da = drift.alphabet().clone();
    let ten = Regex::parse("10", &da).unwrap().compile(&da).unwrap();
    assert!(decide_language_intersection(&drift, &ten).unwrap().nonempty());

    let fixed = Substitution::new(Alphabet::range(1), vec![vec![0]]).unwrap();
    let single = Regex::parse("0", fixed.alphabet()).unwrap().compile(fixed.alphabet()).unwrap();
    assert_eq!(decide_regular_intersection(&fixed, 0, &single).unwrap().verdict, Verdict::Yes(0));
}

#[test]
fn growth_and_syndeticity_examples() {
    assert_eq!(doubling().syndetic_long(1000), Syndeticity::Syndetic(1));
    let pump = Substitution::parse("0 -> 0\n1 -> 010").unwrap();
    assert!(matches!(pump.syndetic_long(1000), Syndeticity::NonSyndetic { .. }));
    assert_eq!(pump.long_symbols(), [1].into());
    let want: BTreeSet<Word> = [vec![0, 0], vec![0, 1], vec![1, 0]].into();
    assert_eq!(pump.xtau_factors(2, 3).unwrap(), want);
    let f = doubling().xtau_factors(3, 4).unwrap();
    for w in ["101", "010", "000", "100", "001"] {
        assert!(f.contains(&w.chars().map(|c| c.to_digit(10).unwrap()).collect::<Word>()));
    }
    assert!(!f.contains(&vec![1, 1, 1]));
}
