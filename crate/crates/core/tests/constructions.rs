mod common;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use quasiminimal::constructions::countable::*;
use quasiminimal::constructions::dyck::*;
use quasiminimal::constructions::generic::TransitiveLt;
use quasiminimal::constructions::{dovetail, oneminimal, Halting, HaltingOracle};
use quasiminimal::ruler::psi_window;
use quasiminimal::word::{Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: [u64; 5] = [11, 23, 37, 41, 59];
const WINDOW: usize = 100_000;

fn table(seed: u64) -> HaltingOracle {
    HaltingOracle::random(seed, 1, 20, 6)
}

/// Least `i` with `h(i) = j` at which machine `j` has halted before step `i`.
fn first_preimage(o: &HaltingOracle, j: u64) -> Option<u64> {
    let s = o.halting_step(j)?;
    let mut i = (1u64 << j) - 1;
    while i <= s {
        i += 1 << (j + 1);
    }
    Some(i)
}

/// Start of `τ(i)` in the one-sided point.
fn start_of(c: &dyn CountableConstruction, i: u64) -> usize {
    let mut pos = 0;
    for t in 0..i {
        if pos > WINDOW {
            return usize::MAX;
        }
        pos += c.image(t).len();
    }
    pos
}

#[test]
fn oracle_file_round_trips() {
    for seed in SEEDS {
        let o = table(seed);
        assert_eq!(HaltingOracle::parse(&o.to_string()).unwrap(), o);
    }
    let o = HaltingOracle::parse("# t\n3 halts 4\n5 never\ndefault never\n").unwrap();
    assert_eq!(o.status(3), Halting::HaltsAt(4));
    assert!(!o.eventually_halts(9));
    assert!(HaltingOracle::parse("3 stops 4").is_err());
}

#[test]
fn dovetail_hits_every_machine_often() {
    for j in 0..6u64 {
        let hits = (0..4096).filter(|&i| dovetail(i) == j).count();
        assert_eq!(hits, 4096 >> (j + 1));
    }
}

#[test]
fn oneminimal_reduction() {
    for seed in SEEDS {
        let o = table(seed);
        for j in 1..=20 {
            assert_eq!(oneminimal::solver(&o, j), o.eventually_halts(j));
            let found = oneminimal::verifier(&o, j);
            assert_eq!(found.is_some(), o.eventually_halts(j), "seed {seed} machine {j}");
            if let Some((from, d)) = found {
                let x = oneminimal::point(&o, j);
                assert_eq!(x.at(from), 0);
                assert_eq!(x.at(from + d as i64), 3);
            }
        }
    }
}

/// Factors of the generating points, read straight off their windows.
fn oneminimal_brute(o: &HaltingOracle, w: &[Letter]) -> bool {
    let n = w.len() as i64;
    (1..=25u64).any(|i| {
        let x = oneminimal::point(o, i);
        let hi = i as i64 + o.halting_step(i).unwrap_or(0) as i64 + i as i64 + 2 * n + 2;
        let win = x.window(-2 * n, hi);
        w.is_empty() || win.windows(w.len()).any(|f| f == w)
    })
}

#[test]
fn oneminimal_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in SEEDS {
        let o = HaltingOracle::random(seed, 1, 6, 4);
        for i in 1..=8 {
            let x = oneminimal::point(&o, i);
            let win = x.window(-3, 2 * i as i64 + 8);
            for len in 1..=8 {
                for f in win.windows(len) {
                    assert!(oneminimal::member(&o, f), "{f:?}");
                }
            }
        }
        for _ in 0..500 {
            let len = rng.gen_range(1..=9);
            let w: Word = (0..len).map(|_| rng.gen_range(0..4)).collect();
            assert_eq!(oneminimal::member(&o, &w), oneminimal_brute(&o, &w), "{w:?}");
        }
    }
}

fn countable_reduction(c: &dyn CountableConstruction, o: &HaltingOracle, found: &dyn Fn(&quasiminimal::constructions::Window, u64) -> bool) {
    let win = c.window(0, WINDOW).unwrap();
    for j in 1..=20 {
        let hit = found(&win, j);
        if hit {
            assert!(o.eventually_halts(j), "spurious witness for {j}");
        }
        if let Some(i) = first_preimage(o, j) {
            if i < 40 && start_of(c, i + 1) < WINDOW {
                assert!(hit, "missed witness for {j}");
            }
        }
    }
}

#[test]
fn modular_reduction() {
    for seed in SEEDS {
        let o = table(seed);
        let m = ModularSimple::new(o.clone());
        for j in 1..=20 {
            assert_eq!(m.solver(j), o.eventually_halts(j));
        }
        countable_reduction(&m, &o, &|w, j| m.verifier(w, j));
    }
}

#[test]
fn counting_reduction() {
    for seed in SEEDS {
        let o = table(seed);
        let c = Counting::new(o.clone());
        for j in 1..=20 {
            assert_eq!(c.solver(j), o.eventually_halts(j));
        }
        countable_reduction(&c, &o, &|w, j| c.verifier(w, j as usize));
    }
}

/// Membership read off a long prefix: late nonzero symbols are far apart,
/// so a word with two of them must occur early; a lone symbol occurs iff it
/// keeps reappearing.
fn countable_brute(prefix: &[Letter], w: &[Letter]) -> bool {
    let n = w.len();
    let mut padded = vec![0; n];
    padded.extend_from_slice(prefix);
    if padded.windows(n).any(|f| f == w) {
        return true;
    }
    let nonzero: Vec<Letter> = w.iter().copied().filter(|&l| l != 0).collect();
    match nonzero[..] {
        [] => true,
        [s] => prefix[prefix.len() / 2..].contains(&s),
        _ => false,
    }
}

fn membership_consistency(c: &dyn CountableConstruction, letters: u32, rng: &mut ChaCha8Rng) {
    let prefix = c.window(0, 1 << 16).unwrap().word;
    let gaps: Vec<usize> = zero_runs(&prefix[prefix.len() / 2..]);
    assert!(gaps.iter().all(|&g| g > 12), "prefix too short for the brute-force oracle");
    for start in (0..2000).step_by(7) {
        for len in 1..=10 {
            assert!(countable_member(c, &prefix[start..start + len]).unwrap());
        }
    }
    let mut rejected = 0;
    for _ in 0..500 {
        let start = rng.gen_range(0..3000);
        let len = rng.gen_range(2..=10);
        let mut w = prefix[start..start + len].to_vec();
        // Nonzero letters close together are what the decision has to rule out.
        for _ in 0..2 {
            let at = rng.gen_range(0..len);
            w[at] = rng.gen_range(0..letters);
        }
        let brute = countable_brute(&prefix, &w);
        assert_eq!(countable_member(c, &w).unwrap(), brute, "{w:?}");
        rejected += usize::from(!brute);
    }
    assert!(rejected > 50);
}

#[test]
fn countable_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in SEEDS {
        let o = HaltingOracle::random(seed, 1, 8, 3);
        membership_consistency(&ModularSimple::new(o.clone()), 2, &mut rng);
        membership_consistency(&Counting::new(o), 3, &mut rng);
    }
}

/// First position after which nonzero symbols are more than `n` apart, measured.
fn measured_m(prefix: &[Letter], n: usize) -> usize {
    let nz: Vec<usize> = (0..prefix.len()).filter(|&i| prefix[i] != 0).collect();
    nz.windows(2).filter(|p| p[1] - p[0] <= n).map(|p| p[1]).max().unwrap_or(0)
}

#[test]
fn spacing_hypothesis() {
    for seed in SEEDS {
        let o = table(seed);
        let cs: [Box<dyn CountableConstruction>; 2] = [Box::new(ModularSimple::new(o.clone())), Box::new(Counting::new(o))];
        for c in &cs {
            let prefix = c.window(0, 1 << 17).unwrap().word;
            for n in 1..=40 {
                let bound = c.m_bound(n as u64) as usize;
                assert!(bound < prefix.len());
                assert!(measured_m(&prefix, n) <= bound, "n={n}");
            }
        }
    }
}

#[test]
fn transitive_reduction() {
    for seed in SEEDS {
        let o = table(seed);
        let radius = 128;
        let top = *psi_window(radius).iter().max().unwrap();
        let t = TransitiveLt::with_fibonacci(o.clone(), top).unwrap();
        let mw = t.window(radius).unwrap();
        assert!(mw.window.word.len() < WINDOW);
        let codes = (top as u64 + 1).ilog2() as u64 + 2;
        for j in 0..codes - 1 {
            assert_eq!(t.solver(j), o.eventually_halts(j));
            let hit = t.verifier(&mw, j as usize);
            if hit {
                assert!(o.eventually_halts(j), "seed {seed}: spurious witness for {j}");
            }
            let reachable = (0..=top as u64).any(|i| dovetail(i) == j && o.halts_before(j, i));
            assert_eq!(hit, reachable, "seed {seed} machine {j}");
        }
        // Blocks decode back to the ruler point.
        let blocks = mw.decode(0, &t.image_table());
        assert!(blocks.iter().all(Option::is_some));
    }
}

#[test]
fn dyck_reduction() {
    for seed in SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Machine 2 is first scheduled at step 3, the last one a depth-4 tower builds.
        let o = HaltingOracle::new((1..=20).map(|j| {
            let h = if rng.gen_bool(0.5) { Halting::HaltsAt(rng.gen_range(0..=5)) } else { Halting::NeverHalts };
            (j, h)
        }));
        let tower = DyckTower::build(&o, 4).unwrap();
        assert_eq!(cfl_solver(&o, 2), o.eventually_halts(2));
        assert_eq!(cfl_verifier(&tower, 2), o.halts_within(2, 3), "seed {seed}");
        assert!(!cfl_verifier(&tower, 3));
    }
}

/// Stack after reading `w` from `v`, or `None` on a mismatch or underflow.
fn run_stack(v: &[Letter], w: &[Letter], mut check: impl FnMut(&[Letter])) -> Option<Vec<Letter>> {
    let mut st = v.to_vec();
    for &l in w {
        if l <= 3 {
            st.push(l);
        } else if st.len() > v.len() && st.last() == Some(&(l - 3)) {
            st.pop();
        } else if st.len() == v.len() && st.last() == Some(&(l - 3)) {
            st.pop();
        } else {
            return None;
        }
        check(&st);
    }
    Some(st)
}

#[test]
fn dyck_levels() {
    let never = DyckTower::build(&HaltingOracle::never(), 3).unwrap();
    for i in 0..3 {
        assert_eq!(never.levels[i + 1].length, 57 * never.levels[i].length);
    }
    let o = HaltingOracle::new([(1, Halting::HaltsAt(0))]);
    for tower in [never, DyckTower::build(&o, 3).unwrap()] {
        for level in 1..=2 {
            for slot in 0..6 {
                let w = tower.materialize(level, slot).unwrap();
                let body = &w[..w.len() - 1];
                assert_eq!(run_stack(&[], body, |_| {}), Some(vec![]), "level {level} slot {slot}");
                for v in [vec![], vec![1], vec![2, 3], vec![3, 1, 1]] {
                    let mut ok = true;
                    run_stack(&v, &w[..w.len() - 1], |st| {
                        ok &= st == &v[..] || (st.len() > v.len() && st[..v.len()] == v[..] && st[v.len()] == 3);
                    });
                    assert!(ok, "level {level} slot {slot} from {v:?}");
                }
                let tr = tower.trace(level, slot, None);
                assert!(tr.legal && tr.body_balanced && tr.prefix_shape);
            }
        }
    }
}

#[test]
fn primorial_arithmetic() {
    let o = HaltingOracle::new([(1, Halting::HaltsAt(0))]);
    let p = Primorial::new(o.clone(), PRIMORIAL_MAX_LEVELS, false).unwrap();
    assert_eq!(p.levels.iter().map(|l| l.prime).collect::<Vec<_>>(), vec![3, 29]);
    assert_eq!(p.levels[1].primorial, BigUint::from(6469693230u64));
    assert!(p.check_k() && p.check_growth() && p.check_divisibility());
    // Level 1 carries machine 1, which halted at step 0.
    let l = &p.levels[1];
    let q = BigUint::from(29u32);
    let k = l.k.expect("halted");
    assert!(k > 0 && k < 29);
    assert_eq!(&l.distance, &(&l.primorial + &l.primorial / &q * BigUint::from(k)));
    assert!((&l.distance % &q).is_one());
    assert!((&p.levels[0].distance % 3u32).is_zero());
    assert!(p.symbolic_solver(1) && p.halted_in_range(1));
    assert!(Primorial::new(o, 3, false).is_err());

    for seed in SEEDS {
        let o = HaltingOracle::random(seed, 0, 8, 4);
        let toy = Primorial::new(o, 6, true).unwrap();
        let w = toy.materialize().unwrap();
        for j in 0..6 {
            assert_eq!(Primorial::scan_solver(&w, toy.levels[j].prime), toy.symbolic_solver(j), "seed {seed} level {j}");
        }
    }
}
