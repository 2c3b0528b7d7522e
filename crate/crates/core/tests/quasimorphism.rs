use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use qmcoh::cochain::ScalarCochain;
use qmcoh::group::{AutGroup, FreeGroup, Group, ReducedWord};
use qmcoh::quasimorphism::*;
use qmcoh::rational::{q, Q};
use qmcoh::sampling::rng;
use qmcoh::Error;

fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(s).unwrap()
}

/// Independent scan: compare letter by letter at every start position.
fn naive_count(pat: &[i32], text: &[i32]) -> usize {
    let mut n = 0;
    for start in 0..text.len() {
        let mut ok = start + pat.len() <= text.len();
        let mut i = 0;
        while ok && i < pat.len() {
            ok = text[start + i] == pat[i];
            i += 1;
        }
        n += ok as usize;
    }
    n
}

/// Occurrences of `pat` read around the cyclic word `core`, one per starting
/// letter. For a cyclically reduced core this is the eventual increment of
/// the counting function along powers of the core.
fn cyclic_count(pat: &[i32], core: &[i32]) -> i64 {
    if core.is_empty() {
        return 0;
    }
    (0..core.len())
        .filter(|&s| pat.iter().enumerate().all(|(i, x)| core[(s + i) % core.len()] == *x))
        .count() as i64
}

fn oracle_phi(word: &ReducedWord, g: &ReducedWord) -> Q {
    let (core, _) = g.cyclic_reduce();
    q(cyclic_count(word.letters(), core.letters()) - cyclic_count(word.inverse().letters(), core.letters()))
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec((1..=2i32, any::<bool>()), 0..max_len)
        .prop_map(|v| ReducedWord::reduce(&v.into_iter().map(|(i, s)| if s { i } else { -i }).collect::<Vec<_>>()).unwrap())
}

fn random_words(n: usize, max_len: usize, seed: u64) -> Vec<ReducedWord> {
    let f2 = FreeGroup::new(2);
    let mut r = rng(seed);
    (0..n).map(|_| f2.sample(&mut r, max_len)).collect()
}

const WORDS: [&str; 3] = ["ab", "abb", "aba'"];

#[test]
fn brooks_count_examples() {
    assert_eq!(brooks_count(&w("ab"), &w("abab")).unwrap(), naive_count(&[1, 2], &[1, 2, 1, 2]));
    assert_eq!(brooks_count(&w("ab"), &w("abab")).unwrap(), 2);
    assert_eq!(brooks_count(&w("ab"), &w("1")).unwrap(), 0);
    assert_eq!(brooks_count(&w("ab"), &w("b'a'")).unwrap(), naive_count(&[1, 2], &[-2, -1]));
    assert_eq!(brooks_count(&w("aa"), &w("aaaa")).unwrap(), 3);
    assert_eq!(brooks_count(&w("1"), &w("ab")), Err(Error::EmptyWord));
}

#[test]
fn brooks_quasimorphism_examples() {
    let phi = Quasimorphism::brooks(&w("ab")).unwrap();
    assert_eq!(phi.eval(&w("abab")), q(2));
    assert_eq!(phi.eval(&w("1")), q(0));
    assert_eq!(phi.eval(&w("b'a'")), q(-1));
    assert!(phi.defect_bound().is_none());
    assert!(!phi.is_homogeneous());
    assert!(Quasimorphism::brooks(&w("1")).is_err());
}

#[test]
fn defect_estimates() {
    let f2 = FreeGroup::new(2);
    assert_eq!(defect_estimate(&Quasimorphism::zero(), &f2, 100, 1), q(0));
    let hom = Quasimorphism::homomorphism(vec![q(1), q(0)]);
    assert_eq!(defect_estimate(&hom, &f2, 500, 1), q(0));
    let phi = Quasimorphism::brooks(&w("ab")).unwrap();
    let mut prev = Q::zero();
    for n in [1, 10, 100, 1000] {
        let d = defect_estimate(&phi, &f2, n, 5);
        assert!(d >= prev, "defect estimate decreased");
        prev = d;
    }
    assert!(prev > q(0));
}

#[test]
fn homogenize_examples() {
    let phi = Quasimorphism::brooks(&w("ab")).unwrap();
    assert_eq!(homogenize(&phi, &w("ab"), 4, 64).unwrap(), q(1));
    assert_eq!(homogenize(&phi, &w("1"), 4, 64).unwrap(), q(0));
    assert_eq!(homogenize(&phi, &w("aba'b'"), 4, 64).unwrap(), q(1));
    assert_eq!(homogenize(&phi, &w("abAB"), 4, 64).unwrap(), q(1));
    assert!(homogenize(&phi, &w("ab"), 1, 64).is_err());
}

#[test]
fn homogenize_reports_missing_stabilization() {
    let quadratic = Quasimorphism::custom("len^2", Arc::new(|g: &ReducedWord| q((g.len() * g.len()) as i64)), None, false);
    assert_eq!(homogenize(&quadratic, &w("ab"), 4, 64), Err(Error::NoStabilization(64)));
}

#[test]
fn homogenized_homomorphism_is_itself() {
    let hom = Quasimorphism::homomorphism(vec![qmcoh::rational::q_frac(1, 2), q(-3)]);
    for g in random_words(100, 12, 2) {
        assert_eq!(homogenize(&hom, &g, 4, 64).unwrap(), hom.eval(&g));
    }
}

#[test]
fn nontriviality_witness_values() {
    let phi = HomogenizedQm::with_defaults(Quasimorphism::brooks(&w("ab")).unwrap());
    assert_eq!(phi.eval(&w("aba'b'")).unwrap(), q(1));
    assert_eq!(phi.eval(&w("a")).unwrap(), q(0));
    assert_eq!(phi.eval(&w("b")).unwrap(), q(0));
}

#[test]
fn homogeneity_of_phi() {
    for word in WORDS {
        let phi = HomogenizedQm::with_defaults(Quasimorphism::brooks(&w(word)).unwrap());
        for g in random_words(200, 12, 3) {
            let base = phi.eval(&g).unwrap();
            for k in -8i64..=8 {
                assert_eq!(phi.eval(&g.power(k).unwrap()).unwrap(), q(k) * &base, "{word} {g} {k}");
            }
        }
    }
}

#[test]
fn conjugation_invariance_of_homogenize() {
    let f2 = FreeGroup::new(2);
    for word in WORDS {
        let phi = Quasimorphism::brooks(&w(word)).unwrap();
        let gs = random_words(200, 12, 4);
        let ks = random_words(200, 6, 5);
        for (g, k) in gs.iter().zip(&ks) {
            let conj = f2.conj(k, g);
            assert_eq!(homogenize(&phi, &conj, 4, 64).unwrap(), homogenize(&phi, g, 4, 64).unwrap());
        }
    }
}

#[test]
fn cocycle_examples() {
    let c = brooks_cocycle("ab").unwrap();
    assert_eq!(c.eval(&w("a"), &w("b")).unwrap(), q(1));
    for g in random_words(50, 12, 6) {
        assert_eq!(c.eval(&g, &g.inverse()).unwrap(), q(0));
        assert_eq!(c.eval(&g, &w("1")).unwrap(), q(0));
        assert_eq!(c.eval(&w("1"), &g).unwrap(), q(0));
    }
    for n in -5..=5 {
        for m in -5..=5 {
            assert_eq!(c.eval(&w("a").power(n).unwrap(), &w("a").power(m).unwrap()).unwrap(), q(0));
        }
    }
}

#[test]
fn cocycle_vanishes_on_powers_of_one_element() {
    for word in WORDS {
        let c = brooks_cocycle(word).unwrap();
        for g in random_words(200, 12, 7) {
            let pows: Vec<_> = (-6..=6).map(|n| g.power(n).unwrap()).collect();
            for x in &pows {
                for y in &pows {
                    assert!(c.eval(x, y).unwrap().is_zero(), "{word}: c({x}, {y}) != 0");
                }
            }
        }
    }
}

#[test]
fn cocycle_law_on_random_triples() {
    for word in WORDS {
        let c = brooks_cocycle(word).unwrap();
        let ws = random_words(1500, 12, 8);
        for t in ws.chunks(3) {
            assert!(c.coboundary_at(&t[0], &t[1], &t[2]).unwrap().is_zero());
        }
    }
}

#[test]
fn cocycle_sup_is_within_twice_the_sampled_defect() {
    let f2 = Arc::new(FreeGroup::new(2));
    for word in WORDS {
        let phi = Quasimorphism::brooks(&w(word)).unwrap();
        let bound = q(2) * defect_estimate(&phi, &f2, 5000, 9);
        let c = homogeneous_cocycle(&phi, 4, 64).unwrap();
        for t in random_words(1000, 12, 10).chunks(2) {
            assert!(c.eval(&t[0], &t[1]).unwrap().abs() <= bound);
        }
    }
}

fn defect_cochain(phi: &Quasimorphism, f2: &Arc<FreeGroup>) -> ScalarCochain<FreeGroup> {
    let p = phi.clone();
    ScalarCochain::scalar_fn(f2.clone(), 2, move |t| Ok(p.defect_at(&t[0], &t[1])))
}

fn triples(n: usize, seed: u64) -> Vec<(ReducedWord, ReducedWord, ReducedWord)> {
    random_words(3 * n, 8, seed).chunks(3).map(|t| (t[0].clone(), t[1].clone(), t[2].clone())).collect()
}

#[test]
fn representative_of_defect_cocycle_is_the_homogeneous_cocycle() {
    let f2 = Arc::new(FreeGroup::new(2));
    for word in WORDS {
        let phi = Quasimorphism::brooks(&w(word)).unwrap();
        let rep = homogeneous_representative(&defect_cochain(&phi, &f2), &triples(30, 11), 4, 64).unwrap();
        let direct = homogeneous_cocycle(&phi, 4, 64).unwrap();
        for t in random_words(1000, 12, 12).chunks(2) {
            assert_eq!(rep.eval(&t[0], &t[1]).unwrap(), direct.eval(&t[0], &t[1]).unwrap());
        }
    }
}

#[test]
fn representative_is_unique_up_to_bounded_coboundaries() {
    let f2 = Arc::new(FreeGroup::new(2));
    let cx = brooks_cocycle("abb").unwrap();
    // b supported on a few short words, b(1) = 0
    let mut table = BTreeMap::new();
    for (s, v) in [("a", 3), ("ab", -2), ("b'", 5), ("aa", 1), ("ba'b", -7)] {
        table.insert(w(s), q(v));
    }
    let b = Arc::new(table);
    let cxe = cx.evaluator();
    let shifted = ScalarCochain::scalar_fn(f2.clone(), 2, move |t| {
        let val = |x: &ReducedWord| b.get(x).cloned().unwrap_or_else(Q::zero);
        Ok(cxe(&t[0], &t[1])? + val(&t[0].mul(&t[1])) - val(&t[0]) - val(&t[1]))
    });
    let rep = homogeneous_representative(&shifted, &triples(30, 13), 4, 64).unwrap();
    let mut pairs = random_words(400, 3, 14);
    pairs.extend(random_words(400, 12, 15));
    for t in pairs.chunks(2) {
        assert_eq!(rep.eval(&t[0], &t[1]).unwrap(), cx.eval(&t[0], &t[1]).unwrap());
    }
}

#[test]
fn representative_trivial_cases() {
    let f2 = Arc::new(FreeGroup::new(2));
    let zero = ScalarCochain::scalar_fn(f2.clone(), 2, |_| Ok(Q::zero()));
    let rep = homogeneous_representative(&zero, &triples(10, 16), 4, 64).unwrap();
    let cx = brooks_cocycle("ab").unwrap();
    let already = homogeneous_representative(&cx.to_cochain(f2.clone()), &triples(10, 17), 4, 64).unwrap();
    for t in random_words(200, 10, 18).chunks(2) {
        assert!(rep.eval(&t[0], &t[1]).unwrap().is_zero());
        assert_eq!(already.eval(&t[0], &t[1]).unwrap(), cx.eval(&t[0], &t[1]).unwrap());
    }
}

#[test]
fn representative_rejects_non_cocycles() {
    let f2 = Arc::new(FreeGroup::new(2));
    let bad = ScalarCochain::scalar_fn(f2, 2, |t| Ok(q(t[0].len() as i64 * t[1].len() as i64 * t[1].len() as i64)));
    assert!(matches!(homogeneous_representative(&bad, &triples(20, 19), 4, 64), Err(Error::NotACocycle(_))));
}

#[test]
fn pullbacks() {
    let f2 = FreeGroup::new(2);
    let cab = brooks_cocycle("ab").unwrap();
    let cba = brooks_cocycle("ba").unwrap();
    let id = pullback_cocycle(&f2, &f2.identity_aut(), &cab);
    let by_swap = pullback_cocycle(&f2, &f2.swap(), &cab);
    let ks = random_words(200, 6, 20);
    for (i, t) in random_words(400, 12, 21).chunks(2).enumerate() {
        let (g, h) = (&t[0], &t[1]);
        let base = cab.eval(g, h).unwrap();
        assert_eq!(id.eval(g, h).unwrap(), base);
        let inner = pullback_cocycle(&f2, &f2.inner(&ks[i]), &cab);
        assert_eq!(inner.eval(g, h).unwrap(), base);
        assert_eq!(by_swap.eval(g, h).unwrap(), cba.eval(g, h).unwrap());
    }
}

proptest! {
    #[test]
    fn homogenize_matches_cyclic_count(g in word_strategy(14), word in prop::sample::select(WORDS.to_vec())) {
        let ww = w(word);
        let phi = Quasimorphism::brooks(&ww).unwrap();
        prop_assert_eq!(homogenize(&phi, &g, 4, 64).unwrap(), oracle_phi(&ww, &g));
    }

    #[test]
    fn brooks_count_matches_naive_scan(g in word_strategy(20), pat in word_strategy(4)) {
        prop_assume!(!pat.is_empty());
        prop_assert_eq!(brooks_count(&pat, &g).unwrap(), naive_count(pat.letters(), g.letters()));
    }

    #[test]
    fn brooks_is_odd(g in word_strategy(20)) {
        let phi = Quasimorphism::brooks(&w("abb")).unwrap();
        prop_assert_eq!(phi.eval(&g.inverse()), -phi.eval(&g));
    }
}
