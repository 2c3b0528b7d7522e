use proptest::prelude::*;
use qmcoh::group::{random_word, AutGroup, FiniteGroup, FreeGroup, Group, ReducedWord};
use qmcoh::rational::{fmt_q, parse_q, pow2_inv, q};
use qmcoh::Error;

fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(s).unwrap()
}

fn word_strategy(rank: i32, max_len: usize) -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..max_len)
        .prop_map(|v| ReducedWord::reduce(&v.into_iter().map(|(i, s)| if s { i } else { -i }).collect::<Vec<_>>()).unwrap())
}

#[test]
fn rationals_parse_and_format() {
    for s in ["0", "3", "-7/2", "5/10"] {
        let x = parse_q(s).unwrap();
        assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }
    assert_eq!(fmt_q(&parse_q("5/10").unwrap()), "1/2");
    assert!(parse_q("1/0").is_err());
    assert!(parse_q("x").is_err());
    assert_eq!(pow2_inv(12) * q(4096), q(1));
}

#[test]
fn reduce_cancels_adjacent_inverses() {
    assert_eq!(ReducedWord::reduce(&[1, -1, 2]).unwrap(), w("b"));
    assert_eq!(ReducedWord::reduce(&[1, 2, 1, 2]).unwrap().letters(), &[1, 2, 1, 2]);
    assert!(ReducedWord::reduce(&[1, 2, -2, -1]).unwrap().is_empty());
}

#[test]
fn word_syntax_accepts_apostrophes_and_uppercase() {
    assert_eq!(w("abAB"), w("aba'b'"));
    assert_eq!(w("a'"), ReducedWord::generator(-1));
    assert_eq!(w("1"), ReducedWord::identity());
    assert_eq!(w("aa'"), ReducedWord::identity());
    assert!(ReducedWord::parse("'a").is_err());
    assert!(ReducedWord::parse("a+b").is_err());
    assert_eq!(w("ab'a").to_string(), "ab'a");
    assert_eq!(ReducedWord::identity().to_string(), "1");
}

#[test]
fn power_by_squaring_matches_repeated_multiplication() {
    assert_eq!(w("ab").power(2).unwrap(), w("abab"));
    assert!(w("ab").power(0).unwrap().is_empty());
    let g = w("aba'");
    let by_hand = g.mul(&g).mul(&g);
    assert_eq!(g.power(3).unwrap(), by_hand);
    assert_eq!(by_hand, w("abbba'"));
    assert_eq!(g.power(-2).unwrap(), w("ab'b'a'"));
    assert!(matches!(w("a").power(1 << 17), Err(Error::ResourceCap(_))));
    assert_eq!(w("ab").power(1 << 16).unwrap().len(), 2 << 16);
}

#[test]
fn cyclic_reduce_peels_matching_ends() {
    assert_eq!(w("aba'").cyclic_reduce(), (w("b"), w("a")));
    assert_eq!(w("abab").cyclic_reduce(), (w("abab"), w("1")));
    assert_eq!(w("aaba'").cyclic_reduce(), (w("ab"), w("a")));
    assert_eq!(w("a").cyclic_reduce(), (w("a"), w("1")));
    assert_eq!(w("1").cyclic_reduce(), (w("1"), w("1")));
}

#[test]
fn out_of_range_generators_are_rejected() {
    let f2 = FreeGroup::new(2);
    assert_eq!(f2.reduce(&[1, 3]), Err(Error::GeneratorOutOfRange { index: 3, rank: 2 }));
    assert!(matches!(f2.checked_mul(&w("a"), &w("c")), Err(Error::MixedModel(_))));
    assert!(f2.parse("abc").is_err());
}

#[test]
fn free_automorphism_examples() {
    let f2 = FreeGroup::new(2);
    let swap = f2.swap();
    assert_eq!(f2.apply(&swap, &w("ab")), w("ba"));
    let u = f2.automorphism_from_strs(&["aba'", "a"], &["b", "b'ab"]).unwrap();
    assert_eq!(f2.apply(&u, &w("ab")), w("ab"));
    assert!(f2.apply(&u, &w("1")).is_empty());
    assert!(f2.aut_eq(&f2.compose(&u, &u), &f2.inner(&w("ab"))));
    assert!(f2.automorphism_from_strs(&["aba'", "a"], &["b", "a"]).is_err());
}

#[test]
fn random_words_are_reduced_of_exact_length_and_reproducible() {
    let f2 = FreeGroup::new(2);
    assert!(random_word(&f2, 0, 3).is_empty());
    let x = random_word(&f2, 3, 7);
    assert_eq!(x.len(), 3);
    assert_eq!(x, random_word(&f2, 3, 7));
    for seed in 0..50 {
        let long = random_word(&f2, 40, seed);
        assert_eq!(ReducedWord::reduce(long.letters()).unwrap().len(), 40);
    }
}

#[test]
fn finite_tables_are_validated() {
    let z4 = FiniteGroup::cyclic(4);
    assert_eq!(FiniteGroup::from_json(&z4.to_json()).unwrap(), z4);
    let not_latin = r#"{"order":2,"identity":1,"table":[[1,2],[2,2]]}"#;
    assert!(FiniteGroup::from_json(not_latin).is_err());
    let wrong_identity = r#"{"order":2,"identity":2,"table":[[1,2],[2,1]]}"#;
    assert!(FiniteGroup::from_json(wrong_identity).is_err());
    // a Latin square with identity that is not associative
    let quasigroup = r#"{"order":5,"identity":1,"table":[[1,2,3,4,5],[2,1,4,5,3],[3,5,1,2,4],[4,3,5,1,2],[5,4,2,3,1]]}"#;
    assert!(FiniteGroup::from_json(quasigroup).is_err());
}

#[test]
fn finite_powers_and_sampling() {
    let z4 = FiniteGroup::cyclic(4);
    assert_eq!(z4.power(&1, 3).unwrap(), 3);
    assert_eq!(z4.power(&1, -1).unwrap(), 3);
    assert_eq!(z4.power(&3, 0).unwrap(), 0);
    let x = random_word(&z4, 1, 1);
    assert_eq!(x, random_word(&z4, 1, 1));
    assert!(x < 4);
    assert!(z4.checked_mul(&1, &7).is_err());
}

#[test]
fn finite_automorphisms() {
    let z4 = FiniteGroup::cyclic(4);
    let neg = z4.automorphism(vec![0, 3, 2, 1]).unwrap();
    assert_eq!(z4.apply(&neg, &1), 3);
    assert!(z4.aut_eq(&z4.compose(&neg, &neg), &z4.identity_aut()));
    assert!(z4.automorphism(vec![0, 2, 1, 3]).is_err());
}

#[test]
fn finite_group_laws_exhaustive() {
    for g in [FiniteGroup::cyclic(4), FiniteGroup::cyclic(6)] {
        for a in g.elements() {
            assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
            assert_eq!(g.mul(&g.identity(), &a), a);
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn free_group_laws(g in word_strategy(3, 20), h in word_strategy(3, 20), k in word_strategy(3, 20)) {
        let f3 = FreeGroup::new(3);
        prop_assert_eq!(f3.mul(&f3.mul(&g, &h), &k), f3.mul(&g, &f3.mul(&h, &k)));
        prop_assert_eq!(f3.mul(&g, &f3.identity()), g.clone());
        prop_assert!(f3.mul(&g, &f3.inv(&g)).is_empty());
        prop_assert_eq!(ReducedWord::reduce(g.letters()).unwrap(), g.clone());
    }

    #[test]
    fn cyclic_reduce_recovers_the_word(g in word_strategy(2, 30)) {
        let (core, conj) = g.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(conj.mul(&core).mul(&conj.inverse()), g);
    }

    #[test]
    fn power_matches_iterated_product(g in word_strategy(2, 10), k in -9i64..9) {
        let mut acc = ReducedWord::identity();
        let step = if k < 0 { g.inverse() } else { g.clone() };
        for _ in 0..k.abs() {
            acc = acc.mul(&step);
        }
        prop_assert_eq!(g.power(k).unwrap(), acc);
    }

    #[test]
    fn automorphisms_are_homomorphisms_and_compose(g in word_strategy(2, 15), h in word_strategy(2, 15)) {
        let f2 = FreeGroup::new(2);
        let u = f2.automorphism_from_strs(&["aba'", "a"], &["b", "b'ab"]).unwrap();
        let s = f2.swap();
        let i = f2.inner(&w("ab'"));
        for phi in [&u, &s, &i] {
            prop_assert_eq!(f2.apply(phi, &g.mul(&h)), f2.apply(phi, &g).mul(&f2.apply(phi, &h)));
            prop_assert_eq!(f2.apply_inverse(phi, &f2.apply(phi, &g)), g.clone());
        }
        let us = f2.compose(&u, &s);
        prop_assert_eq!(f2.apply(&us, &g), f2.apply(&u, &f2.apply(&s, &g)));
        prop_assert_eq!(f2.apply(&f2.inverse(&us), &f2.apply(&us, &g)), g.clone());
        let u3 = f2.aut_power(&u, 3);
        prop_assert_eq!(f2.apply(&u3, &g), f2.apply(&u, &f2.apply(&u, &f2.apply(&u, &g))));
        let um2 = f2.aut_power(&u, -2);
        prop_assert_eq!(f2.apply(&u, &f2.apply(&u, &f2.apply(&um2, &g))), g);
    }
}
