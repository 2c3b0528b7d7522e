use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use qmcoh::chains::{m2_chain, L1Chain};
use qmcoh::cochain::*;
use qmcoh::group::{FiniteGroup, FreeGroup, Group, ReducedWord};
use qmcoh::quasimorphism::brooks_cocycle;
use qmcoh::rational::{q, q_frac, Q};
use qmcoh::sampling::rng;
use qmcoh::Error;

fn f2() -> Arc<FreeGroup> {
    Arc::new(FreeGroup::new(2))
}

fn tuples(g: &FreeGroup, n: usize, count: usize, max_len: usize, seed: u64) -> Vec<Vec<ReducedWord>> {
    let mut r = rng(seed);
    (0..count).map(|_| (0..n).map(|_| g.sample(&mut r, max_len)).collect()).collect()
}

/// Non-trivial action of F2 on Q^2: a and b act by elementary unipotents.
fn matrix_module() -> Arc<FreeMatrixModule> {
    let a = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
    let ai = vec![vec![q(1), q(-1)], vec![q(0), q(1)]];
    let b = vec![vec![q(1), q(0)], vec![q(2), q(1)]];
    let bi = vec![vec![q(1), q(0)], vec![q(-2), q(1)]];
    Arc::new(FreeMatrixModule::new(2, vec![a, b], vec![ai, bi]).unwrap())
}

/// Arbitrary deterministic scalar function of a tuple.
fn scalar_test_fn(t: &[ReducedWord]) -> Q {
    let mut acc = Q::zero();
    for (i, x) in t.iter().enumerate() {
        let s: i64 = x.letters().iter().map(|&l| l as i64 * (i as i64 + 2)).sum();
        acc += q_frac(s * s + x.len() as i64, i as i64 + 1);
    }
    acc
}

fn vector_test_fn(t: &[ReducedWord]) -> Vec<Q> {
    vec![scalar_test_fn(t), q(t.iter().map(|x| x.len() as i64).product::<i64>() - 1)]
}

fn finite_support_cochain(g: &Arc<FreeGroup>, degree: usize, seed: u64) -> ScalarCochain<FreeGroup> {
    let mut table = BTreeMap::new();
    for (i, t) in tuples(g, degree, 30, 2, seed).into_iter().enumerate() {
        if t.iter().all(|x| !x.is_empty()) {
            table.insert(t, q(i as i64 % 7 - 3));
        }
    }
    ScalarCochain::finite_support(g.clone(), degree, table)
}

#[test]
fn coboundary_trivial_cases() {
    let g = f2();
    let zero = ScalarCochain::zero(g.clone(), Arc::new(TrivialScalar), 2);
    let hom = ScalarCochain::scalar_fn(g.clone(), 1, |t| {
        Ok(q(t[0].letters().iter().map(|&l| if l.abs() == 1 { 3 * l.signum() as i64 } else { -(l.signum() as i64) }).sum()))
    });
    let dz = coboundary(&zero);
    let dh = coboundary(&hom);
    for t in tuples(&g, 3, 200, 8, 1) {
        assert!(dz.eval(&t).unwrap().is_zero());
        assert!(dh.eval(&t[..2]).unwrap().is_zero());
    }
}

#[test]
fn coboundary_explicit_degree_one() {
    let g = f2();
    let m = matrix_module();
    let f = BoundedCochain::from_fn(g.clone(), m.clone(), 1, |t| Ok(vector_test_fn(t)));
    let df = coboundary(&f);
    for t in tuples(&g, 2, 100, 6, 2) {
        // g.f(h) - f(gh) + f(g)
        let expect = m.add(&m.sub(&m.act(&t[0], &vector_test_fn(&t[1..])), &vector_test_fn(&[g.mul(&t[0], &t[1])])), &vector_test_fn(&t[..1]));
        assert_eq!(df.eval(&t).unwrap(), expect);
    }
}

#[test]
fn coboundary_squares_to_zero() {
    let g = f2();
    for n in 1..=3 {
        let f = finite_support_cochain(&g, n, 3 + n as u64);
        let dd = coboundary(&coboundary(&f));
        for t in tuples(&g, n + 2, 200, 2, 10 + n as u64) {
            assert!(dd.eval(&t).unwrap().is_zero());
        }
        let fv = BoundedCochain::from_fn(g.clone(), matrix_module(), n, |t| Ok(vector_test_fn(t)));
        let ddv = coboundary(&coboundary(&fv));
        for t in tuples(&g, n + 2, 200, 5, 20 + n as u64) {
            assert_eq!(ddv.eval(&t).unwrap(), vec![q(0), q(0)]);
        }
    }
}

#[test]
fn finite_group_matrix_coboundaries() {
    let z4 = Arc::new(FiniteGroup::cyclic(4));
    // generator acts by rotation through a quarter turn
    let rot = |k: usize| {
        let (c, s) = [(1, 0), (0, 1), (-1, 0), (0, -1)][k % 4];
        vec![vec![q(c), q(-s)], vec![q(s), q(c)]]
    };
    let m = Arc::new(FiniteMatrixModule::new(&z4, 2, (0..4).map(rot).collect()).unwrap());
    let f = BoundedCochain::from_fn(z4.clone(), m.clone(), 2, |t: &[usize]| Ok(vec![q((t[0] * 3 + t[1]) as i64), q((t[0] * t[1]) as i64)]));
    let dd = coboundary(&coboundary(&f));
    let all = z4.elements();
    for a in all.clone() {
        for b in all.clone() {
            for c in all.clone() {
                for d in all.clone() {
                    assert_eq!(dd.eval(&[a, b, c, d]).unwrap(), vec![q(0), q(0)]);
                }
            }
        }
    }
    assert!(FiniteMatrixModule::new(&z4, 2, (0..4).map(|k| rot(2 * k + 1)).collect()).is_err());
}

#[test]
fn coboundary_norm_bound_and_sampled_values() {
    let g = f2();
    let f = finite_support_cochain(&g, 2, 30);
    let df = coboundary(&f);
    let bound = df.norm_bound().unwrap().clone();
    assert_eq!(&bound, &(f.norm_bound().unwrap() * q(4)));
    for t in tuples(&g, 3, 300, 2, 31) {
        assert!(df.eval(&t).unwrap().abs() <= bound);
    }
}

#[test]
fn homogeneous_constant_and_correspondence() {
    let g = f2();
    let mut r = rng(40);
    let constant = HomogeneousCochain::from_fn(g.clone(), Arc::new(TrivialScalar), 0, |_| Ok(q(5)));
    let d0 = homogeneous_coboundary(&constant, &mut r, 50, 6).unwrap();
    for t in tuples(&g, 2, 50, 6, 41) {
        assert!(d0.eval(&t).unwrap().is_zero());
    }
    let m = matrix_module();
    for n in 1..=3 {
        let f = BoundedCochain::from_fn(g.clone(), m.clone(), n, |t| Ok(vector_test_fn(t)));
        let big = to_homogeneous(&f);
        let via_delta = from_homogeneous(&homogeneous_coboundary(&big, &mut r, 50, 6).unwrap());
        let direct = coboundary(&f);
        for t in tuples(&g, n + 1, 100, 6, 42 + n as u64) {
            assert_eq!(via_delta.eval(&t).unwrap(), direct.eval(&t).unwrap());
        }
        let back = from_homogeneous(&big);
        for t in tuples(&g, n, 50, 6, 50 + n as u64) {
            assert_eq!(back.eval(&t).unwrap(), f.eval(&t).unwrap());
        }
    }
}

#[test]
fn homogeneous_delta_squares_to_zero() {
    let g = f2();
    let mut r = rng(60);
    let f = BoundedCochain::from_fn(g.clone(), matrix_module(), 1, |t| Ok(vector_test_fn(t)));
    let dd = homogeneous_coboundary(&homogeneous_coboundary(&to_homogeneous(&f), &mut r, 30, 5).unwrap(), &mut r, 30, 5).unwrap();
    for t in tuples(&g, 4, 100, 6, 61) {
        assert_eq!(dd.eval(&t).unwrap(), vec![q(0), q(0)]);
    }
}

#[test]
fn homogeneous_coboundary_rejects_non_invariant_input() {
    let g = f2();
    let mut r = rng(62);
    let bad = HomogeneousCochain::from_fn(g, Arc::new(TrivialScalar), 1, |t: &[ReducedWord]| Ok(q(t[0].len() as i64)));
    assert!(matches!(homogeneous_coboundary(&bad, &mut r, 50, 6), Err(Error::InvariantViolation(_))));
}

fn scalar_mul() -> Arc<dyn Fn(&Q, &Q) -> Q + Send + Sync> {
    Arc::new(|a: &Q, b: &Q| a * b)
}

#[test]
fn cup_unit() {
    let g = f2();
    let one = ScalarCochain::scalar_fn(g.clone(), 0, |_| Ok(q(1)));
    let h = finite_support_cochain(&g, 2, 70);
    let prod = cup(&one, &h, Arc::new(TrivialScalar), scalar_mul()).unwrap();
    for t in tuples(&g, 2, 100, 2, 71) {
        assert_eq!(prod.eval(&t).unwrap(), h.eval(&t).unwrap());
    }
}

#[test]
fn cup_degree_overflow() {
    let g = f2();
    let a = ScalarCochain::zero(g.clone(), Arc::new(TrivialScalar), 4);
    let b = ScalarCochain::zero(g, Arc::new(TrivialScalar), 3);
    assert!(matches!(cup(&a, &b, Arc::new(TrivialScalar), scalar_mul()), Err(Error::DegreeOverflow(7, 6))));
}

#[test]
fn leibniz_rule_scalar_and_twisted() {
    let g = f2();
    let m = matrix_module();
    for (p, qd) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let f = ScalarCochain::scalar_fn(g.clone(), p, |t| Ok(scalar_test_fn(t)));
        let h = ScalarCochain::scalar_fn(g.clone(), qd, |t| Ok(scalar_test_fn(t) + q(1)));
        let lhs = coboundary(&cup(&f, &h, Arc::new(TrivialScalar), scalar_mul()).unwrap());
        let r1 = cup(&coboundary(&f), &h, Arc::new(TrivialScalar), scalar_mul()).unwrap();
        let r2 = cup(&f, &coboundary(&h), Arc::new(TrivialScalar), scalar_mul()).unwrap();
        let sign = if p % 2 == 0 { q(1) } else { q(-1) };
        for t in tuples(&g, p + qd + 1, 200, 5, 80 + p as u64 * 3 + qd as u64) {
            assert_eq!(lhs.eval(&t).unwrap(), r1.eval(&t).unwrap() + &sign * r2.eval(&t).unwrap());
        }

        // scalar cup vector: mu(s, v) = s v is equivariant for the trivial action on s
        let hv = BoundedCochain::from_fn(g.clone(), m.clone(), qd, |t| Ok(vector_test_fn(t)));
        let mu: Arc<dyn Fn(&Q, &Vec<Q>) -> Vec<Q> + Send + Sync> = Arc::new(|s: &Q, v: &Vec<Q>| v.iter().map(|x| s * x).collect());
        let lhs = coboundary(&cup(&f, &hv, m.clone(), mu.clone()).unwrap());
        let r1 = cup(&coboundary(&f), &hv, m.clone(), mu.clone()).unwrap();
        let r2 = cup(&f, &coboundary(&hv), m.clone(), mu.clone()).unwrap();
        for t in tuples(&g, p + qd + 1, 200, 5, 90 + p as u64 * 3 + qd as u64) {
            let expect = m.add(&r1.eval(&t).unwrap(), &m.signed(&r2.eval(&t).unwrap(), p % 2 == 1));
            assert_eq!(lhs.eval(&t).unwrap(), expect);
        }
    }
}

#[test]
fn cup_is_associative() {
    let g = f2();
    let a = ScalarCochain::scalar_fn(g.clone(), 1, |t| Ok(scalar_test_fn(t)));
    let b = ScalarCochain::scalar_fn(g.clone(), 2, |t| Ok(q(t[0].len() as i64) - q(t[1].len() as i64)));
    let c = ScalarCochain::scalar_fn(g.clone(), 1, |t| Ok(scalar_test_fn(t) + q(2)));
    let t = Arc::new(TrivialScalar);
    let left = cup(&cup(&a, &b, t.clone(), scalar_mul()).unwrap(), &c, t.clone(), scalar_mul()).unwrap();
    let right = cup(&a, &cup(&b, &c, t.clone(), scalar_mul()).unwrap(), t.clone(), scalar_mul()).unwrap();
    for x in tuples(&g, 4, 200, 6, 100) {
        assert_eq!(left.eval(&x).unwrap(), right.eval(&x).unwrap());
    }
}

#[test]
fn pairing_basic_cases() {
    let g = f2();
    let c = brooks_cocycle("ab").unwrap().to_cochain(g.clone());
    let z = L1Chain::<ReducedWord>::zero(2);
    assert_eq!(pair(&c, &z).unwrap(), Pairing { value: q(0), error_bound: q(0) });
    let one = L1Chain::from_terms(&*g, 1, [(vec![ReducedWord::generator(1)], q(1))]).unwrap();
    assert!(matches!(pair(&c, &one), Err(Error::DegreeMismatch(_))));
    // non-homogeneous cochain without a norm bound cannot certify a tail
    let raw = ScalarCochain::scalar_fn(g.clone(), 2, |t| Ok(scalar_test_fn(t)));
    let m2 = m2_chain(&*g, &ReducedWord::generator(1), &ReducedWord::generator(2), 4).unwrap();
    assert!(matches!(pair(&raw, &m2), Err(Error::MissingNormBound(_))));
}

#[test]
fn pairing_with_m2_recovers_homogeneous_cocycle() {
    let g = f2();
    for word in ["ab", "abb", "aba'"] {
        let cx = brooks_cocycle(word).unwrap();
        let c = cx.to_cochain(g.clone());
        for t in tuples(&g, 2, 300, 10, 110) {
            let p = pair(&c, &m2_chain(&*g, &t[0], &t[1], 8).unwrap()).unwrap();
            assert_eq!(p.value, cx.eval(&t[0], &t[1]).unwrap());
            assert!(p.error_bound.is_zero());
        }
    }
}

#[test]
fn pairing_coboundary_with_m2_is_small() {
    let g = f2();
    let b = finite_support_cochain(&g, 1, 120);
    let db = coboundary(&b);
    for n in [2u32, 6, 10] {
        for t in tuples(&g, 2, 100, 2, 121) {
            let p = pair(&db, &m2_chain(&*g, &t[0], &t[1], n).unwrap()).unwrap();
            assert!(p.value.abs() <= p.error_bound, "{} > {}", p.value, p.error_bound);
            // tail is 3 2^-n unless a block base is trivial
            assert!(p.error_bound <= db.norm_bound().unwrap() * q(3) * qmcoh::rational::pow2_inv(n));
        }
    }
}

#[test]
fn pairing_adjointness_on_finite_chains() {
    let g = f2();
    for n in 1..=3 {
        let b = finite_support_cochain(&g, n, 130 + n as u64);
        let db = coboundary(&b);
        let terms: Vec<_> = tuples(&g, n + 1, 40, 2, 140 + n as u64)
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t, q_frac(i as i64 - 20, 3)))
            .collect();
        let z = L1Chain::from_terms(&*g, n + 1, terms).unwrap();
        let lhs = pair(&db, &z).unwrap();
        let rhs = pair(&b, &z.boundary(&*g).unwrap()).unwrap();
        assert_eq!(lhs.value, rhs.value);
        assert!(lhs.error_bound.is_zero() && rhs.error_bound.is_zero());
    }
}
