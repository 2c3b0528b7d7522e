use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng as _;

use super::context::{f2, family, nontrivial_words, tuples, words};
use super::{fq, run_samples, Check, Outcome};
use crate::chains::{m2_chain, L1Chain};
use crate::cochain::{
    coboundary, cup, homogeneous_coboundary, pair, to_homogeneous, BoundedCochain, FreeMatrixModule, Module,
    ScalarCochain, TrivialScalar,
};
use crate::error::Result;
use crate::group::{FreeGroup, ReducedWord};
use crate::quasimorphism::defect_estimate;
use crate::rational::{pow2_inv, q, q_frac, Q};

/// A scalar `p`-cochain with no structure, used where only the algebra matters.
fn test_cochain(g: &Arc<FreeGroup>, p: usize, salt: i64) -> ScalarCochain<FreeGroup> {
    ScalarCochain::scalar_fn(g.clone(), p, move |t| {
        let mut acc = Q::zero();
        for (i, x) in t.iter().enumerate() {
            let s: i64 = x.letters().iter().map(|&l| l as i64 * (i as i64 + salt)).sum();
            acc += q_frac(s * s - x.len() as i64, i as i64 + 1);
        }
        Ok(acc)
    })
}

fn unipotent_module() -> Arc<FreeMatrixModule> {
    let a = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
    let ai = vec![vec![q(1), q(-1)], vec![q(0), q(1)]];
    let b = vec![vec![q(1), q(0)], vec![q(2), q(1)]];
    let bi = vec![vec![q(1), q(0)], vec![q(-2), q(1)]];
    Arc::new(FreeMatrixModule::new(2, vec![a, b], vec![ai, bi]).expect("inverse matrices"))
}

fn scalar_mul() -> Arc<dyn Fn(&Q, &Q) -> Q + Send + Sync> {
    Arc::new(|a: &Q, b: &Q| a * b)
}

const LEIBNIZ_DEGREES: [(usize, usize); 3] = [(1, 1), (1, 2), (2, 2)];

pub fn cochain_checks() -> Vec<Check> {
    vec![
        Check::new("cochains.d-squared", "d d f = 0, trivial and unipotent coefficients", |cfg| {
            let g = f2();
            let m = unipotent_module();
            let mut rng = cfg.rng_for("cochains.d-squared");
            let items: Vec<(usize, Vec<ReducedWord>)> =
                (1..=3usize).flat_map(|n| tuples(&mut rng, cfg.n(50), n + 2, 4).into_iter().map(move |t| (n, t))).collect();
            let scalar: Vec<_> = (1..=3).map(|n| coboundary(&coboundary(&test_cochain(&g, n, 2)))).collect();
            let vector: Vec<_> = (1..=3)
                .map(|n| {
                    let f = test_cochain(&g, n, 3);
                    let v = BoundedCochain::from_fn(g.clone(), m.clone(), n, move |t| Ok(vec![f.eval(t)?, q(t.len() as i64)]));
                    coboundary(&coboundary(&v))
                })
                .collect();
            Ok(run_samples(&items, |(n, t)| {
                let s = scalar[n - 1].eval(t)?;
                let v = vector[n - 1].eval(t)?;
                Ok(Outcome::check(s.is_zero(), || format!("scalar dd f = {} in degree {n}", fq(&s)))
                    .and(Outcome::check(v.iter().all(Q::is_zero), || format!("vector dd f != 0 in degree {n}"))))
            }))
        }),
        Check::new("cochains.delta-squared", "delta delta F = 0 for invariant homogeneous F", |cfg| {
            let g = f2();
            let mut rng = cfg.rng_for("cochains.delta-squared");
            let f = test_cochain(&g, 2, 5);
            let big = to_homogeneous(&f);
            let d1 = homogeneous_coboundary(&big, &mut rng, 10, 4)?;
            let d2 = homogeneous_coboundary(&d1, &mut rng, 10, 4)?;
            let items = tuples(&mut rng, cfg.n(100), 5, 4);
            Ok(run_samples(&items, |t| {
                let v = d2.eval(t)?;
                Ok(Outcome::check(v.is_zero(), || format!("delta delta F = {}", fq(&v))))
            }))
        }),
        Check::new("cochains.leibniz", "d(f u h) = df u h + (-1)^p f u dh", |cfg| {
            let g = f2();
            let mut rng = cfg.rng_for("cochains.leibniz");
            let mut items = Vec::new();
            for (i, (p, qd)) in LEIBNIZ_DEGREES.into_iter().enumerate() {
                for t in tuples(&mut rng, cfg.n(200), p + qd + 1, 4) {
                    items.push((i, t));
                }
            }
            let sides: Vec<_> = LEIBNIZ_DEGREES
                .iter()
                .map(|&(p, qd)| -> Result<_> {
                    let (f, h) = (test_cochain(&g, p, 2), test_cochain(&g, qd, 7));
                    let tr = Arc::new(TrivialScalar);
                    let lhs = coboundary(&cup(&f, &h, tr.clone(), scalar_mul())?);
                    let a = cup(&coboundary(&f), &h, tr.clone(), scalar_mul())?;
                    let b = cup(&f, &coboundary(&h), tr, scalar_mul())?;
                    let rhs = if p % 2 == 0 { a.add(&b) } else { a.sub(&b) };
                    Ok((lhs, rhs))
                })
                .collect::<Result<_>>()?;
            Ok(run_samples(&items, |(i, t)| {
                let (l, r) = (sides[*i].0.eval(t)?, sides[*i].1.eval(t)?);
                Ok(Outcome::check(l == r, || {
                    format!("degrees {:?}: {} != {}", LEIBNIZ_DEGREES[*i], fq(&l), fq(&r))
                }))
            }))
        }),
        Check::new("cochains.cup-associativity", "(f u h) u k = f u (h u k)", |cfg| {
            let g = f2();
            let tr = Arc::new(TrivialScalar);
            let (f, h, k) = (test_cochain(&g, 1, 2), test_cochain(&g, 2, 3), test_cochain(&g, 1, 4));
            let left = cup(&cup(&f, &h, tr.clone(), scalar_mul())?, &k, tr.clone(), scalar_mul())?;
            let right = cup(&f, &cup(&h, &k, tr.clone(), scalar_mul())?, tr, scalar_mul())?;
            let mut rng = cfg.rng_for("cochains.cup-associativity");
            let items = tuples(&mut rng, cfg.n(200), 4, 4);
            Ok(run_samples(&items, |t| {
                let (l, r) = (left.eval(t)?, right.eval(t)?);
                Ok(Outcome::check(l == r, || format!("{} != {}", fq(&l), fq(&r))))
            }))
        }),
        Check::new("cochains.adjointness", "<db, z> = <b, dz> on finitely supported chains", |cfg| {
            let g = f2();
            let mut rng = cfg.rng_for("cochains.adjointness");
            let b = test_cochain(&g, 1, 3);
            let db = coboundary(&b);
            let items: Vec<L1Chain<ReducedWord>> = (0..cfg.n(100))
                .map(|_| {
                    let xs = words(&mut rng, 10, 5);
                    let coeffs: Vec<i64> = (0..5).map(|_| rng.gen_range(-3..=3)).collect();
                    L1Chain::from_terms(&*g, 2, xs.chunks(2).zip(coeffs).map(|(t, c)| (t.to_vec(), q(c))))
                        .expect("pairs")
                })
                .collect();
            Ok(run_samples(&items, |z| {
                let (l, r) = (pair(&db, z)?, pair(&b, &z.boundary(&*g)?)?);
                Ok(Outcome::check(l.value == r.value, || format!("{} != {}", fq(&l.value), fq(&r.value))))
            }))
        }),
        Check::new("cochains.duality", "<c_x, m2(g,h)> = c_x(g,h), zero interval", |cfg| {
            let g = f2();
            let fam = family(cfg)?;
            let cs: Vec<_> = fam.iter().map(|n| n.cx.to_cochain(g.clone())).collect();
            let mut rng = cfg.rng_for("cochains.duality");
            let items = tuples(&mut rng, cfg.n(300), 2, 12);
            Ok(run_samples(&items, |t| {
                let m2 = m2_chain(&*g, &t[0], &t[1], cfg.cutoff)?;
                let mut out = Outcome::ok();
                for (n, c) in fam.iter().zip(&cs) {
                    let p = pair(c, &m2)?;
                    let want = n.cx.eval(&t[0], &t[1])?;
                    out = out.and(Outcome::check(p.value == want && p.error_bound.is_zero(), || {
                        format!("c_{}: <c, m2({}, {})> = {} +- {}, want {}", n.word, t[0], t[1], fq(&p.value), fq(&p.error_bound), fq(&want))
                    }));
                }
                Ok(out)
            }))
        }),
        Check::new(
            "cochains.duality-defect-cocycle",
            "<c, m2(g,h)> - c_x(g,h) = 2^-N (b((gh)^M) - b(g^M) - b(h^M)), b = Phi - phi, M = 2^N; |.| <= 3 2^-N D",
            |cfg| {
                let g = f2();
                let fam = family(cfg)?;
                let ab = fam.iter().find(|n| n.word == "ab").unwrap_or(&fam[0]);
                let qm = ab.qm.clone();
                let phi = ab.cx.source().expect("built from a quasimorphism").clone();
                // sampled, so the radius below is only as good as the estimate
                let defect = defect_estimate(&qm, &g, 2000, cfg.seed);
                let qq = qm.clone();
                let c = ScalarCochain::scalar_fn(g.clone(), 2, move |t| Ok(qq.defect_at(&t[0], &t[1])))
                    .with_norm_bound(defect.clone());
                let n = cfg.cutoff;
                let big_m: i64 = 1 << n;
                let mut rng = cfg.rng_for("cochains.duality-defect-cocycle");
                let items = tuples(&mut rng, cfg.n(300), 2, 12);
                let tol = q(3) * pow2_inv(n) * &defect;
                Ok(run_samples(&items, |t| {
                    let (x, y) = (&t[0], &t[1]);
                    let p = pair(&c, &m2_chain(&*g, x, y, n)?)?;
                    let diff = &p.value - ab.cx.eval(x, y)?;
                    // Phi is evaluated on the long power directly; phi scales exactly.
                    let b = |z: &ReducedWord| -> Result<Q> { Ok(qm.eval(&z.power(big_m)?) - q(big_m) * phi.eval(z)?) };
                    let correction = pow2_inv(n) * (b(&x.mul(y))? - b(x)? - b(y)?);
                    Ok(Outcome::check(diff == correction, || {
                        format!("({x}, {y}): difference {} vs correction {}", fq(&diff), fq(&correction))
                    })
                    .and(Outcome::check(diff.abs() <= tol, || format!("({x}, {y}): |{}| > {}", fq(&diff), fq(&tol))))
                    .and(Outcome::check(diff.abs() <= p.error_bound, || {
                        format!("({x}, {y}): |{}| outside certified radius {}", fq(&diff), fq(&p.error_bound))
                    }))
                    .with_bound(p.error_bound))
                }))
            },
        ),
        Check::new("cochains.module-action", "unipotent module: (gh) v = g (h v)", |cfg| {
            let m = unipotent_module();
            let mut rng = cfg.rng_for("cochains.module-action");
            let items: Vec<_> = nontrivial_words(&mut rng, 2 * cfg.n(50), 6).chunks(2).map(|c| c.to_vec()).collect();
            Ok(run_samples(&items, |t| {
                let v = vec![q(1), q(-2)];
                let l = Module::<FreeGroup>::act(&*m, &t[0].mul(&t[1]), &v);
                let r = Module::<FreeGroup>::act(&*m, &t[0], &Module::<FreeGroup>::act(&*m, &t[1], &v));
                Ok(Outcome::check(l == r, || format!("action not multiplicative at ({}, {})", t[0], t[1])))
            }))
        }),
    ]
}
