use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::Rng as _;

use super::context::{f2, family, nontrivial_words, words};
use super::{fq, run_samples, Check, Outcome};
use crate::check::CheckReport;
use crate::cochain::{coboundary, ScalarCochain};
use crate::group::{FreeGroup, Group, ReducedWord};
use crate::quasimorphism::{defect_estimate, homogeneous_representative, HomogenizedQm};
use crate::rational::q;

/// Samples per word, each paired with the index of its word.
fn per_word<T>(cfg_words: usize, n: usize, mut draw: impl FnMut() -> T) -> Vec<(usize, T)> {
    (0..cfg_words).flat_map(|w| (0..n).map(move |_| w)).map(|w| (w, draw())).collect::<Vec<_>>()
}

pub fn qm_checks() -> Vec<Check> {
    vec![
        Check::new("qm.homogeneity", "phi(g^k) = k phi(g), |k| <= 8", |cfg| {
            let fam = family(cfg)?;
            let mut rng = cfg.rng_for("qm.homogeneity");
            let items = per_word(fam.len(), cfg.n(200), || FreeGroup::new(2).sample(&mut rng, 12));
            let phis: Vec<_> = fam.iter().map(|n| n.cx.source().unwrap().clone()).collect();
            Ok(run_samples(&items, |(w, g)| {
                let base = phis[*w].eval(g)?;
                let mut out = Outcome::ok();
                for k in -8..=8i64 {
                    let v = phis[*w].eval(&g.power(k)?)?;
                    out = out.and(Outcome::check(v == q(k) * &base, || {
                        format!("phi_{}({g}^{k}) = {} != {k} * {}", fam[*w].word, fq(&v), fq(&base))
                    }));
                }
                Ok(out)
            }))
        }),
        Check::new("qm.cx-vanishes-on-powers", "c_x(g^n, g^m) = 0, n, m in [-6, 6]", |cfg| {
            let fam = family(cfg)?;
            let mut rng = cfg.rng_for("qm.cx-vanishes-on-powers");
            let items = per_word(fam.len(), cfg.n(200), || FreeGroup::new(2).sample(&mut rng, 12));
            Ok(run_samples(&items, |(w, g)| {
                let powers: Vec<ReducedWord> = (-6..=6).map(|k| g.power(k)).collect::<crate::Result<_>>()?;
                let mut out = Outcome::ok();
                for (i, x) in powers.iter().enumerate() {
                    for (j, y) in powers.iter().enumerate() {
                        let v = fam[*w].cx.eval(x, y)?;
                        out = out.and(Outcome::check(v.is_zero(), || {
                            format!("c_{}({g}^{}, {g}^{}) = {}", fam[*w].word, i as i64 - 6, j as i64 - 6, fq(&v))
                        }));
                    }
                }
                Ok(out)
            }))
        }),
        Check::new("qm.cocycle-law", "c_x(h,k) - c_x(gh,k) + c_x(g,hk) - c_x(g,h) = 0", |cfg| {
            let fam = family(cfg)?;
            let mut rng = cfg.rng_for("qm.cocycle-law");
            let items = per_word(fam.len(), cfg.n(500), || words(&mut rng, 3, 12));
            Ok(run_samples(&items, |(w, t)| {
                let d = fam[*w].cx.coboundary_at(&t[0], &t[1], &t[2])?;
                Ok(Outcome::check(d.is_zero(), || {
                    format!("dc_{}({}, {}, {}) = {}", fam[*w].word, t[0], t[1], t[2], fq(&d))
                }))
            }))
        }),
        Check::new("qm.conjugation-invariance", "phi(k g k^-1) = phi(g)", |cfg| {
            let fam = family(cfg)?;
            let mut rng = cfg.rng_for("qm.conjugation-invariance");
            let items = per_word(fam.len(), cfg.n(200), || words(&mut rng, 2, 10));
            Ok(run_samples(&items, |(w, t)| {
                let phi = fam[*w].cx.source().unwrap();
                let (a, b) = (phi.eval(&t[0].mul(&t[1]).mul(&t[0].inverse()))?, phi.eval(&t[1])?);
                Ok(Outcome::check(a == b, || format!("phi_{}: {} != {} at k = {}, g = {}", fam[*w].word, fq(&a), fq(&b), t[0], t[1])))
            }))
        }),
        Check::new("qm.cx-sup-bound", "|c_x(g,h)| <= 2 D, D the sampled defect of Phi", |cfg| {
            let fam = family(cfg)?;
            let g = FreeGroup::new(2);
            let bounds: Vec<_> =
                fam.iter().map(|n| q(2) * defect_estimate(&n.qm, &g, 2000, cfg.seed)).collect();
            let mut rng = cfg.rng_for("qm.cx-sup-bound");
            let items = per_word(fam.len(), cfg.n(300), || words(&mut rng, 2, 12));
            Ok(run_samples(&items, |(w, t)| {
                let v = fam[*w].cx.eval(&t[0], &t[1])?;
                Ok(Outcome::check(v.abs() <= bounds[*w], || {
                    format!("|c_{}({}, {})| = {} > {}", fam[*w].word, t[0], t[1], fq(&v), fq(&bounds[*w]))
                }))
            }))
        }),
        Check::new(
            "qm.representative-of-defect-cocycle",
            "homogeneous representative of Phi(gh) - Phi(g) - Phi(h) equals c_x",
            |cfg| {
                let fam = family(cfg)?;
                let grp = f2();
                let mut rng = cfg.rng_for("qm.representative-of-defect-cocycle");
                let mut report = CheckReport::new();
                for n in &fam {
                    let qm = n.qm.clone();
                    let c = ScalarCochain::scalar_fn(grp.clone(), 2, move |t| Ok(qm.defect_at(&t[0], &t[1])));
                    let triples: Vec<_> = (0..20).map(|_| {
                        let t = words(&mut rng, 3, 8);
                        (t[0].clone(), t[1].clone(), t[2].clone())
                    }).collect();
                    let rep = homogeneous_representative(&c, &triples, cfg.window, cfg.n_max)?;
                    let items: Vec<_> = (0..cfg.n(100)).map(|_| words(&mut rng, 2, 10)).collect();
                    report.merge(run_samples(&items, |t| {
                        let (a, b) = (rep.eval(&t[0], &t[1])?, n.cx.eval(&t[0], &t[1])?);
                        Ok(Outcome::check(a == b, || format!("word {}: ({}, {}) gives {} vs {}", n.word, t[0], t[1], fq(&a), fq(&b))))
                    }));
                }
                Ok(report)
            },
        ),
        Check::new(
            "qm.representative-uniqueness",
            "homogeneous representative of c_x + db equals c_x, b finitely supported",
            |cfg| {
                let fam = family(cfg)?;
                let grp = f2();
                let mut rng = cfg.rng_for("qm.representative-uniqueness");
                let mut report = CheckReport::new();
                for n in &fam {
                    let mut table = BTreeMap::new();
                    for x in nontrivial_words(&mut rng, 12, 3) {
                        table.insert(vec![x], q(rng.gen_range(-3..=3)));
                    }
                    let b = ScalarCochain::finite_support(grp.clone(), 1, table);
                    let c = n.cx.to_cochain(grp.clone()).add(&coboundary(&b));
                    let triples: Vec<_> = (0..20).map(|_| {
                        let t = words(&mut rng, 3, 4);
                        (t[0].clone(), t[1].clone(), t[2].clone())
                    }).collect();
                    let rep = homogeneous_representative(&c, &triples, cfg.window, cfg.n_max)?;
                    let items: Vec<_> = (0..cfg.n(100)).map(|_| words(&mut rng, 2, 4)).collect();
                    report.merge(run_samples(&items, |t| {
                        let (a, b) = (rep.eval(&t[0], &t[1])?, n.cx.eval(&t[0], &t[1])?);
                        Ok(Outcome::check(a == b, || format!("word {}: ({}, {}) gives {} vs {}", n.word, t[0], t[1], fq(&a), fq(&b))))
                    }));
                }
                Ok(report)
            },
        ),
        Check::new("qm.nontriviality-witness", "phi_ab([a,b]) = 1, phi_ab(a) = phi_ab(b) = 0", |cfg| {
            let phi = HomogenizedQm::new(
                crate::quasimorphism::Quasimorphism::brooks(&ReducedWord::parse("ab")?)?,
                cfg.window,
                cfg.n_max,
            )?;
            let mut r = CheckReport::new();
            for (i, (x, want)) in [("aba'b'", q(1)), ("a", q(0)), ("b", q(0))].into_iter().enumerate() {
                let v = phi.eval(&ReducedWord::parse(x)?)?;
                r.record(i, v == want, || format!("phi_ab({x}) = {}", fq(&v)));
            }
            Ok(r)
        }),
    ]
}
