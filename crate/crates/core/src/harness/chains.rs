use num_traits::Zero;

use super::context::{f2, family_cochains, nontrivial_words, pairs_to_zero, words};
use super::{fq, run_samples, Check, Outcome};
use crate::chains::{m2_chain, m_chain, HomChain, L1Chain};
use crate::group::{FreeGroup, ReducedWord};
use crate::rational::{pow2_inv, q, q_frac};

pub fn chain_checks() -> Vec<Check> {
    vec![
        Check::new("chains.m-boundary", "d m(g) = [g] - 2^-N [g^(2^N)], N in {4, 8, 12}", |cfg| {
            let g = FreeGroup::new(2);
            let mut rng = cfg.rng_for("chains.m-boundary");
            let items: Vec<(u32, ReducedWord)> = [4u32, 8, 12]
                .into_iter()
                .flat_map(|n| nontrivial_words(&mut rng, cfg.n(50), 12).into_iter().map(move |x| (n, x)))
                .collect();
            Ok(run_samples(&items, |(n, x)| {
                let dm = m_chain(&g, x, *n)?.boundary(&g)?;
                let expect = L1Chain::from_terms(&g, 1, [(vec![x.clone()], q(1)), (vec![x.power(1 << n)?], -pow2_inv(*n))])?;
                let residual = dm.sub(&L1Chain::basis(&g, vec![x.clone()]))?.support_norm();
                Ok(Outcome::check(dm.support() == expect.support(), || format!("d m({x}) at N = {n} differs"))
                    .and(Outcome::check(residual == pow2_inv(*n), || {
                        format!("|d m({x}) - [g]|_1 = {} at N = {n}", fq(&residual))
                    })))
            }))
        }),
        Check::new("chains.contracting-homotopy", "s d + d s = id on homogeneous chains, n in {1, 2, 3}", |cfg| {
            let g = FreeGroup::new(2);
            let mut rng = cfg.rng_for("chains.contracting-homotopy");
            let items: Vec<HomChain<ReducedWord>> = (1..=3usize)
                .flat_map(|n| (0..cfg.n(100)).map(move |_| n).collect::<Vec<_>>())
                .map(|n| {
                    let terms = words(&mut rng, 4 * (n + 1), 5);
                    HomChain::from_terms(n, terms.chunks(n + 1).enumerate().map(|(i, t)| (t.to_vec(), q(i as i64 - 1))))
                })
                .collect();
            Ok(run_samples(&items, |z| {
                let lhs = z.boundary().cone(&g).add(&z.cone(&g).boundary());
                Ok(Outcome::check(lhs == *z, || format!("homotopy fails in degree {}", z.degree())))
            }))
        }),
        Check::new("chains.boundary-nilpotent", "d d = 0 and |dz|_1 <= (n+1)|z|_1", |cfg| {
            let g = FreeGroup::new(2);
            let mut rng = cfg.rng_for("chains.boundary-nilpotent");
            let items: Vec<L1Chain<ReducedWord>> = (2..=4usize)
                .flat_map(|n| (0..cfg.n(50)).map(move |_| n).collect::<Vec<_>>())
                .map(|n| {
                    let xs = words(&mut rng, 8 * n, 4);
                    let terms = xs.chunks(n).enumerate().map(|(i, t)| (t.to_vec(), q_frac(i as i64 % 5 - 2, 1 + i as i64 % 3)));
                    L1Chain::from_terms(&g, n, terms).expect("tuples of one length")
                })
                .collect();
            Ok(run_samples(&items, |z| {
                let dz = z.boundary(&g)?;
                let ddz = dz.boundary(&g)?;
                let bound = q(z.degree() as i64 + 1) * z.support_norm();
                Ok(Outcome::check(ddz.is_zero(), || format!("dd z != 0 in degree {}", z.degree()))
                    .and(Outcome::check(dz.support_norm() <= bound, || format!("|dz|_1 = {}", fq(&dz.support_norm())))))
            }))
        }),
        Check::new("chains.m2-norm", "|m2(g,h)|_1 <= 4 and tail <= 3 2^-N", |cfg| {
            let g = FreeGroup::new(2);
            let mut rng = cfg.rng_for("chains.m2-norm");
            let items: Vec<_> = (0..cfg.n(200)).map(|_| words(&mut rng, 2, 10)).collect();
            let n = cfg.cutoff;
            Ok(run_samples(&items, |t| {
                let m2 = m2_chain(&g, &t[0], &t[1], n)?;
                let full = m2.expanded(&g)?;
                let total = full.support_norm() + full.tail_bound();
                Ok(Outcome::check(m2.tail_bound() <= q(3) * pow2_inv(n), || format!("tail {}", fq(&m2.tail_bound())))
                    .and(Outcome::check(total <= q(4), || format!("|m2({}, {})| = {}", t[0], t[1], fq(&total)))))
            }))
        }),
        Check::new(
            "chains.m2-cocycle-mod-boundaries",
            "<c_x, m2(h,k) - m2(gh,k) + m2(g,hk) - m2(g,h)> = 0",
            |cfg| {
                let grp = f2();
                let fam = family_cochains(cfg, &grp)?;
                let names = cfg.words.clone();
                let mut rng = cfg.rng_for("chains.m2-cocycle-mod-boundaries");
                let items: Vec<_> = (0..cfg.n(200)).map(|_| words(&mut rng, 3, 8)).collect();
                let n = cfg.cutoff;
                Ok(run_samples(&items, |t| {
                    let (x, y, z) = (&t[0], &t[1], &t[2]);
                    let m = |a: &ReducedWord, b: &ReducedWord| m2_chain(&*grp, a, b, n);
                    let dm = m(y, z)?.sub(&m(&x.mul(y), z)?)?.add(&m(x, &y.mul(z))?)?.sub(&m(x, y)?)?;
                    pairs_to_zero(&fam, &names, &dm, || format!("({x}, {y}, {z})"))
                }))
            },
        ),
        Check::new("chains.m-pairs-to-zero", "<c_x, m(g)> = 0", |cfg| {
            let grp = f2();
            let fam = family_cochains(cfg, &grp)?;
            let names = cfg.words.clone();
            let mut rng = cfg.rng_for("chains.m-pairs-to-zero");
            let items = nontrivial_words(&mut rng, cfg.n(100), 10);
            Ok(run_samples(&items, |x| {
                let m = m_chain(&*grp, x, cfg.cutoff)?;
                let out = pairs_to_zero(&fam, &names, &m, || format!("m({x})"))?;
                Ok(out.and(Outcome::check(!m.tail_bound().is_zero(), || "m-chain lost its tail".into())))
            }))
        }),
    ]
}
