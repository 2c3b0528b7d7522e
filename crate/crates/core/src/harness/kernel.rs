use std::sync::Arc;

use rand::Rng as _;

use super::{run_samples, Check, Outcome, RunConfig};
use crate::check::CheckReport;
use crate::error::Result;
use crate::extension::fixtures::{
    corrupted_kernel, f2_semidirect_z, sample_z, split_swap, z4_extension, z_elem, Fixture, SwapProduct,
};
use crate::extension::{check_nonabelian_cocycle, obstruction_coboundary, obstruction_k, AbstractKernel};
use crate::group::{AutGroup, FiniteGroup, FreeGroup, Group, ReducedWord, TwistedProduct};
use crate::sampling::Rng;

type Sampler<E> = fn(&mut Rng) -> E;

/// A fixture with element samplers for all three groups.
struct Case<X: Group, P: Group, G: AutGroup> {
    fx: Fixture<X, P, G>,
    pi: Sampler<P::Elem>,
    gamma: Sampler<X::Elem>,
    fiber: Sampler<G::Elem>,
}

fn z_small(rng: &mut Rng) -> ReducedWord {
    sample_z(rng, 4)
}

fn f2_word(rng: &mut Rng) -> ReducedWord {
    FreeGroup::new(2).sample(rng, 6)
}

fn z2(rng: &mut Rng) -> usize {
    rng.gen_range(0..2)
}

fn z4(rng: &mut Rng) -> usize {
    rng.gen_range(0..4)
}

fn semidirect_case() -> Result<Case<TwistedProduct<FreeGroup, FreeGroup>, FreeGroup, FreeGroup>> {
    Ok(Case {
        fx: f2_semidirect_z()?,
        pi: z_small,
        gamma: |r| (z_small(r), f2_word(r)),
        fiber: f2_word,
    })
}

fn swap_case() -> Result<Case<SwapProduct, FiniteGroup, FreeGroup>> {
    Ok(Case { fx: split_swap()?, pi: z2, gamma: |r| (z2(r), f2_word(r)), fiber: f2_word })
}

fn z4_case() -> Result<Case<FiniteGroup, FiniteGroup, FiniteGroup>> {
    Ok(Case { fx: z4_extension()?, pi: z2, gamma: z4, fiber: z2 })
}

/// Prefixes every witness with the fixture it came from.
fn tagged(name: &str, mut r: CheckReport) -> CheckReport {
    for w in &mut r.failures {
        w.detail = format!("{name}: {}", w.detail);
    }
    r
}

/// Runs `f` on each of the three fixtures and merges the reports.
fn over_cases(cfg: &RunConfig, id: &str, f: impl FnOnce(&mut Acc, &mut Rng) -> Result<()>) -> Result<CheckReport> {
    let mut rng = cfg.rng_for(id);
    let mut acc = Acc { report: CheckReport::new(), samples: cfg.samples };
    f(&mut acc, &mut rng)?;
    Ok(acc.report)
}

struct Acc {
    report: CheckReport,
    samples: Option<usize>,
}

impl Acc {
    fn push(&mut self, name: &str, r: CheckReport) {
        self.report.merge(tagged(name, r));
    }

    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

fn triples<X: Group, P: Group, G: AutGroup>(c: &Case<X, P, G>, rng: &mut Rng, n: usize) -> Vec<(P::Elem, P::Elem, P::Elem)> {
    (0..n).map(|_| ((c.pi)(rng), (c.pi)(rng), (c.pi)(rng))).collect()
}

fn eq14<X: Group, P: Group, G: AutGroup>(c: &Case<X, P, G>, rng: &mut Rng, n: usize) -> CheckReport {
    check_nonabelian_cocycle(&c.fx.kernel, &triples(c, rng, n))
}

fn outer<X: Group, P: Group, G: AutGroup>(c: &Case<X, P, G>, rng: &mut Rng, n: usize) -> CheckReport {
    let pairs: Vec<_> = (0..n).map(|_| ((c.pi)(rng), (c.pi)(rng))).collect();
    let mut r = c.fx.kernel.check_outer_relation(&pairs);
    let pis: Vec<_> = (0..n).map(|_| (c.pi)(rng)).collect();
    r.record(n, c.fx.kernel.is_normalized(&pis), || "kernel is not normalized".into());
    r
}

fn assoc<P: Group + 'static, G: AutGroup + 'static>(
    k: Arc<AbstractKernel<P, G>>,
    pi: Sampler<P::Elem>,
    fiber: Sampler<G::Elem>,
    rng: &mut Rng,
    n: usize,
) -> CheckReport {
    let tp = TwistedProduct::new_unchecked(k);
    let xs: Vec<_> = (0..n).map(|_| [0; 3].map(|_| (pi(rng), fiber(rng)))).collect();
    run_samples(&xs, |[x, y, z]| {
        let l = tp.mul(&tp.mul(x, y), z);
        let r = tp.mul(x, &tp.mul(y, z));
        let inv = tp.is_identity(&tp.mul(x, &tp.inv(x)));
        Ok(Outcome::check(l == r, || {
            format!("({} {}) {} != {} ({} {})", tp.format_elem(x), tp.format_elem(y), tp.format_elem(z), tp.format_elem(x), tp.format_elem(y), tp.format_elem(z))
        })
        .and(Outcome::check(inv, || format!("x x^-1 != 1 at {}", tp.format_elem(x)))))
    })
}

fn k_trivial<X: Group, P: Group + 'static, G: AutGroup + 'static>(c: &Case<X, P, G>, rng: &mut Rng, n: usize) -> CheckReport {
    let ts = triples(c, rng, n);
    let k = &c.fx.kernel;
    run_samples(&ts, |(a, b, d)| {
        let v = obstruction_k(k, a, b, d)?;
        Ok(Outcome::check(k.g().is_identity(&v), || {
            format!("K({}, {}, {}) = {}", k.pi().format_elem(a), k.pi().format_elem(b), k.pi().format_elem(d), k.g().format_elem(&v))
        }))
    })
}

fn k_cocycle<X: Group, P: Group + 'static, G: AutGroup + 'static>(c: &Case<X, P, G>, rng: &mut Rng, n: usize) -> CheckReport {
    let ts: Vec<_> = (0..n).map(|_| [0; 4].map(|_| (c.pi)(rng))).collect();
    let k = &c.fx.kernel;
    run_samples(&ts, |t| {
        let v = obstruction_coboundary(k, [&t[0], &t[1], &t[2], &t[3]])?;
        Ok(Outcome::check(k.g().is_identity(&v), || format!("dK = {}", k.g().format_elem(&v))))
    })
}

fn invariants<X: Group + 'static, P: Group + 'static, G: AutGroup + 'static>(c: &Case<X, P, G>, rng: &mut Rng, n: usize) -> CheckReport {
    let pis: Vec<_> = (0..n).map(|_| (c.pi)(rng)).collect();
    let gs: Vec<_> = (0..n).map(|_| (c.fiber)(rng)).collect();
    let xs: Vec<_> = (0..n.min(10)).map(|_| (c.gamma)(rng)).collect();
    let mut r = c.fx.ext.check_invariants(&pis, &gs, &xs);
    let xs: Vec<_> = (0..n).map(|_| (c.gamma)(rng)).collect();
    r.merge(c.fx.ext.check_invariants(&[], &[], &xs));
    r
}

/// Exhaustive kernel checks for a kernel read from a spec file.
pub fn kernel_spec_checks(k: Arc<AbstractKernel<FiniteGroup, FreeGroup>>) -> Vec<Check> {
    let n = k.pi().order();
    let triples: Arc<Vec<(usize, usize, usize)>> =
        Arc::new((0..n * n * n).map(|i| (i / (n * n), (i / n) % n, i % n)).collect());
    let (k1, k2, k3, t1, t2) = (k.clone(), k.clone(), k.clone(), triples.clone(), triples);
    vec![
        Check::new("kernel.nonabelian-cocycle", "Psi(a)(f(b,c)) f(a,bc) = f(a,b) f(ab,c)", move |_| {
            Ok(check_nonabelian_cocycle(&k1, &t1))
        }),
        Check::new("kernel.outer-relation", "Psi(a) Psi(b) = i_{f(a,b)} Psi(ab), Psi(1) = id, f normalized", move |_| {
            let pairs: Vec<_> = (0..n * n).map(|i| (i / n, i % n)).collect();
            let mut r = k2.check_outer_relation(&pairs);
            r.record(pairs.len(), k2.is_normalized(&(0..n).collect::<Vec<_>>()), || "kernel is not normalized".into());
            Ok(r)
        }),
        Check::new("kernel.obstruction-trivial", "K(a,b,c) = 1, central", move |_| {
            Ok(run_samples(&t2, |(a, b, c)| {
                let v = obstruction_k(&k3, a, b, c)?;
                Ok(Outcome::check(v.is_empty(), || format!("K({a}, {b}, {c}) = {v}")))
            }))
        }),
    ]
}

macro_rules! each_case {
    ($acc:expr, |$c:ident| $body:expr) => {{
        {
            let $c = semidirect_case()?;
            let r = $body;
            $acc.push($c.fx.name, r);
        }
        {
            let $c = swap_case()?;
            let r = $body;
            $acc.push($c.fx.name, r);
        }
        {
            let $c = z4_case()?;
            let r = $body;
            $acc.push($c.fx.name, r);
        }
    }};
}

pub fn kernel_checks() -> Vec<Check> {
    vec![
        Check::new(
            "kernel.nonabelian-cocycle",
            "Psi(a)(f(b,c)) f(a,bc) = f(a,b) f(ab,c)",
            |cfg| {
                over_cases(cfg, "kernel.nonabelian-cocycle", |acc, rng| {
                    let n = acc.samples(100);
                    each_case!(acc, |c| eq14(&c, rng, n));
                    Ok(())
                })
            },
        ),
        Check::new("kernel.outer-relation", "Psi(a) Psi(b) = i_{f(a,b)} Psi(ab), Psi(1) = id, f normalized", |cfg| {
            over_cases(cfg, "kernel.outer-relation", |acc, rng| {
                let n = acc.samples(100);
                each_case!(acc, |c| outer(&c, rng, n));
                Ok(())
            })
        }),
        Check::new(
            "kernel.twisted-associativity",
            "(a,g)(b,h) = (ab, g Psi(a)(h) f(a,b)) is associative with inverses",
            |cfg| {
                over_cases(cfg, "kernel.twisted-associativity", |acc, rng| {
                    let n = acc.samples(100);
                    each_case!(acc, |c| assoc(c.fx.kernel.clone(), c.pi, c.fiber, rng, n));
                    Ok(())
                })
            },
        ),
        Check::new(
            "kernel.corrupted-kernel-detected",
            "f(t,t) replaced by f(t,t) b breaks the cocycle condition and associativity",
            |cfg| {
                let fx = f2_semidirect_z()?;
                let (t, b) = (z_elem(1), ReducedWord::generator(2));
                let bad = Arc::new(corrupted_kernel(&fx.kernel, t.clone(), t.clone(), b));
                let mut rng = cfg.rng_for("kernel.corrupted-kernel-detected");
                let mut ts = vec![(t.clone(), t.clone(), t.clone())];
                ts.extend((0..cfg.n(100)).map(|_| (z_small(&mut rng), z_small(&mut rng), z_small(&mut rng))));
                let eq = check_nonabelian_cocycle(&bad, &ts);
                let tp = TwistedProduct::new_unchecked(bad);
                let x = (t.clone(), ReducedWord::identity());
                let assoc_broken = tp.mul(&tp.mul(&x, &x), &x) != tp.mul(&x, &tp.mul(&x, &x));
                let mut r = CheckReport::new();
                r.record(0, !eq.passed(), || "no witness triple for the corrupted kernel".into());
                r.record(1, assoc_broken, || "twisted product of the corrupted kernel stayed associative at (t,1)^3".into());
                r.note = eq.failures.first().map(|w| format!("witness: {}", w.detail));
                Ok(r)
            },
        ),
        Check::new("kernel.obstruction-trivial", "K(a,b,c) = Psi(a)(f(b,c)) f(a,bc) f(ab,c)^-1 f(a,b)^-1 = 1, central", |cfg| {
            over_cases(cfg, "kernel.obstruction-trivial", |acc, rng| {
                let n = acc.samples(100);
                each_case!(acc, |c| k_trivial(&c, rng, n));
                Ok(())
            })
        }),
        Check::new("kernel.obstruction-cocycle", "d K = 1 in the Pi-module Z(G)", |cfg| {
            over_cases(cfg, "kernel.obstruction-cocycle", |acc, rng| {
                let n = acc.samples(50);
                each_case!(acc, |c| k_cocycle(&c, rng, n));
                Ok(())
            })
        }),
        Check::new(
            "kernel.extension-invariants",
            "sigma s = id, sigma i = 1, h(i(g)) = g, x = i(h(x)) s(sigma(x)), i(G) normal",
            |cfg| {
                over_cases(cfg, "kernel.extension-invariants", |acc, rng| {
                    let n = acc.samples(50);
                    each_case!(acc, |c| invariants(&c, rng, n));
                    Ok(())
                })
            },
        ),
    ]
}
