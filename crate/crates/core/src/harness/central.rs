use num_traits::{Signed, Zero};
use rand::Rng as _;

use super::context::{f2, Builder, FiberCtx};
use super::{fq, run_samples, Check, Outcome, RunConfig};
use crate::error::Result;
use crate::extension::{CentralElem, CentralExtensionModel};
use crate::group::{AutGroup, FreeGroup, Group, ReducedWord};
use crate::cochain::ScalarCochain;
use crate::quasimorphism::{defect_estimate, homogeneous_cocycle, HomogeneousCocycle, Quasimorphism};
use crate::rational::{q_frac, Q};
use crate::sampling::Rng;

type Elem = CentralElem<ReducedWord>;

/// The model `R x_c F2` for `c` the defect cocycle of `Phi_ab`, plus the
/// homogeneous cocycle of `Phi_ab` computed without the model.
pub(crate) struct ModelCtx {
    pub model: CentralExtensionModel<FreeGroup>,
    pub cx: HomogeneousCocycle,
    /// Sampled defect of `Phi_ab`.
    pub defect: Q,
}

pub(crate) fn model_ctx(cfg: &RunConfig) -> Result<ModelCtx> {
    let qm = Quasimorphism::brooks(&ReducedWord::parse("ab")?)?;
    let cx = homogeneous_cocycle(&qm, cfg.window, cfg.n_max)?;
    let q2 = qm.clone();
    let c = ScalarCochain::scalar_fn(f2(), 2, move |t| Ok(q2.defect_at(&t[0], &t[1])));
    let model = CentralExtensionModel::new(f2(), c, cfg.window, cfg.n_max)?;
    let defect = defect_estimate(&qm, &FreeGroup::new(2), 2000, cfg.seed);
    Ok(ModelCtx { model, cx, defect })
}

pub(crate) fn sample_elem(rng: &mut Rng) -> Elem {
    (q_frac(rng.gen_range(-6..=6), rng.gen_range(1..=4)), FreeGroup::new(2).sample(rng, 8))
}

fn same(m: &CentralExtensionModel<FreeGroup>, x: &Elem, y: &Elem, what: &str) -> Outcome {
    Outcome::check(x == y, || format!("{what}: {} != {}", m.format(x), m.format(y)))
}

struct Sample<A> {
    a: A,
    b: A,
    x: Elem,
    y: Elem,
    u: Q,
}

fn samples<X: Group, P: Group>(ctx: &FiberCtx<X, P>, rng: &mut Rng, n: usize) -> Vec<Sample<P::Elem>> {
    (0..n)
        .map(|_| Sample {
            a: (ctx.sample_pi)(rng),
            b: (ctx.sample_pi)(rng),
            x: sample_elem(rng),
            y: sample_elem(rng),
            u: q_frac(rng.gen_range(-9..=9), rng.gen_range(1..=5)),
        })
        .collect()
}

/// Runs `body` on seeded samples of the fixture built by `b`.
fn with_samples<X: Group + 'static, P: Group + 'static>(
    cfg: &RunConfig,
    b: Builder<X, P>,
    id: &str,
    default: usize,
    body: impl Fn(&ModelCtx, &FiberCtx<X, P>, &Sample<P::Elem>) -> Result<Outcome> + Sync,
) -> Result<crate::check::CheckReport>
where
    P::Elem: Sync,
{
    let ctx = b()?;
    let m = model_ctx(cfg)?;
    let mut rng = cfg.rng_for(id);
    let items = samples(&ctx, &mut rng, cfg.n(default));
    Ok(run_samples(&items, |s| body(&m, &ctx, s)))
}

pub(crate) fn central_checks_for<X: Group + 'static, P: Group + 'static>(b: Builder<X, P>) -> Vec<Check>
where
    P::Elem: Sync,
{
    vec![
        Check::new("central.model-basics", "j(t) central, phi(s_x(g)) = 0, |Phi - phi| <= D on samples", move |cfg| {
            with_samples(cfg, b, "central.model-basics", 200, |mc, _, s| {
                let m = &mc.model;
                let j = m.central(s.u.clone());
                let d = &mc.defect;
                let gap = m.big_phi(&s.x) - m.phi(&s.x)?;
                Ok(same(m, &m.mul(&j, &s.x)?, &m.mul(&s.x, &j)?, "j(t) x = x j(t)")
                    .and(Outcome::check(m.phi(&m.s_x(&s.x.1)?)?.is_zero(), || format!("phi(s_x({})) != 0", s.x.1)))
                    .and(Outcome::check(gap.abs() <= *d, || format!("|Phi - phi| = {} at {}", fq(&gap), m.format(&s.x)))))
            })
        }),
        Check::new("central.cx-route", "central part of s_x(g) s_x(h) s_x(gh)^-1 = phi_ab(gh) - phi_ab(g) - phi_ab(h)", move |cfg| {
            with_samples(cfg, b, "central.cx-route", 200, |mc, _, s| {
                let (g, h) = (&s.x.1, &s.y.1);
                let (l, r) = (mc.model.cx(g, h)?, mc.cx.eval(g, h)?);
                Ok(Outcome::check(l == r, || format!("c_x({g}, {h}): model {} vs homogenization {}", fq(&l), fq(&r))))
            })
        }),
        Check::new("central.lift-projection", "p(Psi_bar(a) x) = Psi(a) p(x)", move |cfg| {
            with_samples(cfg, b, "central.lift-projection", 200, |mc, ctx, s| {
                let k = &ctx.fx.kernel;
                let img = mc.model.psi_bar(&k.psi(&s.a), &s.x)?;
                let want = k.apply_psi(&s.a, &s.x.1);
                Ok(Outcome::check(img.1 == want, || format!("p(Psi_bar x) = {} vs {}", img.1, want)))
            })
        }),
        Check::new("central.lift-phi-invariance", "phi(Psi_bar(a) x) = phi(x)", move |cfg| {
            with_samples(cfg, b, "central.lift-phi-invariance", 200, |mc, ctx, s| {
                let m = &mc.model;
                let img = m.psi_bar(&ctx.fx.kernel.psi(&s.a), &s.x)?;
                let (l, r) = (m.phi(&img)?, m.phi(&s.x)?);
                Ok(Outcome::check(l == r, || format!("phi(Psi_bar {}) = {} vs {}", m.format(&s.x), fq(&l), fq(&r))))
            })
        }),
        Check::new("central.lift-conjugation", "Psi_bar(a)(x y x^-1) = Psi_bar(a)(x) Psi_bar(a)(y) Psi_bar(a)(x)^-1", move |cfg| {
            with_samples(cfg, b, "central.lift-conjugation", 200, |mc, ctx, s| {
                let m = &mc.model;
                let pa = ctx.fx.kernel.psi(&s.a);
                let l = m.psi_bar(&pa, &m.conj(&s.x, &s.y)?)?;
                let r = m.conj(&m.psi_bar(&pa, &s.x)?, &m.psi_bar(&pa, &s.y)?)?;
                Ok(same(m, &l, &r, "conjugation"))
            })
        }),
        Check::new("central.lift-composition", "Psi_bar(a) Psi_bar(b) = i_{F_x(a,b)} Psi_bar(ab), F_x = s_x o f", move |cfg| {
            with_samples(cfg, b, "central.lift-composition", 200, |mc, ctx, s| {
                let (m, k) = (&mc.model, &ctx.fx.kernel);
                let l = m.psi_bar(&k.psi(&s.a), &m.psi_bar(&k.psi(&s.b), &s.x)?)?;
                let ab = k.pi().mul(&s.a, &s.b);
                let r = m.conj(&m.big_f(k, &s.a, &s.b)?, &m.psi_bar(&k.psi(&ab), &s.x)?)?;
                Ok(same(m, &l, &r, "composition"))
            })
        }),
        Check::new("central.lift-central-multiplicativity", "Psi_bar(a)(x z) = Psi_bar(a)(x) Psi_bar(a)(z) = Psi_bar(a)(x) z, z = (u, 1)", move |cfg| {
            with_samples(cfg, b, "central.lift-central-multiplicativity", 200, |mc, ctx, s| {
                let m = &mc.model;
                let pa = ctx.fx.kernel.psi(&s.a);
                let z = m.central(s.u.clone());
                let l = m.psi_bar(&pa, &m.mul(&s.x, &z)?)?;
                let pz = m.psi_bar(&pa, &z)?;
                let r = m.mul(&m.psi_bar(&pa, &s.x)?, &pz)?;
                Ok(same(m, &l, &r, "multiplicativity").and(same(m, &pz, &z, "Psi_bar fixes the centre")))
            })
        }),
        Check::new("central.psi-bar-identity", "Psi_bar(1) = id", move |cfg| {
            with_samples(cfg, b, "central.psi-bar-identity", 200, |mc, ctx, s| {
                let one = ctx.fx.kernel.pi().identity();
                let img = mc.model.psi_bar(&ctx.fx.kernel.psi(&one), &s.x)?;
                Ok(same(&mc.model, &img, &s.x, "Psi_bar(1)"))
            })
        }),
        Check::new("central.section-laws", "s_x(g^n) = s_x(g)^n, s_x(g h g^-1) = s_x(g) s_x(h) s_x(g)^-1", move |cfg| {
            with_samples(cfg, b, "central.section-laws", 200, |mc, _, s| {
                let m = &mc.model;
                let (g, h) = (&s.x.1, &s.y.1);
                let mut out = same(m, &m.s_x(&g.mul(h).mul(&g.inverse()))?, &m.conj(&m.s_x(g)?, &m.s_x(h)?)?, "conjugation");
                for n in -3..=3 {
                    out = out.and(same(m, &m.s_x(&g.power(n)?)?, &m.power(&m.s_x(g)?, n)?, &format!("power {n}")));
                }
                Ok(out)
            })
        }),
        Check::new("central.deviation", "Psi_bar(a)(x) Psi_bar(a)(y) Psi_bar(a)(xy)^-1 = ((Psi(a)^* c_x) - c_x)(p x, p y)", move |cfg| {
            with_samples(cfg, b, "central.deviation", 200, |mc, ctx, s| {
                let (m, k) = (&mc.model, &ctx.fx.kernel);
                let pa = k.psi(&s.a);
                let xy = m.mul(&s.x, &s.y)?;
                let dev = m.product([&m.psi_bar(&pa, &s.x)?, &m.psi_bar(&pa, &s.y)?, &m.inv(&m.psi_bar(&pa, &xy)?)?])?;
                let (g, h) = (&s.x.1, &s.y.1);
                let g2 = k.g();
                let want = mc.cx.eval(&g2.apply(&pa, g), &g2.apply(&pa, h))? - mc.cx.eval(g, h)?;
                let got = m.central_part(&dev)?;
                Ok(Outcome::check(got == want, || format!("deviation {} vs {}", fq(&got), fq(&want))))
            })
        }),
    ]
}
