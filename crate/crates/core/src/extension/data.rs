use std::sync::Arc;

use super::kernel::AbstractKernel;
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::group::{AutGroup, Group, TwistedProduct};

type Map<A, B> = Arc<dyn Fn(&A) -> B + Send + Sync>;

/// An extension `1 -> G -> Gamma -> Pi -> 1` with a chosen section `s`.
pub struct ExtensionData<X: Group, P: Group, G: AutGroup> {
    gamma: Arc<X>,
    pi: Arc<P>,
    g: Arc<G>,
    sigma: Map<X::Elem, P::Elem>,
    incl: Map<G::Elem, X::Elem>,
    restrict: Map<X::Elem, Option<G::Elem>>,
    section: Map<P::Elem, X::Elem>,
}

impl<X: Group, P: Group, G: AutGroup> Clone for ExtensionData<X, P, G> {
    fn clone(&self) -> Self {
        ExtensionData {
            gamma: self.gamma.clone(),
            pi: self.pi.clone(),
            g: self.g.clone(),
            sigma: self.sigma.clone(),
            incl: self.incl.clone(),
            restrict: self.restrict.clone(),
            section: self.section.clone(),
        }
    }
}

impl<X: Group, P: Group, G: AutGroup> ExtensionData<X, P, G> {
    /// `restrict` inverts `incl` on its image and is `None` elsewhere.
    pub fn new(
        gamma: Arc<X>,
        pi: Arc<P>,
        g: Arc<G>,
        sigma: Map<X::Elem, P::Elem>,
        incl: Map<G::Elem, X::Elem>,
        restrict: Map<X::Elem, Option<G::Elem>>,
        section: Map<P::Elem, X::Elem>,
    ) -> Result<Self> {
        let e = ExtensionData { gamma, pi, g, sigma, incl, restrict, section };
        let s1 = e.section(&e.pi.identity());
        if !e.gamma.is_identity(&s1) {
            return Err(Error::SectionNotNormalized(e.gamma.format_elem(&s1)));
        }
        Ok(e)
    }

    pub fn gamma(&self) -> &X {
        &self.gamma
    }

    pub fn gamma_arc(&self) -> Arc<X> {
        self.gamma.clone()
    }

    pub fn g_arc(&self) -> Arc<G> {
        self.g.clone()
    }

    pub fn pi(&self) -> &P {
        &self.pi
    }

    pub fn g(&self) -> &G {
        &self.g
    }

    pub fn sigma(&self, x: &X::Elem) -> P::Elem {
        (self.sigma)(x)
    }

    pub fn include(&self, g: &G::Elem) -> X::Elem {
        (self.incl)(g)
    }

    pub fn restrict(&self, x: &X::Elem) -> Option<G::Elem> {
        (self.restrict)(x)
    }

    pub fn section(&self, a: &P::Elem) -> X::Elem {
        (self.section)(a)
    }

    /// Same extension with another section.
    pub fn with_section(&self, section: Map<P::Elem, X::Elem>) -> Result<Self> {
        let mut e = self.clone();
        e.section = section;
        let s1 = e.section(&e.pi.identity());
        if !e.gamma.is_identity(&s1) {
            return Err(Error::SectionNotNormalized(e.gamma.format_elem(&s1)));
        }
        Ok(e)
    }

    fn restrict_or_panic(&self, x: &X::Elem) -> G::Elem {
        self.restrict(x).unwrap_or_else(|| {
            panic!("{} expected to lie in the kernel", self.gamma.format_elem(x))
        })
    }

    /// `h(x)` with `x = i(h(x)) s(sigma(x))`.
    pub fn h(&self, x: &X::Elem) -> G::Elem {
        let s = self.section(&self.sigma(x));
        self.restrict_or_panic(&self.gamma.mul(x, &self.gamma.inv(&s)))
    }

    /// Conjugation by `x` restricted to the normal subgroup.
    pub fn conj_action(&self, x: &X::Elem) -> G::Aut {
        let gm = &*self.gamma;
        let xi = gm.inv(x);
        let fwd = |y: &G::Elem| self.restrict_or_panic(&gm.conj(x, &self.include(y)));
        let bwd = |y: &G::Elem| self.restrict_or_panic(&gm.conj(&xi, &self.include(y)));
        self.g.aut_from_maps(&fwd, &bwd).expect("conjugation restricts to an automorphism")
    }

    /// `sigma o s = id`, `sigma o i = 1`, `h(i(g)) = g`, `i(G)` normal, and the
    /// decomposition `x = i(h(x)) s(sigma(x))`.
    pub fn check_invariants(&self, pis: &[P::Elem], gs: &[G::Elem], xs: &[X::Elem]) -> CheckReport {
        let (gm, pm) = (&*self.gamma, &*self.pi);
        let mut r = CheckReport::new();
        for (i, a) in pis.iter().enumerate() {
            r.record(i, self.sigma(&self.section(a)) == *a, || format!("sigma(s({})) != id", pm.format_elem(a)));
        }
        for (i, g) in gs.iter().enumerate() {
            let ig = self.include(g);
            r.record(i, pm.is_identity(&self.sigma(&ig)), || format!("sigma(i({})) != 1", self.g.format_elem(g)));
            r.record(i, self.h(&ig) == *g, || format!("h(i({})) != g", self.g.format_elem(g)));
            for x in xs {
                let ok = self.restrict(&gm.conj(x, &ig)).is_some();
                r.record(i, ok, || format!("i(G) not normal at {}", gm.format_elem(x)));
            }
        }
        for (i, x) in xs.iter().enumerate() {
            let back = gm.mul(&self.include(&self.h(x)), &self.section(&self.sigma(x)));
            r.record(i, back == *x, || format!("decomposition fails at {}", gm.format_elem(x)));
        }
        r
    }
}

impl<P: Group + 'static, G: AutGroup + 'static> ExtensionData<TwistedProduct<P, G>, P, G> {
    /// The twisted product with its standard projection and inclusion.
    pub fn from_twisted(
        tp: Arc<TwistedProduct<P, G>>,
        section: Map<P::Elem, (P::Elem, G::Elem)>,
    ) -> Result<Self> {
        let pi = tp.kernel().pi_arc();
        let g = tp.kernel().g_arc();
        let one_pi = pi.identity();
        let one_pi2 = one_pi.clone();
        Self::new(
            tp,
            pi,
            g,
            Arc::new(|x: &(P::Elem, G::Elem)| x.0.clone()),
            Arc::new(move |y: &G::Elem| (one_pi.clone(), y.clone())),
            Arc::new(move |x: &(P::Elem, G::Elem)| (x.0 == one_pi2).then(|| x.1.clone())),
            section,
        )
    }
}

/// The kernel of a section: `f(a,b) = s(a)s(b)s(ab)^-1` and `Psi(a)` conjugation by `s(a)`.
pub fn section_data<X, P, G>(ext: &ExtensionData<X, P, G>) -> Result<AbstractKernel<P, G>>
where
    X: Group + 'static,
    P: Group + 'static,
    G: AutGroup + 'static,
{
    let s1 = ext.section(&ext.pi().identity());
    if !ext.gamma().is_identity(&s1) {
        return Err(Error::SectionNotNormalized(ext.gamma().format_elem(&s1)));
    }
    let e1 = ext.clone();
    let e2 = ext.clone();
    let psi = Arc::new(move |a: &P::Elem| e1.conj_action(&e1.section(a)));
    let f = Arc::new(move |a: &P::Elem, b: &P::Elem| {
        let gm = e2.gamma();
        let ab = e2.pi().mul(a, b);
        let x = gm.product([&e2.section(a), &e2.section(b), &gm.inv(&e2.section(&ab))]);
        e2.restrict_or_panic(&x)
    });
    Ok(AbstractKernel::new(ext.pi.clone(), ext.g.clone(), psi, f))
}
