use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::group::{AutGroup, Group};

pub type PsiFn<P, G> = Arc<dyn Fn(&<P as Group>::Elem) -> <G as AutGroup>::Aut + Send + Sync>;
pub type DefectFn<P, G> =
    Arc<dyn Fn(&<P as Group>::Elem, &<P as Group>::Elem) -> <G as Group>::Elem + Send + Sync>;

/// A pair `(Psi, f)`: lifts `Psi(a)` of an outer action to `Aut(G)` together
/// with `f(a, b)` satisfying `Psi(a) Psi(b) = i_{f(a,b)} Psi(ab)`.
pub struct AbstractKernel<P: Group, G: AutGroup> {
    pi: Arc<P>,
    g: Arc<G>,
    psi_fn: PsiFn<P, G>,
    f_fn: DefectFn<P, G>,
    psi_cache: Mutex<HashMap<P::Elem, G::Aut>>,
    f_cache: Mutex<HashMap<(P::Elem, P::Elem), G::Elem>>,
}

impl<P: Group, G: AutGroup> AbstractKernel<P, G> {
    pub fn new(pi: Arc<P>, g: Arc<G>, psi: PsiFn<P, G>, f: DefectFn<P, G>) -> Self {
        AbstractKernel {
            pi,
            g,
            psi_fn: psi,
            f_fn: f,
            psi_cache: Mutex::new(HashMap::new()),
            f_cache: Mutex::new(HashMap::new()),
        }
    }

    /// `f = 1` and `Psi` a homomorphism `Pi -> Aut(G)`.
    pub fn split(pi: Arc<P>, g: Arc<G>, psi: PsiFn<P, G>) -> Self {
        let one = g.identity();
        Self::new(pi, g, psi, Arc::new(move |_, _| one.clone()))
    }

    pub fn pi(&self) -> &P {
        &self.pi
    }

    pub fn g(&self) -> &G {
        &self.g
    }

    pub fn pi_arc(&self) -> Arc<P> {
        self.pi.clone()
    }

    pub fn g_arc(&self) -> Arc<G> {
        self.g.clone()
    }

    pub fn psi(&self, a: &P::Elem) -> G::Aut {
        if let Some(x) = self.psi_cache.lock().unwrap().get(a) {
            return x.clone();
        }
        let x = (self.psi_fn)(a);
        self.psi_cache.lock().unwrap().insert(a.clone(), x.clone());
        x
    }

    pub fn apply_psi(&self, a: &P::Elem, x: &G::Elem) -> G::Elem {
        self.g.apply(&self.psi(a), x)
    }

    pub fn f(&self, a: &P::Elem, b: &P::Elem) -> G::Elem {
        let key = (a.clone(), b.clone());
        if let Some(x) = self.f_cache.lock().unwrap().get(&key) {
            return x.clone();
        }
        let x = (self.f_fn)(a, b);
        self.f_cache.lock().unwrap().insert(key, x.clone());
        x
    }

    /// `Psi(1) = id` and `f(a, 1) = f(1, a) = 1` on the given elements.
    pub fn is_normalized(&self, samples: &[P::Elem]) -> bool {
        let one = self.pi.identity();
        self.g.aut_eq(&self.psi(&one), &self.g.identity_aut())
            && samples.iter().all(|a| {
                self.g.is_identity(&self.f(a, &one)) && self.g.is_identity(&self.f(&one, a))
            })
    }

    /// `Psi(a) o Psi(b) = i_{f(a,b)} o Psi(ab)` compared on generators.
    pub fn check_outer_relation(&self, pairs: &[(P::Elem, P::Elem)]) -> CheckReport {
        let mut report = CheckReport::new();
        for (i, (a, b)) in pairs.iter().enumerate() {
            let lhs = self.g.compose(&self.psi(a), &self.psi(b));
            let ab = self.pi.mul(a, b);
            let rhs = self.g.compose(&self.g.inner(&self.f(a, b)), &self.psi(&ab));
            report.record(i, self.g.aut_eq(&lhs, &rhs), || {
                format!(
                    "Psi({})Psi({}) != i_f Psi(ab)",
                    self.pi.format_elem(a),
                    self.pi.format_elem(b)
                )
            });
        }
        report
    }
}

/// Evaluates `Psi(a)(f(b,c)) f(a,bc) = f(a,b) f(ab,c)` on every triple.
pub fn check_nonabelian_cocycle<P: Group, G: AutGroup>(
    k: &AbstractKernel<P, G>,
    triples: &[(P::Elem, P::Elem, P::Elem)],
) -> CheckReport {
    let (pi, g) = (k.pi(), k.g());
    let mut report = CheckReport::new();
    for (i, (a, b, c)) in triples.iter().enumerate() {
        let lhs = g.mul(&k.apply_psi(a, &k.f(b, c)), &k.f(a, &pi.mul(b, c)));
        let rhs = g.mul(&k.f(a, b), &k.f(&pi.mul(a, b), c));
        report.record(i, lhs == rhs, || {
            format!(
                "({}, {}, {}): {} != {}",
                pi.format_elem(a),
                pi.format_elem(b),
                pi.format_elem(c),
                g.format_elem(&lhs),
                g.format_elem(&rhs)
            )
        });
    }
    report
}

/// `K(a,b,c) = Psi(a)(f(b,c)) f(a,bc) f(ab,c)^-1 f(a,b)^-1`, required to be central.
pub fn obstruction_k<P: Group, G: AutGroup>(
    k: &AbstractKernel<P, G>,
    a: &P::Elem,
    b: &P::Elem,
    c: &P::Elem,
) -> Result<G::Elem> {
    let (pi, g) = (k.pi(), k.g());
    let value = g.product([
        &k.apply_psi(a, &k.f(b, c)),
        &k.f(a, &pi.mul(b, c)),
        &g.inv(&k.f(&pi.mul(a, b), c)),
        &g.inv(&k.f(a, b)),
    ]);
    if !g.is_central(&value) {
        return Err(Error::CentralityViolation(format!(
            "K({}, {}, {}) = {}",
            pi.format_elem(a),
            pi.format_elem(b),
            pi.format_elem(c),
            g.format_elem(&value)
        )));
    }
    Ok(value)
}

/// Coboundary of `K` in the `Pi`-module `Z(G)`, written multiplicatively.
pub fn obstruction_coboundary<P: Group, G: AutGroup>(
    k: &AbstractKernel<P, G>,
    t: [&P::Elem; 4],
) -> Result<G::Elem> {
    let (pi, g) = (k.pi(), k.g());
    let [a, b, c, d] = t;
    let kk = |x: &P::Elem, y: &P::Elem, z: &P::Elem| obstruction_k(k, x, y, z);
    Ok(g.product([
        &k.apply_psi(a, &kk(b, c, d)?),
        &g.inv(&kk(&pi.mul(a, b), c, d)?),
        &kk(a, &pi.mul(b, c), d)?,
        &g.inv(&kk(a, b, &pi.mul(c, d))?),
        &kk(a, b, c)?,
    ]))
}
