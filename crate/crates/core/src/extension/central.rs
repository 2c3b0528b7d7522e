use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::kernel::AbstractKernel;
use crate::cochain::ScalarCochain;
use crate::error::{Error, Result};
use crate::group::{AutGroup, Group};
use crate::quasimorphism::stabilize;
use crate::rational::{fmt_q, Q};

/// An element `(t, g)` of `R x_c G`.
pub type CentralElem<E> = (Q, E);

/// `R x_c G` with `(t, g)(u, h) = (t + u + c(g, h), gh)`, for a normalized
/// bounded 2-cocycle `c`. `Phi(t, g) = t`; its homogenization is read off the
/// increments of `Phi` along powers taken in the model.
pub struct CentralExtensionModel<G: Group> {
    group: Arc<G>,
    c: ScalarCochain<G>,
    window: usize,
    n_max: usize,
    psi_cache: Mutex<HashMap<G::Elem, Q>>,
}

impl<G: Group + 'static> CentralExtensionModel<G> {
    pub fn new(group: Arc<G>, c: ScalarCochain<G>, window: usize, n_max: usize) -> Result<Self> {
        if c.degree() != 2 {
            return Err(Error::DegreeMismatch(format!("central extension needs a 2-cocycle, got degree {}", c.degree())));
        }
        Ok(CentralExtensionModel { group, c, window, n_max, psi_cache: Mutex::new(HashMap::new()) })
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn identity(&self) -> CentralElem<G::Elem> {
        (Q::zero(), self.group.identity())
    }

    /// `j(t) = (t, 1)`
    pub fn central(&self, t: Q) -> CentralElem<G::Elem> {
        (t, self.group.identity())
    }

    pub fn mul(&self, x: &CentralElem<G::Elem>, y: &CentralElem<G::Elem>) -> Result<CentralElem<G::Elem>> {
        let c = self.c.eval(&[x.1.clone(), y.1.clone()])?;
        Ok((&x.0 + &y.0 + c, self.group.mul(&x.1, &y.1)))
    }

    pub fn inv(&self, x: &CentralElem<G::Elem>) -> Result<CentralElem<G::Elem>> {
        let gi = self.group.inv(&x.1);
        let c = self.c.eval(&[x.1.clone(), gi.clone()])?;
        Ok((-&x.0 - c, gi))
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a CentralElem<G::Elem>>) -> Result<CentralElem<G::Elem>>
    where
        G::Elem: 'a,
    {
        let mut acc = self.identity();
        for x in items {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn conj(&self, x: &CentralElem<G::Elem>, y: &CentralElem<G::Elem>) -> Result<CentralElem<G::Elem>> {
        self.product([x, y, &self.inv(x)?])
    }

    pub fn power(&self, x: &CentralElem<G::Elem>, n: i64) -> Result<CentralElem<G::Elem>> {
        let base = if n < 0 { self.inv(x)? } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    pub fn project(&self, x: &CentralElem<G::Elem>) -> G::Elem {
        x.1.clone()
    }

    /// `Phi(t, g) = t`
    pub fn big_phi(&self, x: &CentralElem<G::Elem>) -> Q {
        x.0.clone()
    }

    /// `phi(0, g)`: the eventual increment `Phi(x^{k+1}) - Phi(x^k)` for
    /// `x = (0, g)`, powers computed with the model law.
    pub fn psi(&self, g: &G::Elem) -> Result<Q> {
        if self.group.is_identity(g) {
            return Ok(Q::zero());
        }
        if let Some(v) = self.psi_cache.lock().unwrap().get(g) {
            return Ok(v.clone());
        }
        let x = (Q::zero(), g.clone());
        let mut power = x.clone();
        let v = stabilize(self.window, self.n_max, |_| {
            let next = self.mul(&power, &x)?;
            let inc = &next.0 - &power.0;
            power = next;
            Ok(inc)
        })?;
        self.psi_cache.lock().unwrap().insert(g.clone(), v.clone());
        Ok(v)
    }

    /// `phi(t, g) = t + phi(0, g)`, the central line being additive for `phi`.
    pub fn phi(&self, x: &CentralElem<G::Elem>) -> Result<Q> {
        Ok(&x.0 + self.psi(&x.1)?)
    }

    /// The section `s_x(g) = (-psi(g), g)` on which `phi` vanishes.
    pub fn s_x(&self, g: &G::Elem) -> Result<CentralElem<G::Elem>> {
        Ok((-self.psi(g)?, g.clone()))
    }

    /// Central coordinate of `s_x(g) s_x(h) s_x(gh)^-1`.
    pub fn cx(&self, g: &G::Elem, h: &G::Elem) -> Result<Q> {
        let gh = self.group.mul(g, h);
        let z = self.product([&self.s_x(g)?, &self.s_x(h)?, &self.inv(&self.s_x(&gh)?)?])?;
        self.central_part(&z)
    }

    /// `t` for an element `(t, 1)`; anything else is an invariant violation.
    pub fn central_part(&self, x: &CentralElem<G::Elem>) -> Result<Q> {
        if !self.group.is_identity(&x.1) {
            return Err(Error::InvariantViolation(format!(
                "({}, {}) is off the central line",
                fmt_q(&x.0),
                self.group.format_elem(&x.1)
            )));
        }
        Ok(x.0.clone())
    }

    pub fn format(&self, x: &CentralElem<G::Elem>) -> String {
        format!("({}, {})", fmt_q(&x.0), self.group.format_elem(&x.1))
    }
}

impl<G: AutGroup + 'static> CentralExtensionModel<G> {
    /// `Psi_bar(a)(g_bar) = s_x(a(p(g_bar))) phi(g_bar)`, for an automorphism `a` of `G`.
    pub fn psi_bar(&self, a: &G::Aut, x: &CentralElem<G::Elem>) -> Result<CentralElem<G::Elem>> {
        let image = self.s_x(&self.group.apply(a, &x.1))?;
        self.mul(&image, &self.central(self.phi(x)?))
    }

    /// `F_x(a, b) = s_x(f(a, b))`
    pub fn big_f<P: Group>(&self, k: &AbstractKernel<P, G>, a: &P::Elem, b: &P::Elem) -> Result<CentralElem<G::Elem>> {
        self.s_x(&k.f(a, b))
    }

    /// `K_bar(a,b,c) = Psi_bar(a)(F_x(b,c)) F_x(a,bc) F_x(ab,c)^-1 F_x(a,b)^-1`.
    pub fn big_k<P: Group>(
        &self,
        k: &AbstractKernel<P, G>,
        a: &P::Elem,
        b: &P::Elem,
        c: &P::Elem,
    ) -> Result<CentralElem<G::Elem>> {
        let pi = k.pi();
        let first = self.psi_bar(&k.psi(a), &self.big_f(k, b, c)?)?;
        self.product([
            &first,
            &self.big_f(k, a, &pi.mul(b, c))?,
            &self.inv(&self.big_f(k, &pi.mul(a, b), c)?)?,
            &self.inv(&self.big_f(k, a, b)?)?,
        ])
    }

    /// Coboundary of `K_bar` in the centre, written multiplicatively, with
    /// `Psi_bar(a)` acting on the leading term.
    pub fn big_k_coboundary<P: Group>(&self, k: &AbstractKernel<P, G>, t: [&P::Elem; 4]) -> Result<CentralElem<G::Elem>> {
        let pi = k.pi();
        let [a, b, c, d] = t;
        let kk = |x: &P::Elem, y: &P::Elem, z: &P::Elem| self.big_k(k, x, y, z);
        self.product([
            &self.psi_bar(&k.psi(a), &kk(b, c, d)?)?,
            &self.inv(&kk(&pi.mul(a, b), c, d)?)?,
            &kk(a, &pi.mul(b, c), d)?,
            &self.inv(&kk(a, b, &pi.mul(c, d))?)?,
            &kk(a, b, c)?,
        ])
    }
}
