use std::sync::Arc;

use super::{AutGroup, Group};
use crate::error::{Error, Result};
use crate::extension::{check_nonabelian_cocycle, AbstractKernel};
use crate::sampling::Rng;

/// `Pi x_f G` with `(a, g)(b, h) = (ab, g Psi(a)(h) f(a, b))`. The pair
/// `(a, g)` stands for `i(g) s(a)`.
pub struct TwistedProduct<P: Group, G: AutGroup> {
    kernel: Arc<AbstractKernel<P, G>>,
}

impl<P: Group, G: AutGroup> Clone for TwistedProduct<P, G> {
    fn clone(&self) -> Self {
        TwistedProduct { kernel: self.kernel.clone() }
    }
}

impl<P: Group, G: AutGroup> TwistedProduct<P, G> {
    /// Checks the non-abelian cocycle condition on `triples` first.
    pub fn new(kernel: Arc<AbstractKernel<P, G>>, triples: &[(P::Elem, P::Elem, P::Elem)]) -> Result<Self> {
        let report = check_nonabelian_cocycle(&kernel, triples);
        if let Some(w) = report.failures.first() {
            return Err(Error::KernelRelationViolation(w.detail.clone()));
        }
        Ok(TwistedProduct { kernel })
    }

    /// Skips the cocycle check; the multiplication need not be associative.
    pub fn new_unchecked(kernel: Arc<AbstractKernel<P, G>>) -> Self {
        TwistedProduct { kernel }
    }

    pub fn kernel(&self) -> &Arc<AbstractKernel<P, G>> {
        &self.kernel
    }

    pub fn base(&self) -> &P {
        self.kernel.pi()
    }

    pub fn fiber(&self) -> &G {
        self.kernel.g()
    }

    pub fn include(&self, g: &G::Elem) -> (P::Elem, G::Elem) {
        (self.base().identity(), g.clone())
    }

    pub fn split(&self, a: &P::Elem) -> (P::Elem, G::Elem) {
        (a.clone(), self.fiber().identity())
    }
}

impl<P: Group, G: AutGroup> Group for TwistedProduct<P, G> {
    type Elem = (P::Elem, G::Elem);

    fn identity(&self) -> Self::Elem {
        (self.base().identity(), self.fiber().identity())
    }

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let (pi, g) = (self.base(), self.fiber());
        let fiber = g.mul(
            &g.mul(&x.1, &self.kernel.apply_psi(&x.0, &y.1)),
            &self.kernel.f(&x.0, &y.0),
        );
        (pi.mul(&x.0, &y.0), fiber)
    }

    fn inv(&self, x: &Self::Elem) -> Self::Elem {
        let (pi, g) = (self.base(), self.fiber());
        let a_inv = pi.inv(&x.0);
        // solve g Psi(a)(h) f(a, a^-1) = 1 for h
        let target = g.mul(&g.inv(&x.1), &g.inv(&self.kernel.f(&x.0, &a_inv)));
        let h = g.apply_inverse(&self.kernel.psi(&x.0), &target);
        (a_inv, h)
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        self.base().contains(&x.0) && self.fiber().contains(&x.1)
    }

    fn random_element(&self, rng: &mut Rng, length: usize) -> Self::Elem {
        (self.base().random_element(rng, length), self.fiber().random_element(rng, length))
    }

    fn format_elem(&self, x: &Self::Elem) -> String {
        format!("({}, {})", self.base().format_elem(&x.0), self.fiber().format_elem(&x.1))
    }
}
