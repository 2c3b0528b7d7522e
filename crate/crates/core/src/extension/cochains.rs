use std::sync::Arc;

use num_traits::Zero;

use super::data::ExtensionData;
use super::kernel::AbstractKernel;
use crate::chains::{m2_chain, L1Chain};
use crate::cochain::{pair, BoundedCochain, Module, Pairing, ScalarCochain};
use crate::error::{Error, Result};
use crate::group::{AutGroup, Group};
use crate::rational::Q;

/// `c(Psi(a)(f(b,c)), f(a,bc)) - c(f(a,b), f(ab,c))`, for any scalar 2-cochain `c` on `G`.
pub fn composition_value<P: Group, G: AutGroup + 'static>(
    c: &ScalarCochain<G>,
    k: &AbstractKernel<P, G>,
    a: &P::Elem,
    b: &P::Elem,
    d: &P::Elem,
) -> Result<Q> {
    let pi = k.pi();
    let lhs = c.eval(&[k.apply_psi(a, &k.f(b, d)), k.f(a, &pi.mul(b, d))])?;
    let rhs = c.eval(&[k.f(a, b), k.f(&pi.mul(a, b), d)])?;
    Ok(lhs - rhs)
}

/// The composition cochain as a scalar 3-cochain on `Pi`.
pub fn composition_cochain<P: Group + 'static, G: AutGroup + 'static>(
    c: &ScalarCochain<G>,
    k: &Arc<AbstractKernel<P, G>>,
) -> ScalarCochain<P> {
    let (cc, kk) = (c.clone(), k.clone());
    let out = ScalarCochain::scalar_fn(k.pi_arc(), 3, move |t| composition_value(&cc, &kk, &t[0], &t[1], &t[2]));
    match c.norm_bound() {
        Some(b) => out.with_norm_bound(b * Q::from_integer(2.into())),
        None => out,
    }
}

/// `(a^* c)(g, h) = c(a g, a h)`, keeping the homogeneous flag.
pub fn pullback_scalar<G: AutGroup + 'static>(c: &ScalarCochain<G>, a: &G::Aut) -> ScalarCochain<G> {
    let (cc, g, aut) = (c.clone(), c.group().clone(), a.clone());
    let mut out = ScalarCochain::scalar_fn(c.group().clone(), 2, move |t| {
        cc.eval(&[g.apply(&aut, &t[0]), g.apply(&aut, &t[1])])
    });
    if let Some(b) = c.norm_bound() {
        out = out.with_norm_bound(b.clone());
    }
    if c.is_homogeneous() {
        out = out.mark_homogeneous();
    }
    out
}

type ActionFn<A, G> = Arc<dyn Fn(&<A as Group>::Elem) -> <G as AutGroup>::Aut + Send + Sync>;

/// Degree-2 l1-chains on `G` standing for classes in reduced l1-homology.
/// `A` acts by pushing chains forward along `action`; two values are equal
/// when every cocycle of `family` pairs to the same number on them.
pub struct L1ClassModule<A: Group, G: AutGroup> {
    g: Arc<G>,
    action: ActionFn<A, G>,
    family: Vec<ScalarCochain<G>>,
}

impl<A: Group, G: AutGroup + 'static> L1ClassModule<A, G> {
    pub fn new(g: Arc<G>, action: ActionFn<A, G>, family: Vec<ScalarCochain<G>>) -> Self {
        L1ClassModule { g, action, family }
    }

    pub fn family(&self) -> &[ScalarCochain<G>] {
        &self.family
    }

    /// Pairings of `z` with each cocycle of the family.
    pub fn pairings(&self, z: &L1Chain<G::Elem>) -> Result<Vec<Pairing>> {
        self.family.iter().map(|c| pair(c, z)).collect()
    }
}

impl<A: Group, G: AutGroup + 'static> Module<A> for L1ClassModule<A, G> {
    type Value = L1Chain<G::Elem>;

    fn zero(&self) -> Self::Value {
        L1Chain::zero(2)
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.add(b).expect("chains of one degree")
    }

    fn neg(&self, a: &Self::Value) -> Self::Value {
        a.neg()
    }

    fn act(&self, x: &A::Elem, v: &Self::Value) -> Self::Value {
        v.pushforward(&*self.g, &(self.action)(x))
    }

    fn equal(&self, a: &Self::Value, b: &Self::Value) -> bool {
        let Ok(d) = a.sub(b) else { return false };
        self.pairings(&d).map(|ps| ps.iter().all(|p| p.value.is_zero() && p.error_bound.is_zero())).unwrap_or(false)
    }
}

pub type ClassCochain<A, G> = BoundedCochain<A, L1ClassModule<A, G>>;

/// Class module over `Pi` acting through `Psi`.
pub fn pi_module<P: Group + 'static, G: AutGroup + 'static>(
    k: &Arc<AbstractKernel<P, G>>,
    family: Vec<ScalarCochain<G>>,
) -> Arc<L1ClassModule<P, G>> {
    let kk = k.clone();
    Arc::new(L1ClassModule::new(k.g_arc(), Arc::new(move |a: &P::Elem| kk.psi(a)), family))
}

/// `theta(a,b,c) = m2(Psi(a)(f(b,c)), f(a,bc)) - m2(f(a,b), f(ab,c))`.
pub fn theta_chain<P: Group, G: AutGroup>(
    k: &AbstractKernel<P, G>,
    cutoff: u32,
    a: &P::Elem,
    b: &P::Elem,
    c: &P::Elem,
) -> Result<L1Chain<G::Elem>> {
    let (pi, g) = (k.pi(), k.g());
    let first = m2_chain(g, &k.apply_psi(a, &k.f(b, c)), &k.f(a, &pi.mul(b, c)), cutoff)?;
    let second = m2_chain(g, &k.f(a, b), &k.f(&pi.mul(a, b), c), cutoff)?;
    first.sub(&second)
}

pub fn theta_cochain<P: Group + 'static, G: AutGroup + 'static>(
    k: &Arc<AbstractKernel<P, G>>,
    cutoff: u32,
    module: Arc<L1ClassModule<P, G>>,
) -> ClassCochain<P, G> {
    let kk = k.clone();
    BoundedCochain::from_fn(k.pi_arc(), module, 3, move |t| theta_chain(&kk, cutoff, &t[0], &t[1], &t[2]))
}

/// Checks that `k2` is `k` moved by `h`: `Psi2(a) = i_{h(a)} Psi(a)` and
/// `f2(a,b) h(ab) z = h(a) Psi(a)(h(b)) f(a,b)` with `z` central.
pub fn check_kernel_change<P: Group, G: AutGroup>(
    k: &AbstractKernel<P, G>,
    k2: &AbstractKernel<P, G>,
    h: &dyn Fn(&P::Elem) -> G::Elem,
    samples: &[P::Elem],
) -> Result<()> {
    let (pi, g) = (k.pi(), k.g());
    for a in samples {
        let moved = g.compose(&g.inner(&h(a)), &k.psi(a));
        if !g.aut_eq(&moved, &k2.psi(a)) {
            return Err(Error::KernelRelationViolation(format!("Psi'({}) != i_h Psi", pi.format_elem(a))));
        }
        for b in samples {
            let ab = pi.mul(a, b);
            let rhs = g.product([&h(a), &k.apply_psi(a, &h(b)), &k.f(a, b)]);
            let z = g.mul(&g.inv(&g.mul(&k2.f(a, b), &h(&ab))), &rhs);
            if !g.is_central(&z) {
                return Err(Error::KernelRelationViolation(format!(
                    "f' relation off the centre at ({}, {}): {}",
                    pi.format_elem(a),
                    pi.format_elem(b),
                    g.format_elem(&z)
                )));
            }
        }
    }
    Ok(())
}

/// `lambda(a,b) = m2(h(a), Psi(a)(h(b))) + m2(h(a) Psi(a)(h(b)), f(a,b)) - m2(f'(a,b), h(ab))`,
/// so that `theta_{Psi,f} - theta_{Psi',f'} = d lambda`.
///
/// The middle term pairs the product `h(a) Psi(a)(h(b))` with `f(a,b)`:
/// expanding `s_x(u) s_x(v) s_x(w)` gives `c(u,v) + c(uv,w)`. Using
/// `m2(Psi(a)(h(b)), f(a,b))` there leaves an error that is not a coboundary.
pub fn lambda_chain<P: Group, G: AutGroup>(
    k: &AbstractKernel<P, G>,
    k2: &AbstractKernel<P, G>,
    h: &dyn Fn(&P::Elem) -> G::Elem,
    cutoff: u32,
    a: &P::Elem,
    b: &P::Elem,
) -> Result<L1Chain<G::Elem>> {
    let g = k.g();
    let (ha, moved) = (h(a), k.apply_psi(a, &h(b)));
    let one = m2_chain(g, &ha, &moved, cutoff)?;
    let two = m2_chain(g, &g.mul(&ha, &moved), &k.f(a, b), cutoff)?;
    let three = m2_chain(g, &k2.f(a, b), &h(&k.pi().mul(a, b)), cutoff)?;
    one.add(&two)?.sub(&three)
}

pub fn lambda_cochain<P: Group + 'static, G: AutGroup + 'static>(
    k: &Arc<AbstractKernel<P, G>>,
    k2: &Arc<AbstractKernel<P, G>>,
    h: Arc<dyn Fn(&P::Elem) -> G::Elem + Send + Sync>,
    cutoff: u32,
    module: Arc<L1ClassModule<P, G>>,
) -> ClassCochain<P, G> {
    let (kk, kk2) = (k.clone(), k2.clone());
    BoundedCochain::from_fn(k.pi_arc(), module, 2, move |t| lambda_chain(&kk, &kk2, &*h, cutoff, &t[0], &t[1]))
}

/// `T(x,y) = m2(f(sx, sy), h(xy)^-1) - m2(Psi(sx)(h(y)^-1), h(x)^-1)` with `s = sigma`.
pub fn t_chain<X: Group, P: Group, G: AutGroup>(
    ext: &ExtensionData<X, P, G>,
    k: &AbstractKernel<P, G>,
    cutoff: u32,
    x: &X::Elem,
    y: &X::Elem,
) -> Result<L1Chain<G::Elem>> {
    let g = ext.g();
    let (sx, sy) = (ext.sigma(x), ext.sigma(y));
    let xy = ext.gamma().mul(x, y);
    let first = m2_chain(g, &k.f(&sx, &sy), &g.inv(&ext.h(&xy)), cutoff)?;
    let second = m2_chain(g, &k.apply_psi(&sx, &g.inv(&ext.h(y))), &g.inv(&ext.h(x)), cutoff)?;
    first.sub(&second)
}

/// Class module over `Gamma` acting by conjugation on the normal subgroup.
pub fn gamma_module<X: Group + 'static, P: Group + 'static, G: AutGroup + 'static>(
    ext: &ExtensionData<X, P, G>,
    g: Arc<G>,
    family: Vec<ScalarCochain<G>>,
) -> Arc<L1ClassModule<X, G>> {
    let e = ext.clone();
    Arc::new(L1ClassModule::new(g, Arc::new(move |x: &X::Elem| e.conj_action(x)), family))
}

pub fn t_cochain<X: Group + 'static, P: Group + 'static, G: AutGroup + 'static>(
    ext: &ExtensionData<X, P, G>,
    gamma: Arc<X>,
    k: &Arc<AbstractKernel<P, G>>,
    cutoff: u32,
    module: Arc<L1ClassModule<X, G>>,
) -> ClassCochain<X, G> {
    let (e, kk) = (ext.clone(), k.clone());
    BoundedCochain::from_fn(gamma, module, 2, move |t| t_chain(&e, &kk, cutoff, &t[0], &t[1]))
}

/// `sigma^* theta` as a cochain on `Gamma`.
pub fn pulled_back_theta<X: Group + 'static, P: Group + 'static, G: AutGroup + 'static>(
    ext: &ExtensionData<X, P, G>,
    gamma: Arc<X>,
    k: &Arc<AbstractKernel<P, G>>,
    cutoff: u32,
    module: Arc<L1ClassModule<X, G>>,
) -> ClassCochain<X, G> {
    let (e, kk) = (ext.clone(), k.clone());
    BoundedCochain::from_fn(gamma, module, 3, move |t| {
        theta_chain(&kk, cutoff, &e.sigma(&t[0]), &e.sigma(&t[1]), &e.sigma(&t[2]))
    })
}

/// `Psi(a)_* m2(Psi(a)^-1 x, Psi(a)^-1 y) - m2(x, y)`, which pairs to zero
/// with every homogeneous cocycle when `m2` is invariant.
pub fn m2_invariance_defect<P: Group, G: AutGroup>(
    k: &AbstractKernel<P, G>,
    cutoff: u32,
    a: &P::Elem,
    x: &G::Elem,
    y: &G::Elem,
) -> Result<L1Chain<G::Elem>> {
    let g = k.g();
    let psi = k.psi(a);
    let back = |z: &G::Elem| g.apply_inverse(&psi, z);
    m2_chain(g, &back(x), &back(y), cutoff)?.pushforward(g, &psi).sub(&m2_chain(g, x, y, cutoff)?)
}
