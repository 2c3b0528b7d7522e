//! The three shipped extensions, plus the variants used by the checks: a
//! corrupted kernel, a decorated section of the split fixture and a change of
//! kernel along `h`.

use std::sync::Arc;

use rand::Rng as _;

use super::data::{section_data, ExtensionData};
use super::kernel::AbstractKernel;
use crate::error::Result;
use crate::group::{AutGroup, FiniteGroup, FreeAutomorphism, FreeGroup, Group, ReducedWord, TwistedProduct};
use crate::sampling::Rng;

/// An extension with a section and the kernel read off that section.
pub struct Fixture<X: Group, P: Group, G: AutGroup> {
    pub name: &'static str,
    pub ext: ExtensionData<X, P, G>,
    pub kernel: Arc<AbstractKernel<P, G>>,
}

impl<X: Group + 'static, P: Group + 'static, G: AutGroup + 'static> Fixture<X, P, G> {
    fn from_ext(name: &'static str, ext: ExtensionData<X, P, G>) -> Result<Self> {
        let kernel = Arc::new(section_data(&ext)?);
        Ok(Fixture { name, ext, kernel })
    }

    /// Same extension, section `s'(a) = i(h(a)) s(a)`.
    pub fn moved_by(&self, h: Arc<dyn Fn(&P::Elem) -> G::Elem + Send + Sync>) -> Result<Self> {
        let e = self.ext.clone();
        let section = Arc::new(move |a: &P::Elem| e.gamma().mul(&e.include(&h(a)), &e.section(a)));
        Fixture::from_ext(self.name, self.ext.with_section(section)?)
    }
}

pub type SemidirectZ = TwistedProduct<FreeGroup, FreeGroup>;
pub type SwapProduct = TwistedProduct<FiniteGroup, FreeGroup>;

/// `u: a -> a b a^-1, b -> a`, with `u^2 = i_{ab}` and `u(ab) = ab`.
pub fn u_automorphism(f2: &FreeGroup) -> FreeAutomorphism {
    f2.automorphism_from_strs(&["aba'", "a"], &["b", "b'ab"]).expect("u is an automorphism")
}

/// `t^n` in `Pi = Z`, written as a word in one generator.
pub fn z_elem(n: i64) -> ReducedWord {
    ReducedWord::generator(1).power(n).expect("small exponent")
}

pub fn z_value(x: &ReducedWord) -> i64 {
    x.letters().iter().map(|&l| l.signum() as i64).sum()
}

/// Uniform `t^n` with `|n| <= bound`.
pub fn sample_z(rng: &mut Rng, bound: i64) -> ReducedWord {
    z_elem(rng.gen_range(-bound..=bound))
}

/// `F2 x_u Z` with the decorated section `s(n) = (n, a^(n mod 3))`.
pub fn f2_semidirect_z() -> Result<Fixture<SemidirectZ, FreeGroup, FreeGroup>> {
    let (z, f2) = (Arc::new(FreeGroup::new(1)), Arc::new(FreeGroup::new(2)));
    let u = u_automorphism(&f2);
    let f2c = f2.clone();
    let split = Arc::new(AbstractKernel::split(z, f2, Arc::new(move |n: &ReducedWord| f2c.aut_power(&u, z_value(n)))));
    let tp = Arc::new(TwistedProduct::new_unchecked(split));
    let section = Arc::new(|n: &ReducedWord| (n.clone(), ReducedWord::generator(1).power(z_value(n).rem_euclid(3)).unwrap()));
    Fixture::from_ext("f2-semidirect-z", ExtensionData::from_twisted(tp, section)?)
}

/// The split section `s(n) = (n, 1)` of the same product.
pub fn f2_semidirect_z_split() -> Result<Fixture<SemidirectZ, FreeGroup, FreeGroup>> {
    let fx = f2_semidirect_z()?;
    let one = ReducedWord::identity();
    let ext = fx.ext.with_section(Arc::new(move |n: &ReducedWord| (n.clone(), one.clone())))?;
    Fixture::from_ext("f2-semidirect-z", ext)
}

/// `h(t^n) = b^n`, the kernel change used for independence of the kernel.
pub fn b_power_shift() -> Arc<dyn Fn(&ReducedWord) -> ReducedWord + Send + Sync> {
    Arc::new(|n: &ReducedWord| ReducedWord::generator(2).power(z_value(n)).unwrap())
}

/// `Z/2 -> Z/4 -> Z/2` with `G = {0, 2}` and `s(1) = 1`.
pub fn z4_extension() -> Result<Fixture<FiniteGroup, FiniteGroup, FiniteGroup>> {
    let (z4, z2) = (Arc::new(FiniteGroup::cyclic(4)), Arc::new(FiniteGroup::cyclic(2)));
    let ext = ExtensionData::new(
        z4,
        z2.clone(),
        z2,
        Arc::new(|x: &usize| x % 2),
        Arc::new(|g: &usize| 2 * g),
        Arc::new(|x: &usize| (x % 2 == 0).then_some(x / 2)),
        Arc::new(|a: &usize| *a),
    )?;
    Fixture::from_ext("z4-hs", ext)
}

fn swap_product() -> Arc<SwapProduct> {
    let (z2, f2) = (Arc::new(FiniteGroup::cyclic(2)), Arc::new(FreeGroup::new(2)));
    let (id, sw) = (f2.identity_aut(), f2.swap());
    let psi = Arc::new(move |a: &usize| if *a == 0 { id.clone() } else { sw.clone() });
    Arc::new(TwistedProduct::new_unchecked(Arc::new(AbstractKernel::split(z2, f2, psi))))
}

/// `F2 x Z/2` with `Z/2` swapping the generators, split section.
pub fn split_swap() -> Result<Fixture<SwapProduct, FiniteGroup, FreeGroup>> {
    let section = Arc::new(|a: &usize| (*a, ReducedWord::identity()));
    Fixture::from_ext("split-swap", ExtensionData::from_twisted(swap_product(), section)?)
}

/// The same product with `s(1) = (1, a)`, so that `f(1,1) = ab` and
/// `Psi(1) = i_a o swap`.
pub fn split_swap_decorated() -> Result<Fixture<SwapProduct, FiniteGroup, FreeGroup>> {
    let section = Arc::new(|a: &usize| (*a, if *a == 0 { ReducedWord::identity() } else { ReducedWord::generator(1) }));
    Fixture::from_ext("split-swap", ExtensionData::from_twisted(swap_product(), section)?)
}

/// `k` with `f(a, b)` replaced by `f(a, b) * by`.
pub fn corrupted_kernel<P: Group + 'static, G: AutGroup + 'static>(
    k: &Arc<AbstractKernel<P, G>>,
    a: P::Elem,
    b: P::Elem,
    by: G::Elem,
) -> AbstractKernel<P, G> {
    let (k1, k2, g) = (k.clone(), k.clone(), k.g_arc());
    AbstractKernel::new(
        k.pi_arc(),
        k.g_arc(),
        Arc::new(move |x: &P::Elem| k1.psi(x)),
        Arc::new(move |x: &P::Elem, y: &P::Elem| {
            let f = k2.f(x, y);
            if *x == a && *y == b {
                g.mul(&f, &by)
            } else {
                f
            }
        }),
    )
}
