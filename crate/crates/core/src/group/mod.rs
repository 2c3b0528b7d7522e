//! Group models with exact normal forms: free groups, finite Cayley tables
//! and twisted products `Pi x_f G`.

mod finite;
mod free;
mod twisted;
mod word;

use std::fmt::Debug;
use std::hash::Hash;

pub use finite::{FiniteGroup, Permutation};
pub use free::{FreeAutomorphism, FreeGroup};
pub use twisted::TwistedProduct;
pub use word::ReducedWord;

use crate::error::{Error, Result};
use crate::sampling::Rng;

pub trait Group: Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Whether `a` is a valid element of this model.
    fn contains(&self, a: &Self::Elem) -> bool;
    /// A deterministic random element; `length` is the word length for free
    /// groups and is only used to distinguish the identity (`0`) elsewhere.
    fn random_element(&self, rng: &mut Rng, length: usize) -> Self::Elem;
    fn format_elem(&self, a: &Self::Elem) -> String;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn power(&self, a: &Self::Elem, k: i64) -> Result<Self::Elem> {
        if k.unsigned_abs() > ReducedWord::MAX_EXPONENT {
            return Err(Error::ResourceCap(format!("power exponent {k} exceeds 2^16")));
        }
        let mut sq = if k < 0 { self.inv(a) } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }

    /// `g h g^-1`
    fn conj(&self, g: &Self::Elem, h: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, h), &self.inv(g))
    }

    fn checked_mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(Error::MixedModel(format!("{x:?}")));
            }
        }
        Ok(self.mul(a, b))
    }

    fn product<'a>(&self, items: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    /// Random element whose length is uniform in `0..=max_len`.
    fn sample(&self, rng: &mut Rng, max_len: usize) -> Self::Elem {
        use rand::Rng as _;
        let len = rng.gen_range(0..=max_len);
        self.random_element(rng, len)
    }
}

/// Groups whose automorphisms can be represented and composed exactly.
pub trait AutGroup: Group {
    type Aut: Clone + Debug + Send + Sync + 'static;

    fn apply(&self, phi: &Self::Aut, g: &Self::Elem) -> Self::Elem;
    fn apply_inverse(&self, phi: &Self::Aut, g: &Self::Elem) -> Self::Elem;
    /// `phi o psi`
    fn compose(&self, phi: &Self::Aut, psi: &Self::Aut) -> Self::Aut;
    fn inverse(&self, phi: &Self::Aut) -> Self::Aut;
    fn identity_aut(&self) -> Self::Aut;
    /// `i_g(x) = g x g^-1`
    fn inner(&self, g: &Self::Elem) -> Self::Aut;
    /// A generating set; automorphisms agreeing here are equal.
    fn generators(&self) -> Vec<Self::Elem>;
    /// Builds an automorphism from a map and its inverse, checking that the
    /// two are mutually inverse on generators.
    fn aut_from_maps(
        &self,
        forward: &dyn Fn(&Self::Elem) -> Self::Elem,
        backward: &dyn Fn(&Self::Elem) -> Self::Elem,
    ) -> Result<Self::Aut>;

    fn aut_eq(&self, phi: &Self::Aut, psi: &Self::Aut) -> bool {
        self.generators()
            .iter()
            .all(|x| self.apply(phi, x) == self.apply(psi, x))
    }

    /// `phi^k`, by repeated composition.
    fn aut_power(&self, phi: &Self::Aut, k: i64) -> Self::Aut {
        let step = if k < 0 { self.inverse(phi) } else { phi.clone() };
        let mut acc = self.identity_aut();
        for _ in 0..k.unsigned_abs() {
            acc = self.compose(&step, &acc);
        }
        acc
    }

    /// Whether `z` commutes with every generator, i.e. lies in the centre.
    fn is_central(&self, z: &Self::Elem) -> bool {
        self.generators()
            .iter()
            .all(|x| self.mul(z, x) == self.mul(x, z))
    }
}

/// Deterministic random element of `model`, reproducible from `seed`.
pub fn random_word<G: Group>(model: &G, length: usize, seed: u64) -> G::Elem {
    let mut rng = crate::sampling::rng(seed);
    model.random_element(&mut rng, length)
}
