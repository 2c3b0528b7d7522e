//! Shared samplers, the cocycle family and the fixtures with free fiber.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng as _;

use super::{fq, Outcome, RunConfig};
use crate::chains::L1Chain;
use crate::cochain::{pair, ScalarCochain};
use crate::error::{Error, Result};
use crate::extension::fixtures::{
    b_power_shift, f2_semidirect_z, sample_z, split_swap, split_swap_decorated, Fixture, SemidirectZ, SwapProduct,
};
use crate::group::{FiniteGroup, FreeGroup, Group, ReducedWord};
use crate::quasimorphism::{homogeneous_cocycle, HomogeneousCocycle, Quasimorphism};
use crate::sampling::Rng;

pub const FIXTURES: [&str; 3] = ["f2-semidirect-z", "split-swap", "z4-hs"];

pub(crate) fn check_fixture_name(name: &str) -> Result<()> {
    if FIXTURES.contains(&name) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("unknown fixture {name:?}; expected one of {}", FIXTURES.join(", "))))
    }
}

pub(crate) fn f2() -> Arc<FreeGroup> {
    Arc::new(FreeGroup::new(2))
}

pub(crate) fn words(rng: &mut Rng, n: usize, max_len: usize) -> Vec<ReducedWord> {
    let g = FreeGroup::new(2);
    (0..n).map(|_| g.sample(rng, max_len)).collect()
}

pub(crate) fn nontrivial_words(rng: &mut Rng, n: usize, max_len: usize) -> Vec<ReducedWord> {
    let g = FreeGroup::new(2);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = g.sample(rng, max_len);
        if !x.is_empty() {
            out.push(x);
        }
    }
    out
}

pub(crate) fn tuples(rng: &mut Rng, n: usize, arity: usize, max_len: usize) -> Vec<Vec<ReducedWord>> {
    (0..n).map(|_| words(rng, arity, max_len)).collect()
}

pub(crate) struct Named {
    pub word: String,
    pub qm: Quasimorphism,
    pub cx: HomogeneousCocycle,
}

/// Brooks quasimorphism and homogeneous cocycle of every configured word.
pub(crate) fn family(cfg: &RunConfig) -> Result<Vec<Named>> {
    cfg.words
        .iter()
        .map(|w| {
            let qm = Quasimorphism::brooks(&ReducedWord::parse(w)?)?;
            let cx = homogeneous_cocycle(&qm, cfg.window, cfg.n_max)?;
            Ok(Named { word: w.clone(), qm, cx })
        })
        .collect()
}

pub(crate) fn family_cochains(cfg: &RunConfig, g: &Arc<FreeGroup>) -> Result<Vec<ScalarCochain<FreeGroup>>> {
    Ok(family(cfg)?.into_iter().map(|n| n.cx.to_cochain(g.clone())).collect())
}

/// Every cocycle pairs to exactly zero with `z`, with a zero interval.
pub(crate) fn pairs_to_zero(
    family: &[ScalarCochain<FreeGroup>],
    names: &[String],
    z: &L1Chain<ReducedWord>,
    what: impl Fn() -> String,
) -> Result<Outcome> {
    let mut out = Outcome::ok();
    for (c, name) in family.iter().zip(names) {
        let p = pair(c, z)?;
        let ok = p.value.is_zero() && p.error_bound.is_zero();
        out = out.and(
            Outcome::check(ok, || format!("{}: <c_{name}, .> = {} +- {}", what(), fq(&p.value), fq(&p.error_bound)))
                .with_bound(p.error_bound),
        );
    }
    Ok(out)
}

/// A fixture whose normal subgroup is `F2`, with samplers for `Pi` and `Gamma`
/// and the map `h` used to move its kernel.
pub(crate) struct FiberCtx<X: Group, P: Group> {
    pub fx: Fixture<X, P, FreeGroup>,
    pub shift: Arc<dyn Fn(&P::Elem) -> ReducedWord + Send + Sync>,
    pub sample_pi: fn(&mut Rng) -> P::Elem,
    pub sample_gamma: fn(&mut Rng) -> X::Elem,
}

pub(crate) type Builder<X, P> = fn() -> Result<FiberCtx<X, P>>;

/// Sizes kept small so that products of samples stay short.
const PI_BOUND: i64 = 4;
const FIBER_LEN: usize = 6;

fn sample_semidirect(rng: &mut Rng) -> (ReducedWord, ReducedWord) {
    (sample_z(rng, PI_BOUND), FreeGroup::new(2).sample(rng, FIBER_LEN))
}

fn sample_swap(rng: &mut Rng) -> (usize, ReducedWord) {
    (rng.gen_range(0..2), FreeGroup::new(2).sample(rng, FIBER_LEN))
}

fn sample_z_small(rng: &mut Rng) -> ReducedWord {
    sample_z(rng, PI_BOUND)
}

fn sample_z2(rng: &mut Rng) -> usize {
    rng.gen_range(0..2)
}

pub(crate) fn semidirect_ctx() -> Result<FiberCtx<SemidirectZ, FreeGroup>> {
    Ok(FiberCtx {
        fx: f2_semidirect_z()?,
        shift: b_power_shift(),
        sample_pi: sample_z_small,
        sample_gamma: sample_semidirect,
    })
}

pub(crate) fn swap_ctx() -> Result<FiberCtx<SwapProduct, FiniteGroup>> {
    Ok(FiberCtx {
        fx: split_swap()?,
        shift: Arc::new(|a: &usize| if *a == 0 { ReducedWord::identity() } else { ReducedWord::generator(2) }),
        sample_pi: sample_z2,
        sample_gamma: sample_swap,
    })
}

pub(crate) fn swap_decorated_ctx() -> Result<FiberCtx<SwapProduct, FiniteGroup>> {
    Ok(FiberCtx { fx: split_swap_decorated()?, ..swap_ctx()? })
}
