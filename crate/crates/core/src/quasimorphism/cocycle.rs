use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::brooks::Quasimorphism;
use super::homogenize::{stabilize, HomogenizedQm};
use crate::cochain::ScalarCochain;
use crate::error::{Error, Result};
use crate::group::{AutGroup, FreeAutomorphism, FreeGroup, ReducedWord};
use crate::rational::{fmt_q, Q};

pub type CocycleEval = Arc<dyn Fn(&ReducedWord, &ReducedWord) -> Result<Q> + Send + Sync>;

/// A bounded 2-cocycle on a free group vanishing on all pairs `(g^n, g^m)`.
#[derive(Clone)]
pub struct HomogeneousCocycle {
    name: String,
    eval: CocycleEval,
    source: Option<Arc<HomogenizedQm>>,
}

impl std::fmt::Debug for HomogeneousCocycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HomogeneousCocycle({})", self.name)
    }
}

impl HomogeneousCocycle {
    pub fn new(name: impl Into<String>, eval: CocycleEval, source: Option<Arc<HomogenizedQm>>) -> Self {
        HomogeneousCocycle { name: name.into(), eval, source }
    }

    /// `c(g, h) = phi(gh) - phi(g) - phi(h)`.
    pub fn from_homogenized(phi: Arc<HomogenizedQm>) -> Self {
        let p = phi.clone();
        let eval: CocycleEval = Arc::new(move |g, h| Ok(p.eval(&g.mul(h))? - p.eval(g)? - p.eval(h)?));
        let name = format!("d({})", phi.source().name());
        HomogeneousCocycle { name, eval, source: Some(phi) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, g: &ReducedWord, h: &ReducedWord) -> Result<Q> {
        (self.eval)(g, h)
    }

    /// The homogeneous quasimorphism this cocycle is the coboundary of, if known.
    pub fn source(&self) -> Option<&Arc<HomogenizedQm>> {
        self.source.as_ref()
    }

    pub fn evaluator(&self) -> CocycleEval {
        self.eval.clone()
    }

    /// As a scalar 2-cochain flagged for the m-series shortcut in pairings.
    pub fn to_cochain(&self, group: Arc<FreeGroup>) -> ScalarCochain<FreeGroup> {
        let c = self.eval.clone();
        ScalarCochain::scalar_fn(group, 2, move |t| c(&t[0], &t[1])).mark_homogeneous()
    }

    /// `c(h,k) - c(gh,k) + c(g,hk) - c(g,h)`
    pub fn coboundary_at(&self, g: &ReducedWord, h: &ReducedWord, k: &ReducedWord) -> Result<Q> {
        Ok(self.eval(h, k)? - self.eval(&g.mul(h), k)? + self.eval(g, &h.mul(k))? - self.eval(g, h)?)
    }
}

pub fn homogeneous_cocycle(phi: &Quasimorphism, window: usize, n_max: usize) -> Result<HomogeneousCocycle> {
    Ok(HomogeneousCocycle::from_homogenized(HomogenizedQm::new(phi.clone(), window, n_max)?))
}

/// The homogeneous cocycle cohomologous to `c`: `c_x = c + dpsi` where
/// `psi(g)` is the eventual value of `c(g^k, g)`. That sequence is the
/// increment `Phi(t_{k+1}) - Phi(t_k)` of the central coordinate of
/// `(0, g)^k` in `R x_c G`, so `psi(g)` is the homogenization of `(0, g)`.
///
/// `c` is first checked to be a normalized cocycle on `triples`.
pub fn homogeneous_representative(
    c: &ScalarCochain<FreeGroup>,
    triples: &[(ReducedWord, ReducedWord, ReducedWord)],
    window: usize,
    n_max: usize,
) -> Result<HomogeneousCocycle> {
    if c.degree() != 2 {
        return Err(Error::DegreeMismatch(format!("expected a 2-cochain, got degree {}", c.degree())));
    }
    let one = ReducedWord::identity();
    for (g, h, k) in triples {
        let e = |x: &ReducedWord, y: &ReducedWord| c.eval(&[x.clone(), y.clone()]);
        let d = e(h, k)? - e(&g.mul(h), k)? + e(g, &h.mul(k))? - e(g, h)?;
        if !d.is_zero() {
            return Err(Error::NotACocycle(format!("dc({g}, {h}, {k}) = {}", fmt_q(&d))));
        }
        if !e(g, &one)?.is_zero() || !e(&one, g)?.is_zero() {
            return Err(Error::NotACocycle(format!("c not normalized at {g}")));
        }
    }
    let psi = Arc::new(CorrectionTerm { c: c.clone(), window, n_max, cache: Mutex::new(HashMap::new()) });
    let cc = c.clone();
    let eval: CocycleEval = Arc::new(move |g, h| {
        Ok(cc.eval(&[g.clone(), h.clone()])? + psi.eval(&g.mul(h))? - psi.eval(g)? - psi.eval(h)?)
    });
    Ok(HomogeneousCocycle::new("homogeneous representative", eval, None))
}

struct CorrectionTerm {
    c: ScalarCochain<FreeGroup>,
    window: usize,
    n_max: usize,
    cache: Mutex<HashMap<ReducedWord, Q>>,
}

impl CorrectionTerm {
    fn eval(&self, g: &ReducedWord) -> Result<Q> {
        if g.is_empty() {
            return Ok(Q::zero());
        }
        if let Some(x) = self.cache.lock().unwrap().get(g) {
            return Ok(x.clone());
        }
        let mut gk = ReducedWord::identity();
        let x = stabilize(self.window, self.n_max, |_| {
            gk = gk.mul(g);
            self.c.eval(&[gk.clone(), g.clone()])
        })?;
        self.cache.lock().unwrap().insert(g.clone(), x.clone());
        Ok(x)
    }
}

/// `(alpha^* c)(g, h) = c(alpha g, alpha h)`.
pub fn pullback_cocycle(group: &FreeGroup, alpha: &FreeAutomorphism, c: &HomogeneousCocycle) -> HomogeneousCocycle {
    let (grp, a, inner) = (group.clone(), alpha.clone(), c.eval.clone());
    let eval: CocycleEval = Arc::new(move |g, h| inner(&grp.apply(&a, g), &grp.apply(&a, h)));
    HomogeneousCocycle::new(format!("pullback of {}", c.name), eval, None)
}
