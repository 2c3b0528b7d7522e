use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::brooks::Quasimorphism;
use crate::error::{Error, Result};
use crate::group::ReducedWord;
use crate::rational::Q;

pub const DEFAULT_WINDOW: usize = 4;
pub const DEFAULT_NMAX: usize = 64;

/// Returns the common value once `window` consecutive terms of `seq(1), seq(2), ..`
/// agree, failing after `n_max` terms.
pub(crate) fn stabilize(
    window: usize,
    n_max: usize,
    mut seq: impl FnMut(usize) -> Result<Q>,
) -> Result<Q> {
    let mut last: Option<Q> = None;
    let mut run = 0;
    for n in 1..=n_max {
        let x = seq(n)?;
        if last.as_ref() == Some(&x) {
            run += 1;
        } else {
            run = 1;
        }
        if run >= window {
            return Ok(x);
        }
        last = Some(x);
    }
    Err(Error::NoStabilization(n_max))
}

/// `lim Phi(g^n)/n`, read off as the eventual value of the increments
/// `Phi(core^{n+1}) - Phi(core^n)` of the cyclic core. The limit is invariant
/// under conjugation, so the conjugator is dropped.
pub fn homogenize(phi: &Quasimorphism, g: &ReducedWord, window: usize, n_max: usize) -> Result<Q> {
    if window < 2 {
        return Err(Error::Invalid("stabilization window must be at least 2".into()));
    }
    let (core, _) = g.cyclic_reduce();
    if core.is_empty() {
        return Ok(Q::zero());
    }
    let mut power = core.clone();
    let mut prev = phi.eval(&power);
    stabilize(window, n_max, |_| {
        // core is cyclically reduced, so concatenation is already reduced
        power.extend_reduced(core.letters().iter().copied());
        let next = phi.eval(&power);
        let inc = &next - &prev;
        prev = next;
        Ok(inc)
    })
}

/// Writes a cyclically reduced word as `root^k` with `root` not a proper power.
fn primitive_root(core: &[i32]) -> (&[i32], usize) {
    let n = core.len();
    if n == 0 {
        return (core, 0);
    }
    let mut fail = vec![0usize; n];
    for i in 1..n {
        let mut k = fail[i - 1];
        while k > 0 && core[i] != core[k] {
            k = fail[k - 1];
        }
        if core[i] == core[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n % p == 0 {
        (&core[..p], n / p)
    } else {
        (core, 1)
    }
}

/// Roots longer than this are cached under themselves rather than under
/// their least rotation.
const ROTATION_LIMIT: usize = 64;

fn least_rotation(root: &[i32]) -> Vec<i32> {
    if root.len() > ROTATION_LIMIT {
        return root.to_vec();
    }
    (0..root.len()).map(|i| [&root[i..], &root[..i]].concat()).min().unwrap_or_default()
}

/// The homogenization of a quasimorphism with a memo table keyed by the
/// conjugacy normal form of the argument.
pub struct HomogenizedQm {
    source: Quasimorphism,
    window: usize,
    n_max: usize,
    cache: Mutex<HashMap<ReducedWord, Q>>,
}

impl HomogenizedQm {
    pub fn new(source: Quasimorphism, window: usize, n_max: usize) -> Result<Arc<Self>> {
        if window < 2 {
            return Err(Error::Invalid("stabilization window must be at least 2".into()));
        }
        Ok(Arc::new(HomogenizedQm { source, window, n_max, cache: Mutex::new(HashMap::new()) }))
    }

    pub fn with_defaults(source: Quasimorphism) -> Arc<Self> {
        Self::new(source, DEFAULT_WINDOW, DEFAULT_NMAX).expect("default window is valid")
    }

    pub fn source(&self) -> &Quasimorphism {
        &self.source
    }

    /// `phi(g) = k phi(root)` where the cyclic core of `g` is `root^k`; values
    /// on roots are memoized up to rotation.
    pub fn eval(&self, g: &ReducedWord) -> Result<Q> {
        let (core, _) = g.cyclic_reduce();
        let (root, k) = primitive_root(core.letters());
        if k == 0 {
            return Ok(Q::zero());
        }
        let key = ReducedWord::from_reduced_unchecked(least_rotation(root));
        let cached = self.cache.lock().unwrap().get(&key).cloned();
        let x = match cached {
            Some(x) => x,
            None => {
                let x = homogenize(&self.source, &key, self.window, self.n_max)?;
                self.cache.lock().unwrap().insert(key, x.clone());
                x
            }
        };
        Ok(x * Q::from_integer((k as i64).into()))
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}
