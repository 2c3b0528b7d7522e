use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{FreeGroup, Group, ReducedWord};
use crate::rational::{fmt_q, q, Q};
use crate::sampling;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Number of possibly overlapping occurrences of `w` as a subword of `g`.
pub fn brooks_count(w: &ReducedWord, g: &ReducedWord) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (w, g) = (w.letters(), g.letters());
    if w.len() > g.len() {
        return Ok(0);
    }
    Ok(g.windows(w.len()).filter(|s| *s == w).count())
}

pub type QmEval = Arc<dyn Fn(&ReducedWord) -> Q + Send + Sync>;

/// A real-valued function on a free group with bounded defect.
#[derive(Clone)]
pub struct Quasimorphism {
    id: u64,
    name: String,
    eval: QmEval,
    defect_bound: Option<Q>,
    homogeneous: bool,
}

impl std::fmt::Debug for Quasimorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Quasimorphism({})", self.name)
    }
}

impl Quasimorphism {
    pub fn custom(name: impl Into<String>, eval: QmEval, defect_bound: Option<Q>, homogeneous: bool) -> Self {
        Quasimorphism {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            eval,
            defect_bound,
            homogeneous,
        }
    }

    /// `Phi_w(g) = #w(g) - #w^-1(g)`.
    pub fn brooks(w: &ReducedWord) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        let (w1, w2) = (w.clone(), w.inverse());
        let eval: QmEval = Arc::new(move |g| {
            let up = brooks_count(&w1, g).expect("nonempty") as i64;
            let down = brooks_count(&w2, g).expect("nonempty") as i64;
            q(up - down)
        });
        Ok(Self::custom(format!("brooks:{w}"), eval, None, false))
    }

    /// `g -> sum_i weights[i] * (exponent sum of x_i in g)`.
    pub fn homomorphism(weights: Vec<Q>) -> Self {
        let name = format!("hom:[{}]", weights.iter().map(fmt_q).collect::<Vec<_>>().join(","));
        let eval: QmEval = Arc::new(move |g| {
            g.letters().iter().fold(Q::zero(), |acc, &x| {
                let wt = weights.get(x.unsigned_abs() as usize - 1).cloned().unwrap_or_else(Q::zero);
                if x > 0 {
                    acc + wt
                } else {
                    acc - wt
                }
            })
        });
        Self::custom(name, eval, Some(Q::zero()), true)
    }

    pub fn zero() -> Self {
        Self::custom("zero", Arc::new(|_| Q::zero()), Some(Q::zero()), true)
    }

    /// `sum_i c_i Phi_i`.
    pub fn linear_combination(terms: Vec<(Q, Quasimorphism)>) -> Self {
        let name = terms
            .iter()
            .map(|(c, p)| format!("{}*{}", fmt_q(c), p.name))
            .collect::<Vec<_>>()
            .join("+");
        let defect = terms.iter().try_fold(Q::zero(), |acc, (c, p)| {
            p.defect_bound.as_ref().map(|d| acc + c.abs() * d)
        });
        let homogeneous = terms.iter().all(|(_, p)| p.homogeneous);
        let eval: QmEval = Arc::new(move |g| {
            terms.iter().fold(Q::zero(), |acc, (c, p)| acc + c * p.eval(g))
        });
        Self::custom(name, eval, defect, homogeneous)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, g: &ReducedWord) -> Q {
        (self.eval)(g)
    }

    pub fn defect_bound(&self) -> Option<&Q> {
        self.defect_bound.as_ref()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// `Phi(gh) - Phi(g) - Phi(h)`
    pub fn defect_at(&self, g: &ReducedWord, h: &ReducedWord) -> Q {
        self.eval(&g.mul(h)) - self.eval(g) - self.eval(h)
    }
}

/// Word length range used when sampling pairs for defect estimation.
pub const DEFECT_SAMPLE_LEN: usize = 12;

/// Largest `|Phi(gh) - Phi(g) - Phi(h)|` over `samples` seeded random pairs.
/// This is a lower bound for the defect. Pairs are drawn from one stream, so a
/// larger sample count extends the smaller one.
pub fn defect_estimate(phi: &Quasimorphism, group: &FreeGroup, samples: usize, seed: u64) -> Q {
    let mut rng = sampling::rng(seed);
    let mut best = Q::zero();
    for _ in 0..samples {
        let g = group.sample(&mut rng, DEFECT_SAMPLE_LEN);
        let h = group.sample(&mut rng, DEFECT_SAMPLE_LEN);
        let d = phi.defect_at(&g, &h).abs();
        if d > best {
            best = d;
        }
    }
    best
}
