use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::module::{Module, TrivialScalar};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::rational::Q;
use crate::sampling::Rng;

/// Cup products and coboundaries refuse to go above this degree.
pub const MAX_DEGREE: usize = 6;

pub type Evaluator<G, M> = Arc<
    dyn Fn(&[<G as Group>::Elem]) -> Result<<M as Module<G>>::Value> + Send + Sync,
>;

/// An inhomogeneous cochain `G^n -> M`, evaluated lazily.
pub struct BoundedCochain<G: Group, M: Module<G>> {
    degree: usize,
    group: Arc<G>,
    module: Arc<M>,
    eval: Evaluator<G, M>,
    norm_bound: Option<Q>,
    homogeneous: bool,
}

impl<G: Group, M: Module<G>> Clone for BoundedCochain<G, M> {
    fn clone(&self) -> Self {
        BoundedCochain {
            degree: self.degree,
            group: self.group.clone(),
            module: self.module.clone(),
            eval: self.eval.clone(),
            norm_bound: self.norm_bound.clone(),
            homogeneous: self.homogeneous,
        }
    }
}

impl<G: Group + 'static, M: Module<G> + 'static> BoundedCochain<G, M> {
    pub fn new(group: Arc<G>, module: Arc<M>, degree: usize, eval: Evaluator<G, M>) -> Self {
        BoundedCochain { degree, group, module, eval, norm_bound: None, homogeneous: false }
    }

    pub fn from_fn(
        group: Arc<G>,
        module: Arc<M>,
        degree: usize,
        f: impl Fn(&[G::Elem]) -> Result<M::Value> + Send + Sync + 'static,
    ) -> Self {
        Self::new(group, module, degree, Arc::new(f))
    }

    pub fn zero(group: Arc<G>, module: Arc<M>, degree: usize) -> Self {
        let m = module.clone();
        Self::from_fn(group, module, degree, move |_| Ok(m.zero())).with_norm_bound(Q::zero())
    }

    pub fn with_norm_bound(mut self, bound: Q) -> Self {
        self.norm_bound = Some(bound);
        self
    }

    /// Marks a degree-2 scalar cocycle vanishing on all pairs of powers of one
    /// element; pairings then drop m-series terms exactly.
    pub fn mark_homogeneous(mut self) -> Self {
        self.homogeneous = true;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &Arc<G> {
        &self.group
    }

    pub fn module(&self) -> &Arc<M> {
        &self.module
    }

    pub fn norm_bound(&self) -> Option<&Q> {
        self.norm_bound.as_ref()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn eval(&self, args: &[G::Elem]) -> Result<M::Value> {
        if args.len() != self.degree {
            return Err(Error::DegreeMismatch(format!(
                "cochain of degree {} evaluated on {} arguments",
                self.degree,
                args.len()
            )));
        }
        (self.eval)(args)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, m) = (self.clone(), other.clone(), self.module.clone());
        let bound = match (&self.norm_bound, &other.norm_bound) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        let mut out = Self::from_fn(self.group.clone(), self.module.clone(), self.degree, move |t| {
            Ok(m.add(&a.eval(t)?, &b.eval(t)?))
        });
        out.norm_bound = bound;
        out
    }

    pub fn neg(&self) -> Self {
        let (a, m) = (self.clone(), self.module.clone());
        let mut out = Self::from_fn(self.group.clone(), self.module.clone(), self.degree, move |t| {
            Ok(m.neg(&a.eval(t)?))
        });
        out.norm_bound = self.norm_bound.clone();
        out.homogeneous = self.homogeneous;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Whether `f(g_1..g_n) = 0` whenever some `g_i = 1`, on the given tuples.
    pub fn is_normalized_on(&self, tuples: &[Vec<G::Elem>]) -> Result<bool> {
        let one = self.group.identity();
        for t in tuples {
            for i in 0..t.len() {
                let mut u = t.clone();
                u[i] = one.clone();
                if !self.module.equal(&self.eval(&u)?, &self.module.zero()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl<G: Group + 'static> BoundedCochain<G, TrivialScalar> {
    /// Scalar cochain `f(t) = table[t]`, zero off the table.
    pub fn finite_support(group: Arc<G>, degree: usize, table: BTreeMap<Vec<G::Elem>, Q>) -> Self {
        let bound = table.values().map(|x| x.abs()).max().unwrap_or_else(Q::zero);
        Self::from_fn(group, Arc::new(TrivialScalar), degree, move |t| {
            Ok(table.get(t).cloned().unwrap_or_else(Q::zero))
        })
        .with_norm_bound(bound)
    }

    pub fn scalar_fn(
        group: Arc<G>,
        degree: usize,
        f: impl Fn(&[G::Elem]) -> Result<Q> + Send + Sync + 'static,
    ) -> Self {
        Self::from_fn(group, Arc::new(TrivialScalar), degree, f)
    }
}

/// `d f(g_1..g_{n+1}) = g_1 f(g_2..) + sum_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g_1..g_n)`.
pub fn coboundary<G: Group + 'static, M: Module<G> + 'static>(f: &BoundedCochain<G, M>) -> BoundedCochain<G, M> {
    let n = f.degree;
    let (ff, g, m) = (f.clone(), f.group.clone(), f.module.clone());
    let mut out = BoundedCochain::from_fn(f.group.clone(), f.module.clone(), n + 1, move |t| {
        let mut acc = m.act(&t[0], &ff.eval(&t[1..])?);
        for i in 1..=n {
            let mut merged = Vec::with_capacity(n);
            merged.extend_from_slice(&t[..i - 1]);
            merged.push(g.mul(&t[i - 1], &t[i]));
            merged.extend_from_slice(&t[i + 1..]);
            acc = m.add(&acc, &m.signed(&ff.eval(&merged)?, i % 2 == 1));
        }
        Ok(m.add(&acc, &m.signed(&ff.eval(&t[..n])?, (n + 1) % 2 == 1)))
    });
    if f.module.is_trivial() {
        out.norm_bound = f.norm_bound.as_ref().map(|b| b * Q::from_integer((n as i64 + 2).into()));
    }
    out
}

/// `(f u h)(g_1..g_{p+q}) = mu(f(g_1..g_p), (g_1..g_p) . h(g_{p+1}..g_{p+q}))`.
pub fn cup<G, U, V, W>(
    f: &BoundedCochain<G, U>,
    h: &BoundedCochain<G, V>,
    w: Arc<W>,
    mu: Arc<dyn Fn(&U::Value, &V::Value) -> W::Value + Send + Sync>,
) -> Result<BoundedCochain<G, W>>
where
    G: Group + 'static,
    U: Module<G> + 'static,
    V: Module<G> + 'static,
    W: Module<G> + 'static,
{
    let (p, q) = (f.degree, h.degree);
    if p + q > MAX_DEGREE {
        return Err(Error::DegreeOverflow(p + q, MAX_DEGREE));
    }
    let (ff, hh, g, v) = (f.clone(), h.clone(), f.group.clone(), h.module.clone());
    Ok(BoundedCochain::from_fn(f.group.clone(), w, p + q, move |t| {
        let prefix = g.product(&t[..p]);
        let right = v.act(&prefix, &hh.eval(&t[p..])?);
        Ok(mu(&ff.eval(&t[..p])?, &right))
    }))
}

/// A cochain in the homogeneous picture: a map `G^{n+1} -> M` expected to
/// satisfy `F(g x_0, .., g x_n) = g F(x_0, .., x_n)`.
pub struct HomogeneousCochain<G: Group, M: Module<G>> {
    degree: usize,
    group: Arc<G>,
    module: Arc<M>,
    eval: Evaluator<G, M>,
}

impl<G: Group, M: Module<G>> Clone for HomogeneousCochain<G, M> {
    fn clone(&self) -> Self {
        HomogeneousCochain {
            degree: self.degree,
            group: self.group.clone(),
            module: self.module.clone(),
            eval: self.eval.clone(),
        }
    }
}

impl<G: Group + 'static, M: Module<G> + 'static> HomogeneousCochain<G, M> {
    pub fn from_fn(
        group: Arc<G>,
        module: Arc<M>,
        degree: usize,
        f: impl Fn(&[G::Elem]) -> Result<M::Value> + Send + Sync + 'static,
    ) -> Self {
        HomogeneousCochain { degree, group, module, eval: Arc::new(f) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, args: &[G::Elem]) -> Result<M::Value> {
        if args.len() != self.degree + 1 {
            return Err(Error::DegreeMismatch(format!(
                "homogeneous cochain of degree {} evaluated on {} entries",
                self.degree,
                args.len()
            )));
        }
        (self.eval)(args)
    }

    /// Checks `F(g t) = g F(t)` on random `g` and tuples.
    pub fn check_invariance(&self, rng: &mut Rng, samples: usize, max_len: usize) -> Result<()> {
        for _ in 0..samples {
            let g = self.group.sample(rng, max_len);
            let t: Vec<_> = (0..=self.degree).map(|_| self.group.sample(rng, max_len)).collect();
            let gt: Vec<_> = t.iter().map(|x| self.group.mul(&g, x)).collect();
            let lhs = self.eval(&gt)?;
            let rhs = self.module.act(&g, &self.eval(&t)?);
            if !self.module.equal(&lhs, &rhs) {
                return Err(Error::InvariantViolation(format!(
                    "F(g t) != g F(t) at g = {}",
                    self.group.format_elem(&g)
                )));
            }
        }
        Ok(())
    }
}

/// `F(x_0..x_n) = x_0 f(x_0^-1 x_1, .., x_{n-1}^-1 x_n)`.
pub fn to_homogeneous<G: Group + 'static, M: Module<G> + 'static>(
    f: &BoundedCochain<G, M>,
) -> HomogeneousCochain<G, M> {
    let (ff, g, m) = (f.clone(), f.group.clone(), f.module.clone());
    HomogeneousCochain::from_fn(f.group.clone(), f.module.clone(), f.degree, move |x| {
        let args: Vec<_> = x.windows(2).map(|w| g.mul(&g.inv(&w[0]), &w[1])).collect();
        Ok(m.act(&x[0], &ff.eval(&args)?))
    })
}

/// `f(g_1..g_n) = F(1, g_1, g_1 g_2, .., g_1..g_n)`.
pub fn from_homogeneous<G: Group + 'static, M: Module<G> + 'static>(
    big: &HomogeneousCochain<G, M>,
) -> BoundedCochain<G, M> {
    let (bb, g) = (big.clone(), big.group.clone());
    BoundedCochain::from_fn(big.group.clone(), big.module.clone(), big.degree, move |t| {
        let mut x = Vec::with_capacity(t.len() + 1);
        x.push(g.identity());
        for gi in t {
            let next = g.mul(x.last().unwrap(), gi);
            x.push(next);
        }
        bb.eval(&x)
    })
}

/// `delta F(x_0..x_{n+1}) = sum_i (-1)^i F(.., x_i omitted, ..)`, after checking
/// invariance of `F` on `samples` random inputs.
pub fn homogeneous_coboundary<G: Group + 'static, M: Module<G> + 'static>(
    big: &HomogeneousCochain<G, M>,
    rng: &mut Rng,
    samples: usize,
    max_len: usize,
) -> Result<HomogeneousCochain<G, M>> {
    big.check_invariance(rng, samples, max_len)?;
    let (bb, m) = (big.clone(), big.module.clone());
    let n = big.degree;
    Ok(HomogeneousCochain::from_fn(big.group.clone(), big.module.clone(), n + 1, move |x| {
        let mut acc = m.zero();
        for i in 0..=n + 1 {
            let omitted: Vec<_> = x.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, y)| y.clone()).collect();
            acc = m.add(&acc, &m.signed(&bb.eval(&omitted)?, i % 2 == 1));
        }
        Ok(acc)
    }))
}
