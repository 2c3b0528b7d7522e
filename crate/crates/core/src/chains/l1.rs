use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{AutGroup, Group};
use crate::rational::{pow2_inv, q, Q};

/// Deepest truncation of the m-series; `g^(2^16)` is the largest power formed.
pub const MAX_CUTOFF: u32 = 16;

/// A finite l1-chain of degree `n` in the normalized bar complex with trivial
/// coefficients, plus symbolic m-series blocks and a certified tail.
///
/// A block `(g, N) -> c` stands for `c * sum_{k=1}^{N} 2^-k [g^(2^(k-1)) | g^(2^(k-1))]`,
/// whose discarded tail has l1-norm `|c| 2^-N`.
#[derive(Clone, Debug, PartialEq)]
pub struct L1Chain<E: Ord> {
    degree: usize,
    support: BTreeMap<Vec<E>, Q>,
    m_blocks: BTreeMap<(E, u32), Q>,
    extra_tail: Q,
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Q>, key: K, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl<E: Clone + Ord> L1Chain<E> {
    pub fn zero(degree: usize) -> Self {
        L1Chain { degree, support: BTreeMap::new(), m_blocks: BTreeMap::new(), extra_tail: Q::zero() }
    }

    /// Sum of `coeff * [tuple]`, normalized: degenerate tuples vanish and equal
    /// tuples merge.
    pub fn from_terms<G: Group<Elem = E>>(
        group: &G,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<E>, Q)>,
    ) -> Result<Self> {
        let mut z = Self::zero(degree);
        for (t, c) in terms {
            z.add_term(group, t, c)?;
        }
        Ok(z)
    }

    /// `[g_1 | .. | g_n]`
    pub fn basis<G: Group<Elem = E>>(group: &G, tuple: Vec<E>) -> Self {
        let n = tuple.len();
        Self::from_terms(group, n, [(tuple, q(1))]).expect("arity matches")
    }

    pub fn add_term<G: Group<Elem = E>>(&mut self, group: &G, tuple: Vec<E>, c: Q) -> Result<()> {
        if tuple.len() != self.degree {
            return Err(Error::DegreeMismatch(format!(
                "tuple of length {} in a degree-{} chain",
                tuple.len(),
                self.degree
            )));
        }
        if tuple.iter().any(|x| group.is_identity(x)) {
            return Ok(());
        }
        add_into(&mut self.support, tuple, c);
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Literal terms, excluding the symbolic m-series blocks.
    pub fn support(&self) -> &BTreeMap<Vec<E>, Q> {
        &self.support
    }

    pub fn m_blocks(&self) -> &BTreeMap<(E, u32), Q> {
        &self.m_blocks
    }

    pub fn extra_tail(&self) -> &Q {
        &self.extra_tail
    }

    /// Tail attributable to m-series blocks.
    pub fn m_tail(&self) -> Q {
        self.m_blocks
            .iter()
            .fold(Q::zero(), |acc, ((_, n), c)| acc + c.abs() * pow2_inv(*n))
    }

    /// l1-norm bound of everything the finite representation leaves out.
    pub fn tail_bound(&self) -> Q {
        self.m_tail() + &self.extra_tail
    }

    /// Adds an unstructured tail bound, e.g. for a chain read from a file.
    pub fn with_extra_tail(mut self, t: Q) -> Self {
        self.extra_tail += t;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty() && self.m_blocks.is_empty() && self.extra_tail.is_zero()
    }

    fn check_same_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!("{} vs {}", self.degree, other.degree)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_degree(other)?;
        let mut out = self.clone();
        for (t, c) in &other.support {
            add_into(&mut out.support, t.clone(), c.clone());
        }
        for (k, c) in &other.m_blocks {
            add_into(&mut out.m_blocks, k.clone(), c.clone());
        }
        out.extra_tail += &other.extra_tail;
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        L1Chain {
            degree: self.degree,
            support: self.support.iter().map(|(t, x)| (t.clone(), x * c)).collect(),
            m_blocks: self.m_blocks.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
            extra_tail: &self.extra_tail * c.abs(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-q(1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Sum of `|coeff|` over the literal support.
    pub fn support_norm(&self) -> Q {
        self.support.values().fold(Q::zero(), |acc, c| acc + c.abs())
    }

    /// Literal terms of one m-series block, in order `k = 1..=N`.
    pub fn block_terms<G: Group<Elem = E>>(group: &G, base: &E, cutoff: u32, coeff: &Q) -> Result<Vec<(E, Q)>> {
        if cutoff > MAX_CUTOFF {
            return Err(Error::ResourceCap(format!("m-series cutoff {cutoff} exceeds {MAX_CUTOFF}")));
        }
        let mut out = Vec::with_capacity(cutoff as usize);
        let mut x = base.clone();
        for k in 1..=cutoff {
            out.push((x.clone(), coeff * pow2_inv(k)));
            if k < cutoff {
                x = group.mul(&x, &x);
            }
        }
        Ok(out)
    }

    /// Replaces every m-series block by its literal terms; the block tails
    /// become an unstructured tail bound.
    pub fn expanded<G: Group<Elem = E>>(&self, group: &G) -> Result<Self> {
        let mut out = L1Chain {
            degree: self.degree,
            support: self.support.clone(),
            m_blocks: BTreeMap::new(),
            extra_tail: self.tail_bound(),
        };
        for ((base, n), c) in &self.m_blocks {
            for (x, coeff) in Self::block_terms(group, base, *n, c)? {
                out.add_term(group, vec![x.clone(), x], coeff)?;
            }
        }
        Ok(out)
    }

    /// Normalized bar boundary; the tail bound is multiplied by `n + 1`.
    pub fn boundary<G: Group<Elem = E>>(&self, group: &G) -> Result<Self> {
        let n = self.degree;
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        let full = self.expanded(group)?;
        let mut out = Self::zero(n - 1);
        for (t, c) in &full.support {
            out.add_term(group, t[1..].to_vec(), c.clone())?;
            for i in 1..n {
                let mut merged = Vec::with_capacity(n - 1);
                merged.extend_from_slice(&t[..i - 1]);
                merged.push(group.mul(&t[i - 1], &t[i]));
                merged.extend_from_slice(&t[i + 1..]);
                let s = if i % 2 == 1 { -c.clone() } else { c.clone() };
                out.add_term(group, merged, s)?;
            }
            let s = if n % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(group, t[..n - 1].to_vec(), s)?;
        }
        out.extra_tail = self.tail_bound() * q(n as i64 + 1);
        Ok(out)
    }

    /// Applies `phi` to every entry and to every block base.
    pub fn pushforward<G: AutGroup<Elem = E>>(&self, group: &G, phi: &G::Aut) -> Self {
        let mut out = Self::zero(self.degree);
        for (t, c) in &self.support {
            let image = t.iter().map(|x| group.apply(phi, x)).collect();
            add_into(&mut out.support, image, c.clone());
        }
        for ((base, n), c) in &self.m_blocks {
            add_into(&mut out.m_blocks, (group.apply(phi, base), *n), c.clone());
        }
        out.extra_tail = self.extra_tail.clone();
        out
    }

    /// Same as [`L1Chain::pushforward`] for maps given as closures.
    pub fn map_entries<G: Group<Elem = E>>(&self, group: &G, f: impl Fn(&E) -> E) -> Self {
        let mut out = Self::zero(self.degree);
        for (t, c) in &self.support {
            let image: Vec<E> = t.iter().map(&f).collect();
            if image.iter().any(|x| group.is_identity(x)) {
                continue;
            }
            add_into(&mut out.support, image, c.clone());
        }
        for ((base, n), c) in &self.m_blocks {
            let b = f(base);
            if !group.is_identity(&b) {
                add_into(&mut out.m_blocks, (b, *n), c.clone());
            }
        }
        out.extra_tail = self.extra_tail.clone();
        out
    }
}

/// `m(g) = sum_{k=1}^{N} 2^-k [g^(2^(k-1)) | g^(2^(k-1))]` with tail `2^-N`;
/// `m(1) = 0` in normalized chains.
pub fn m_chain<G: Group>(group: &G, g: &G::Elem, cutoff: u32) -> Result<L1Chain<G::Elem>> {
    if cutoff > MAX_CUTOFF {
        return Err(Error::ResourceCap(format!("m-series cutoff {cutoff} exceeds {MAX_CUTOFF}")));
    }
    let mut z = L1Chain::zero(2);
    if !group.is_identity(g) {
        z.m_blocks.insert((g.clone(), cutoff), q(1));
    }
    Ok(z)
}

/// `m2(g, h) = [g|h] - m(g) + m(gh) - m(h)`.
pub fn m2_chain<G: Group>(group: &G, g: &G::Elem, h: &G::Elem, cutoff: u32) -> Result<L1Chain<G::Elem>> {
    let gh = group.mul(g, h);
    let bar = L1Chain::from_terms(group, 2, [(vec![g.clone(), h.clone()], q(1))])?;
    bar.sub(&m_chain(group, g, cutoff)?)?
        .add(&m_chain(group, &gh, cutoff)?)?
        .sub(&m_chain(group, h, cutoff)?)
}
