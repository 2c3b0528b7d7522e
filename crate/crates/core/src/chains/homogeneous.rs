use std::collections::BTreeMap;

use num_traits::Zero;

use crate::group::Group;
use crate::rational::Q;

/// A chain of the homogeneous bar resolution: formal sum of `(n+1)`-tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomChain<E: Ord> {
    degree: usize,
    terms: BTreeMap<Vec<E>, Q>,
}

impl<E: Clone + Ord> HomChain<E> {
    pub fn zero(degree: usize) -> Self {
        HomChain { degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Vec<E>, Q)>) -> Self {
        let mut z = Self::zero(degree);
        for (t, c) in terms {
            z.add_term(t, c);
        }
        z
    }

    pub fn add_term(&mut self, tuple: Vec<E>, c: Q) {
        assert_eq!(tuple.len(), self.degree + 1, "homogeneous tuple length");
        let e = self.terms.entry(tuple).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<E>, Q> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    /// `d = sum_{i=0}^{n} (-1)^i d_i` with `d_i` omitting entry `i`. A degree-0
    /// chain has boundary zero in degree 0 (no augmentation).
    pub fn boundary(&self) -> Self {
        let n = self.degree;
        if n == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(n - 1);
        for (t, c) in &self.terms {
            for i in 0..=n {
                let mut face = t.clone();
                face.remove(i);
                out.add_term(face, if i % 2 == 1 { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// `s(x_0..x_n) = (1, x_0..x_n)`.
    pub fn cone<G: Group<Elem = E>>(&self, group: &G) -> Self {
        let mut out = Self::zero(self.degree + 1);
        for (t, c) in &self.terms {
            let mut u = Vec::with_capacity(t.len() + 1);
            u.push(group.identity());
            u.extend_from_slice(t);
            out.add_term(u, c.clone());
        }
        out
    }
}
