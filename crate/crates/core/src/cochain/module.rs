use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::group::{FiniteGroup, FreeGroup, Group};
use crate::rational::Q;

/// A left `G`-module of cochain values.
pub trait Module<G: Group>: Send + Sync {
    type Value: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn act(&self, g: &G::Elem, v: &Self::Value) -> Self::Value;

    /// Whether `G` acts by the identity; the sup norm is then preserved by `act`.
    fn is_trivial(&self) -> bool {
        false
    }

    /// Equality of values; modules whose values are representatives override this.
    fn equal(&self, a: &Self::Value, b: &Self::Value) -> bool {
        a == b
    }

    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        self.add(a, &self.neg(b))
    }

    fn signed(&self, v: &Self::Value, negative: bool) -> Self::Value {
        if negative {
            self.neg(v)
        } else {
            v.clone()
        }
    }
}

/// `Q` with the trivial action.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialScalar;

impl<G: Group> Module<G> for TrivialScalar {
    type Value = Q;

    fn zero(&self) -> Q {
        Q::zero()
    }

    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }

    fn neg(&self, a: &Q) -> Q {
        -a
    }

    fn act(&self, _: &G::Elem, v: &Q) -> Q {
        v.clone()
    }

    fn is_trivial(&self) -> bool {
        true
    }
}

pub type Matrix = Vec<Vec<Q>>;

pub fn mat_identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(Q::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `Q^n` with a free group acting through given generator matrices.
#[derive(Clone, Debug)]
pub struct FreeMatrixModule {
    dim: usize,
    gens: Vec<Matrix>,
    gens_inv: Vec<Matrix>,
}

impl FreeMatrixModule {
    /// `gens_inv[i]` must invert `gens[i]`; this is checked.
    pub fn new(dim: usize, gens: Vec<Matrix>, gens_inv: Vec<Matrix>) -> crate::Result<Self> {
        for (a, b) in gens.iter().zip(&gens_inv) {
            if mat_mul(a, b) != mat_identity(dim) || mat_mul(b, a) != mat_identity(dim) {
                return Err(crate::Error::Invalid("generator matrix not invertible as given".into()));
            }
        }
        Ok(FreeMatrixModule { dim, gens, gens_inv })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: &crate::group::ReducedWord) -> Matrix {
        g.letters().iter().fold(mat_identity(self.dim), |acc, &x| {
            let m = if x > 0 { &self.gens[x as usize - 1] } else { &self.gens_inv[(-x) as usize - 1] };
            mat_mul(&acc, m)
        })
    }
}

impl Module<FreeGroup> for FreeMatrixModule {
    type Value = Vec<Q>;

    fn zero(&self) -> Vec<Q> {
        vec![Q::zero(); self.dim]
    }

    fn add(&self, a: &Vec<Q>, b: &Vec<Q>) -> Vec<Q> {
        vec_add(a, b)
    }

    fn neg(&self, a: &Vec<Q>) -> Vec<Q> {
        a.iter().map(|x| -x).collect()
    }

    fn act(&self, g: &crate::group::ReducedWord, v: &Vec<Q>) -> Vec<Q> {
        // apply letters right to left so that the word acts as a product
        g.letters().iter().rev().fold(v.clone(), |acc, &x| {
            let m = if x > 0 { &self.gens[x as usize - 1] } else { &self.gens_inv[(-x) as usize - 1] };
            mat_vec(m, &acc)
        })
    }
}

/// `Q^n` with a finite group acting through one matrix per element.
#[derive(Clone, Debug)]
pub struct FiniteMatrixModule {
    dim: usize,
    mats: Vec<Matrix>,
}

impl FiniteMatrixModule {
    /// Checks that the matrices form a representation of `g`.
    pub fn new(g: &FiniteGroup, dim: usize, mats: Vec<Matrix>) -> crate::Result<Self> {
        if mats.len() != g.order() || mats[g.identity()] != mat_identity(dim) {
            return Err(crate::Error::Invalid("bad representation size or identity".into()));
        }
        for a in g.elements() {
            for b in g.elements() {
                if mat_mul(&mats[a], &mats[b]) != mats[g.mul(&a, &b)] {
                    return Err(crate::Error::Invalid("matrices are not a representation".into()));
                }
            }
        }
        Ok(FiniteMatrixModule { dim, mats })
    }
}

impl Module<FiniteGroup> for FiniteMatrixModule {
    type Value = Vec<Q>;

    fn zero(&self) -> Vec<Q> {
        vec![Q::zero(); self.dim]
    }

    fn add(&self, a: &Vec<Q>, b: &Vec<Q>) -> Vec<Q> {
        vec_add(a, b)
    }

    fn neg(&self, a: &Vec<Q>) -> Vec<Q> {
        a.iter().map(|x| -x).collect()
    }

    fn act(&self, g: &usize, v: &Vec<Q>) -> Vec<Q> {
        mat_vec(&self.mats[*g], v)
    }
}
