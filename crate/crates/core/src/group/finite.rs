use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{AutGroup, Group};
use crate::error::{Error, Result};
use crate::sampling::Rng;

/// A finite group given by its multiplication table. Elements are 0-based
/// indices internally; the file format and display are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CayleyFile {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// `table[i][j]` is the index of `i*j`, all 0-based. Checks the Latin
    /// square property, the identity and associativity exhaustively.
    pub fn from_table(identity: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: String| Err(Error::Invalid(m));
        if n == 0 || identity >= n {
            return bad("empty table or identity out of range".into());
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {} has length {}", i + 1, row.len()));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return bad(format!("row {} is not a permutation", i + 1));
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[j]], true) {
                    return bad(format!("column {} is not a permutation", j + 1));
                }
            }
        }
        for i in 0..n {
            if table[identity][i] != i || table[i][identity] != i {
                return bad(format!("element {} is not the identity", identity + 1));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("not associative at ({}, {}, {})", a + 1, b + 1, c + 1));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).unwrap())
            .collect();
        Ok(FiniteGroup { order: n, identity, table, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(0, table).expect("cyclic table is a group")
    }

    /// Parses the 1-based JSON format `{order, identity, table}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: CayleyFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("cayley table: {e}")))?;
        if f.table.len() != f.order || f.identity == 0 {
            return Err(Error::Invalid("order does not match table or identity not 1-based".into()));
        }
        let table = f
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| x.checked_sub(1).ok_or_else(|| Error::Invalid("entry 0 in 1-based table".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(f.identity - 1, table)
    }

    pub fn to_json(&self) -> String {
        let f = CayleyFile {
            order: self.order,
            identity: self.identity + 1,
            table: self.table.iter().map(|r| r.iter().map(|x| x + 1).collect()).collect(),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The automorphism given by a permutation of 0-based element indices.
    pub fn automorphism(&self, forward: Vec<usize>) -> Result<Permutation> {
        let n = self.order;
        if forward.len() != n {
            return Err(Error::Invalid("permutation has the wrong length".into()));
        }
        let mut backward = vec![usize::MAX; n];
        for (i, &x) in forward.iter().enumerate() {
            if x >= n || backward[x] != usize::MAX {
                return Err(Error::Invalid("not a permutation".into()));
            }
            backward[x] = i;
        }
        for a in 0..n {
            for b in 0..n {
                if forward[self.table[a][b]] != self.table[forward[a]][forward[b]] {
                    return Err(Error::Invalid(format!(
                        "permutation is not a homomorphism at ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(Permutation { forward, backward })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl Permutation {
    pub fn forward(&self) -> &[usize] {
        &self.forward
    }
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }

    fn inv(&self, a: &usize) -> usize {
        self.inverses[*a]
    }

    fn contains(&self, a: &usize) -> bool {
        *a < self.order
    }

    fn random_element(&self, rng: &mut Rng, length: usize) -> usize {
        if length == 0 {
            self.identity
        } else {
            rng.gen_range(0..self.order)
        }
    }

    fn format_elem(&self, a: &usize) -> String {
        (a + 1).to_string()
    }

    fn power(&self, a: &usize, k: i64) -> Result<usize> {
        let e = k.rem_euclid(self.order as i64);
        let mut acc = self.identity;
        for _ in 0..e {
            acc = self.table[acc][*a];
        }
        Ok(acc)
    }
}

impl AutGroup for FiniteGroup {
    type Aut = Permutation;

    fn apply(&self, phi: &Permutation, g: &usize) -> usize {
        phi.forward[*g]
    }

    fn apply_inverse(&self, phi: &Permutation, g: &usize) -> usize {
        phi.backward[*g]
    }

    fn compose(&self, phi: &Permutation, psi: &Permutation) -> Permutation {
        Permutation {
            forward: psi.forward.iter().map(|&x| phi.forward[x]).collect(),
            backward: phi.backward.iter().map(|&x| psi.backward[x]).collect(),
        }
    }

    fn inverse(&self, phi: &Permutation) -> Permutation {
        Permutation { forward: phi.backward.clone(), backward: phi.forward.clone() }
    }

    fn identity_aut(&self) -> Permutation {
        let id: Vec<_> = self.elements().collect();
        Permutation { forward: id.clone(), backward: id }
    }

    fn inner(&self, g: &usize) -> Permutation {
        let forward = self.elements().map(|x| self.conj(g, &x)).collect();
        self.automorphism(forward).expect("conjugation is an automorphism")
    }

    fn generators(&self) -> Vec<usize> {
        self.elements().collect()
    }

    fn aut_from_maps(
        &self,
        forward: &dyn Fn(&usize) -> usize,
        backward: &dyn Fn(&usize) -> usize,
    ) -> Result<Permutation> {
        let phi = self.automorphism(self.elements().map(|x| forward(&x)).collect())?;
        if self.elements().any(|x| phi.backward[x] != backward(&x)) {
            return Err(Error::Invalid("backward map does not invert forward map".into()));
        }
        Ok(phi)
    }
}
