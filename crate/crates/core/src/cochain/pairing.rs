use num_traits::{Signed, Zero};

use super::ScalarCochain;
use crate::chains::L1Chain;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::rational::{fmt_q, Q};

/// `<c, z>` over the finite part, with the radius of the certified interval
/// containing the value on the full (untruncated) chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairing {
    pub value: Q,
    pub error_bound: Q,
}

/// Evaluates `c` on the chain. m-series blocks contribute exactly zero for a
/// cochain marked homogeneous, since every term is `c(x, x)` with `x` a power
/// of the base; otherwise their terms are evaluated and the tail costs
/// `norm_bound * tail`.
pub fn pair<G: Group + 'static>(c: &ScalarCochain<G>, z: &L1Chain<G::Elem>) -> Result<Pairing> {
    if c.degree() != z.degree() {
        return Err(Error::DegreeMismatch(format!(
            "pairing a degree-{} cochain with a degree-{} chain",
            c.degree(),
            z.degree()
        )));
    }
    let mut value = Q::zero();
    for (t, coeff) in z.support() {
        value += coeff * c.eval(t)?;
    }
    let mut unstructured = z.extra_tail().clone();
    if !c.is_homogeneous() {
        let g = c.group();
        for ((base, n), coeff) in z.m_blocks() {
            for (x, k) in L1Chain::block_terms(&**g, base, *n, coeff)? {
                value += k * c.eval(&[x.clone(), x])?;
            }
        }
        unstructured += z.m_tail();
    }
    let error_bound = if unstructured.is_zero() {
        Q::zero()
    } else {
        match c.norm_bound() {
            Some(b) => b.abs() * unstructured,
            None => return Err(Error::MissingNormBound(fmt_q(&unstructured))),
        }
    };
    Ok(Pairing { value, error_bound })
}
