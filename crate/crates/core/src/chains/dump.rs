use serde::{Deserialize, Serialize};

use super::L1Chain;
use crate::error::{Error, Result};
use crate::group::{FreeGroup, ReducedWord};
use crate::rational::{fmt_q, parse_q};

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct TermDump {
    pub tuple: Vec<String>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct MSeriesDump {
    pub base: String,
    pub cutoff: u32,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(untagged)]
pub enum TailKind {
    None(String),
    MSeries(Vec<MSeriesDump>),
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ChainDump {
    pub degree: usize,
    pub terms: Vec<TermDump>,
    pub tail_bound: String,
    pub tail_kind: TailKind,
    /// Tail not carried by m-series blocks.
    pub extra_tail: String,
}

impl ChainDump {
    pub fn from_chain(z: &L1Chain<ReducedWord>) -> Self {
        let terms = z
            .support()
            .iter()
            .map(|(t, c)| TermDump { tuple: t.iter().map(|x| x.to_string()).collect(), coeff: fmt_q(c) })
            .collect();
        let blocks: Vec<_> = z
            .m_blocks()
            .iter()
            .map(|((b, n), c)| MSeriesDump { base: b.to_string(), cutoff: *n, coeff: fmt_q(c) })
            .collect();
        ChainDump {
            degree: z.degree(),
            terms,
            tail_bound: fmt_q(&z.tail_bound()),
            tail_kind: if blocks.is_empty() { TailKind::None("none".into()) } else { TailKind::MSeries(blocks) },
            extra_tail: fmt_q(z.extra_tail()),
        }
    }

    pub fn to_chain(&self, group: &FreeGroup) -> Result<L1Chain<ReducedWord>> {
        let mut z = L1Chain::zero(self.degree);
        for t in &self.terms {
            let tuple = t.tuple.iter().map(|s| group.parse(s)).collect::<Result<Vec<_>>>()?;
            z.add_term(group, tuple, parse_q(&t.coeff)?)?;
        }
        if let TailKind::MSeries(blocks) = &self.tail_kind {
            for b in blocks {
                let base = group.parse(&b.base)?;
                let m = super::m_chain(group, &base, b.cutoff)?.scale(&parse_q(&b.coeff)?);
                z = z.add(&m)?;
            }
        }
        let extra = parse_q(&self.extra_tail)?;
        let z = z.with_extra_tail(extra);
        if fmt_q(&z.tail_bound()) != self.tail_bound {
            return Err(Error::Parse("tail_bound inconsistent with blocks".into()));
        }
        Ok(z)
    }
}
