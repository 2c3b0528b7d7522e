//! l1-chains with certified tails, bar boundaries, and the chains `m`, `m2`.

mod dump;
mod homogeneous;
mod l1;

pub use dump::{ChainDump, MSeriesDump, TailKind, TermDump};
pub use homogeneous::HomChain;
pub use l1::{m2_chain, m_chain, L1Chain, MAX_CUTOFF};
