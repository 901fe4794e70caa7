//! Free lattice kernel.
//!
//! Terms are hash-consed in a [`TermArena`]; the order is decided by
//! Whitman's recursion, canonical forms are computed by the standard
//! reduction, and on top of that sit join covers, the `E` relation, the
//! `Psi` predicate, the embedding of finite bipartite posets into free
//! lattices, and Whitman's embedding of countably generated free lattices
//! into `F_3`.

pub mod bipartite;
pub mod canonical;
pub mod covers;
mod order;
pub mod parse;
pub mod reduction;
pub mod sample;
pub mod term;
pub mod whitman_embed;

pub use bipartite::{AESentence, BipartiteStructure};
pub use canonical::CanonicalTerm;
pub use covers::{CoverError, JoinCover, PsiCondition, PsiReport};
pub use parse::{parse_raw, parse_term, RawTerm, VarNames};
pub use reduction::{Conclusion, Mode, ReductionError, ReductionReport};
pub use sample::Sampler;
pub use term::{GeneratorId, Node, PrintStyle, TermArena, TermError, TermId};
pub use whitman_embed::{ChainError, GeneratorChain};
