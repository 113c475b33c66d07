//! Formal concept analysis toolkit: packed-bit formal contexts, concept
//! lattice enumeration, concept reduction preserving binary relations, and
//! bit-parallel attribute reduction preserving concept extents.
//!
//! All core types are generic over the backing machine word ([`Word`],
//! `u32` or `u64`); semantics are width-independent. The `u32` aliases
//! below are the defaults used by the command line tool.

pub mod attr;
pub mod bitvec;
pub mod context;
pub mod error;
pub mod lattice;
pub mod reduction;

pub use attr::{greedy_attr_reduce, rotation_reducts, ColumnStore, ReductReport};
pub use bitvec::{BitVec, Word};
pub use context::FormalContext;
pub use error::{Error, Result};
pub use lattice::{enumerate_concepts, ConceptList, FormalConcept};
pub use reduction::{classify, classify_by_definition, ConceptClass};

/// Word width used by the command line tools; matches the 32-bit packing
/// of the reference procedure.
pub type DefaultWord = u32;

pub type BitVec32 = BitVec<u32>;
pub type BitVec64 = BitVec<u64>;

/// Object sets are bit vectors of length `m`.
pub type ObjSet<W = DefaultWord> = BitVec<W>;
/// Attribute sets are bit vectors of length `n`.
pub type AttrSet<W = DefaultWord> = BitVec<W>;

pub type Context32 = FormalContext<u32>;
pub type Context64 = FormalContext<u64>;
pub type Concept32 = FormalConcept<u32>;
pub type Concept64 = FormalConcept<u64>;
