//! Cantor normal form ordinals, ranks of well-founded posets, and ranked
//! sums of poset families.
//!
//! The [`lemma`] module compares ranks in a ranked sum against the additive
//! bounds `rank_T(f(a)) + rank_{f(a)}(a)` and its switched form, builds the
//! parametric families on which those bounds fail by any prescribed ordinal
//! gap, and checks exhaustively that the first bound holds on small finite
//! families.

pub mod lemma;
pub mod ordinal;
pub mod poset;
pub mod rankedsum;

pub use lemma::{BoundKind, GapReport};
pub use ordinal::{DepthCap, Ordinal, OrdinalError};
pub use poset::{Element, FinitePoset, OrdinalChain, Poset, PosetError};
pub use rankedsum::{Address, Components, FamilyError, FamilySpec, RankedFamily, SumElement};
