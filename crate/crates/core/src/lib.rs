//! Symbolic model of a core-free semicovering `q: Ĥ → H` of the Hawaiian
//! Earring.
//!
//! `Ĥ` is a graph built on a pruned subtree `Γ*` of the Cayley tree of the
//! free group `F_∞ = ⟨a_1, a_2, ...⟩`: around each word `w_j` of a fixed
//! enumeration an "island" of bounded branching is grafted onto the zig-zag
//! ray `a_1 a_2 a_1 ...`, every other vertex keeps only its `a_1`/`a_2` edges,
//! and all missing labels are attached as loops. The crate answers questions
//! about this infinite graph lazily:
//!
//! * [`words`]: free-group words, the enumeration `w_j` and anchor words;
//! * [`graph`]: island membership, survival in `Γ*`, the label sets `E_v`;
//! * [`lifting`]: lifts of edge-words and membership in the subgroup `K`;
//! * [`corefree`]: conjugators whose conjugates leave `K`, and scans over
//!   all words up to a weight;
//! * [`charts`]: the circle parametrizations, the chart atlas of `q` and
//!   its local inverses.

pub mod cache;
pub mod charts;
pub mod corefree;
pub mod error;
pub mod graph;
pub mod lifting;
pub mod words;

pub use cache::CACHE_BYTES_ENV;
pub use error::{Error, Result};
pub use graph::{in_line, IslandData, LabelSet, Membership, Move, Oracle, Removal, Vertex};
pub use words::{Letter, ReducedWord, Word};
