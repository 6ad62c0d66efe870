//! Lazy oracle for the pruned Cayley tree `Γ*` and the graph `Ĥ` built on it.
//!
//! Nothing infinite is ever materialized. Island `j` is derived on demand
//! from `w_j`, and every question about a vertex is answered from the vertex
//! word itself:
//!
//! * [`Oracle::island_of`] places a reduced word in at most one island `Y_j`;
//! * [`Oracle::survives`] decides membership in `Γ*` by matching prefix
//!   decompositions against the per-island removal pattern and then applying
//!   the final prune of high labels away from the islands;
//! * [`Oracle::e_set`] gives the finite label set `E_v` of tree edges at a
//!   vertex; every other label is a loop.

mod crosscheck;
mod island;
pub(crate) mod ray;
mod sample;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::cache::{Budget, Memo, CACHE_BYTES_ENV, DEFAULT_CACHE_BYTES};
use crate::error::{Error, Result};
use crate::words::{anchor_len, word_len, Letter, ReducedWord};

pub use crosscheck::{CrossCheckReport, Disagreement};
pub use island::{IslandData, Membership};

use island::{candidate_island, Island};
use ray::{ray_letter, ray_prefix_len, RayForm};

/// A reduced word certified to be a vertex of `Γ*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(ReducedWord);

impl Vertex {
    /// The base vertex `𝟙`.
    pub fn base() -> Self {
        Vertex(ReducedWord::identity())
    }

    pub fn word(&self) -> &ReducedWord {
        &self.0
    }

    pub fn into_word(self) -> ReducedWord {
        self.0
    }

    pub fn is_base(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn certified(word: ReducedWord) -> Self {
        Vertex(word)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({})", self.0)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// The set `E_v`: labels whose edges at `v` are tree edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LabelSet(BTreeSet<u32>);

impl LabelSet {
    pub fn new(labels: impl IntoIterator<Item = u32>) -> Self {
        LabelSet(labels.into_iter().collect())
    }

    pub fn contains(&self, label: u32) -> bool {
        self.0.contains(&label)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The minimal `n >= 2` with `E_v ⊆ {1, ..., n}`.
    pub fn level(&self) -> u32 {
        self.0.iter().next_back().copied().unwrap_or(0).max(2)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, label) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        f.write_str("}")
    }
}

/// Why a word is cut out of the tree by the removal pattern of one island.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Removal {
    /// A core prefix followed directly by a label above the island level.
    AboveLevel { prefix_len: usize, label: u32 },
    /// A core prefix, a run `a_s^{±r}` along a line, then a label outside `{1, 2, s}`.
    LineExit {
        prefix_len: usize,
        line: u32,
        run: usize,
        label: u32,
    },
    /// The same exit, taken from the half-line that runs from the core towards
    /// the identity (the parent of the core vertex nearest `𝟙`, then `a_s^{-r}`).
    InwardLineExit { line: u32, run: usize, label: u32 },
}

/// Result of following one edge of `Ĥ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Tree(Vertex),
    Loop,
}

pub struct Oracle {
    budget: Budget,
    islands: Memo<u64, Arc<Island>>,
    verdicts: Memo<ReducedWord, bool>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::with_cache_bytes(DEFAULT_CACHE_BYTES)
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("islands_cached", &self.islands.len())
            .field("verdicts_cached", &self.verdicts.len())
            .finish()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `0` disables memoization entirely.
    pub fn with_cache_bytes(bytes: usize) -> Self {
        Oracle {
            budget: Budget::new(bytes),
            islands: Memo::new(),
            verdicts: Memo::new(),
        }
    }

    /// Reads the byte cap from `EARRING_CACHE_BYTES`; unset or unparsable
    /// values fall back to the default.
    pub fn from_env() -> Self {
        let bytes = std::env::var(CACHE_BYTES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_CACHE_BYTES);
        Self::with_cache_bytes(bytes)
    }

    pub fn cached_entries(&self) -> usize {
        self.islands.len() + self.verdicts.len()
    }

    pub(crate) fn island(&self, j: u64) -> Result<Arc<Island>> {
        if let Some(island) = self.islands.get(&j) {
            return Ok(island);
        }
        let island = Arc::new(Island::build(j)?);
        self.islands
            .insert(j, island.clone(), island.footprint(), &self.budget);
        Ok(island)
    }

    /// Island `j`: `w_j`, `ŵ_j`, `n_j` and the `Z_j` edge-path.
    pub fn island_data(&self, j: u64) -> Result<IslandData> {
        self.island(j)?.data()
    }

    pub(crate) fn membership_form(&self, v: &RayForm) -> Option<(u64, Membership)> {
        let j = candidate_island(v.along)?;
        let island = self.island(j).ok()?;
        island.membership(v).map(|m| (j, m))
    }

    /// The island containing `v` together with how it belongs there.
    pub fn membership(&self, v: &ReducedWord) -> Option<(u64, Membership)> {
        self.membership_form(&RayForm::of(v.letters()))
    }

    /// The unique `j` with `v ∈ Y_j`.
    pub fn island_of(&self, v: &ReducedWord) -> Option<u64> {
        self.membership(v).map(|(j, _)| j)
    }

    /// Whether island `j`'s removal pattern cuts `v` out of the tree.
    pub fn removal(&self, v: &ReducedWord, j: u64) -> Result<Option<Removal>> {
        let island = self.island(j)?;
        let letters = v.letters();
        Ok(removal_by(&island, letters, ray_prefix_len(letters)))
    }

    /// Whether `v` is a vertex of `Γ*`.
    pub fn survives(&self, v: &ReducedWord) -> bool {
        if let Some(verdict) = self.verdicts.get(v) {
            return verdict;
        }
        let verdict = self.survives_uncached(v.letters());
        let cost = std::mem::size_of::<ReducedWord>() + 4 * v.len() + 32;
        self.verdicts.insert(v.clone(), verdict, cost, &self.budget);
        verdict
    }

    fn survives_uncached(&self, letters: &[Letter]) -> bool {
        let along = ray_prefix_len(letters);
        // An island can only touch words whose length reaches
        // |ŵ_j| - 2|w_j| - 1, and that bound grows with j.
        for j in 1u64.. {
            let anchor = anchor_len(j).expect("j >= 1");
            let len = word_len(j).expect("j >= 1") as u128;
            if anchor - 2 * len - 1 > letters.len() as u128 {
                break;
            }
            // Every prefix the pattern inspects shares at least
            // |ŵ_j| - |w_j| - 1 letters with the ray.
            if anchor - len - 1 > along as u128 {
                break;
            }
            let island = self.island(j).expect("j >= 1");
            if removal_by(&island, letters, along).is_some() {
                return false;
            }
        }
        // Off the islands every label other than a_1, a_2 is pruned.
        (0..letters.len())
            .filter(|&m| letters[m].index() >= 3)
            .all(|m| {
                self.membership_form(&RayForm::of_prefix(letters, along, m))
                    .is_some()
            })
    }

    /// Certifies `word` as a vertex of `Γ*`.
    pub fn vertex(&self, word: ReducedWord) -> Result<Vertex> {
        if self.survives(&word) {
            Ok(Vertex(word))
        } else {
            Err(Error::NotAVertex(word.to_string()))
        }
    }

    pub(crate) fn e_set_form(&self, v: &RayForm) -> LabelSet {
        match self.membership_form(v) {
            None => LabelSet::new([1, 2]),
            Some((j, Membership::Core)) => {
                let level = self.island(j).expect("candidate island exists").level;
                LabelSet::new(1..=level)
            }
            Some((_, Membership::Line(s))) => LabelSet::new([1, 2, s]),
        }
    }

    pub fn e_set(&self, v: &Vertex) -> LabelSet {
        self.e_set_form(&RayForm::of(v.word().letters()))
    }

    /// Follows the edge of `Ĥ` at `v` labelled by `letter`.
    pub fn neighbor(&self, v: &Vertex, letter: Letter) -> Move {
        if self.e_set(v).contains(letter.index()) {
            let next = v.word().times(letter);
            debug_assert!(self.survives(&next), "tree move off Γ* from {v}");
            Move::Tree(Vertex(next))
        } else {
            Move::Loop
        }
    }
}

/// The removal pattern of one island, matched against every prefix
/// decomposition of `letters` (`along` is their common prefix with the ray).
fn removal_by(island: &Island, letters: &[Letter], along: usize) -> Option<Removal> {
    let len = letters.len();
    let (lo, hi) = island.window;
    let n = island.level;
    let w_len = island.word_len();

    // Core prefixes either lie on the ray (length within the window) or leave
    // it after `along` letters with a tail no longer than |w_j|.
    let on_ray = (lo.min(usize::MAX as u128) as usize)..=(hi.min(along as u128) as usize);
    let off_ray = (along + 1)..=(along + w_len);
    for t in on_ray.chain(off_ray).filter(|&t| t < len) {
        if !island.in_core(&RayForm::of_prefix(letters, along, t)) {
            continue;
        }
        if island.in_core(&RayForm::of_prefix(letters, along, t + 1)) {
            continue;
        }
        let first = letters[t];
        if first.index() > n {
            return Some(Removal::AboveLevel {
                prefix_len: t,
                label: first.index(),
            });
        }
        let run = letters[t..].iter().take_while(|&&l| l == first).count();
        if let Some(next) = letters.get(t + run) {
            let k = next.index();
            if k != 1 && k != 2 && k != first.index() {
                return Some(Removal::LineExit {
                    prefix_len: t,
                    line: first.index(),
                    run,
                    label: k,
                });
            }
        }
    }

    let p = island.root_parent.along;
    let s = island.root_label;
    if along >= p && len > p {
        let inward = Letter::generator(s).inverse();
        let run = letters[p..].iter().take_while(|&&l| l == inward).count();
        if let Some(next) = letters.get(p + run) {
            let k = next.index();
            if k != 1 && k != 2 && k != s {
                return Some(Removal::InwardLineExit {
                    line: s,
                    run,
                    label: k,
                });
            }
        }
    }
    None
}

/// `Some(r)` when `v = (u a_s^r)'`, found by testing whether `(u^{-1} v)'` is
/// a power of `a_s`.
pub fn in_line(v: &ReducedWord, u: &ReducedWord, s: u32) -> Option<i64> {
    let q = u.quotient(v);
    let generator = Letter::generator(s);
    let letters = q.letters();
    if letters.iter().all(|&l| l == generator) {
        Some(letters.len() as i64)
    } else if letters.iter().all(|&l| l == generator.inverse()) {
        Some(-(letters.len() as i64))
    } else {
        None
    }
}

/// The vertex `a_1 a_2 a_1 ...` of the given length on the zig-zag ray.
pub fn ray_vertex(len: usize) -> Vertex {
    Vertex(ReducedWord::from_reduced_unchecked(
        (0..len).map(ray_letter).collect(),
    ))
}
