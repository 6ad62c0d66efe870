//! Independent check of the per-island removal pattern.
//!
//! The pattern in [`Oracle::removal`] works on prefix decompositions. The
//! check here instead uses the direct description of the pruning step: a
//! vertex is cut when it hangs off `Y_j` by an edge whose label is neither
//! `a_1` nor `a_2`, and everything behind it goes with it. `Y_j` membership
//! on this side is decided from the definitions (`Z_j` as an explicit set,
//! lines by [`in_line`]), never through the ray-relative tables.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{in_line, Oracle, Removal};
use crate::error::{Error, Result};
use crate::words::{Letter, ReducedWord, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub word: ReducedWord,
    pub by_pattern: bool,
    pub by_neighbourhood: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub island: u64,
    pub radius: u32,
    pub level: u32,
    /// Vertices of the truncated island the neighbourhood was grown from.
    pub island_vertices: usize,
    pub words_checked: usize,
    pub removed: usize,
    /// Removals that only the inward half-line branch of the pattern catches.
    pub removed_via_inward_line: usize,
    pub disagreements: Vec<Disagreement>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

struct DirectIsland {
    level: u32,
    z_set: BTreeSet<ReducedWord>,
}

impl DirectIsland {
    fn contains(&self, v: &ReducedWord) -> bool {
        self.z_set.contains(v)
            || self
                .z_set
                .iter()
                .any(|u| (1..=self.level).any(|s| in_line(v, u, s).is_some()))
    }

    /// Cut iff some prefix in `Y_j` is followed by a label >= 3 leading out of `Y_j`.
    fn removes(&self, v: &ReducedWord) -> bool {
        (0..v.len()).any(|m| {
            v.letters()[m].index() >= 3
                && self.contains(&v.prefix(m))
                && !self.contains(&v.prefix(m + 1))
        })
    }
}

fn letters_up_to(max_index: u32) -> Vec<Letter> {
    (1..=max_index)
        .flat_map(|i| [Letter::generator(i), Letter::generator(i).inverse()])
        .collect()
}

impl Oracle {
    /// Compares the removal pattern of island `j` with the direct rule on
    /// every reduced word within `radius` edges of the island, where lines are
    /// truncated to `|r| <= radius` and labels range over `1..=n_j + 2`
    /// (all labels above `n_j` behave alike).
    pub fn removal_cross_check(&self, j: u64, radius: u32) -> Result<CrossCheckReport> {
        if radius == 0 {
            return Err(Error::TooSmall("radius", 1));
        }
        let data = self.island_data(j)?;
        let direct = DirectIsland {
            level: data.level,
            z_set: data.z_set.clone(),
        };

        let r = radius as i64;
        let mut seeds: BTreeSet<ReducedWord> = BTreeSet::new();
        for u in &data.z_set {
            for s in 1..=data.level {
                for power in -r..=r {
                    let step = Letter::generator(s);
                    let step = if power < 0 { step.inverse() } else { step };
                    let w = Word::new(vec![step; power.unsigned_abs() as usize]);
                    seeds.insert(u.times_word(&w));
                }
            }
        }

        let alphabet = letters_up_to(data.level + 2);
        let mut ball = seeds.clone();
        let mut frontier: Vec<ReducedWord> = seeds.iter().cloned().collect();
        for _ in 0..radius {
            let mut next = Vec::new();
            for v in &frontier {
                for &l in &alphabet {
                    let w = v.times(l);
                    if ball.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }

        let mut removed = 0;
        let mut inward = 0;
        let mut disagreements = Vec::new();
        for v in &ball {
            let pattern = self.removal(v, j)?;
            let by_pattern = pattern.is_some();
            let by_neighbourhood = direct.removes(v);
            removed += by_pattern as usize;
            inward += matches!(pattern, Some(Removal::InwardLineExit { .. })) as usize;
            if by_pattern != by_neighbourhood {
                disagreements.push(Disagreement {
                    word: v.clone(),
                    by_pattern,
                    by_neighbourhood,
                });
            }
        }

        Ok(CrossCheckReport {
            island: j,
            radius,
            level: data.level,
            island_vertices: seeds.len(),
            words_checked: ball.len(),
            removed,
            removed_via_inward_line: inward,
            disagreements,
        })
    }
}
