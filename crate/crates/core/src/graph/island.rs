use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::ray::RayForm;
use crate::error::Result;
use crate::words::{anchor, anchor_len, enumerate, word_len, ReducedWord, Word};

/// How a vertex belongs to its island.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "label")]
pub enum Membership {
    /// On the `w_j` edge-path from the anchor.
    Core,
    /// On a line `L_{u,s}` through a core vertex but off the path itself.
    Line(u32),
}

/// Range of ray-prefix lengths a vertex of island `j` can have:
/// `[|ŵ_j| - |w_j| - 1, |ŵ_j| + |w_j| + 1]`. Consecutive windows abut and
/// never overlap, so a vertex has at most one candidate island.
pub(crate) fn window(j: u64) -> Result<(u128, u128)> {
    let anchor = anchor_len(j)?;
    let len = word_len(j)? as u128;
    Ok((anchor - len - 1, anchor + len + 1))
}

/// The island whose window contains `along`, if any.
pub(crate) fn candidate_island(along: usize) -> Option<u64> {
    let c = along as u128;
    let lower = |j: u64| window(j).map(|w| w.0).unwrap_or(u128::MAX);
    if lower(1) > c {
        return None;
    }
    let mut above = 2u64;
    while lower(above) <= c {
        above = above.checked_mul(2)?;
    }
    let mut below = 1u64;
    while above - below > 1 {
        let mid = below + (above - below) / 2;
        if lower(mid) <= c {
            below = mid;
        } else {
            above = mid;
        }
    }
    let (_, upper) = window(below).ok()?;
    (c <= upper).then_some(below)
}

/// Everything the oracles need to know about `Y_j`, stored relative to the ray.
#[derive(Debug)]
pub(crate) struct Island {
    pub(crate) index: u64,
    pub(crate) word: Word,
    pub(crate) level: u32,
    pub(crate) window: (u128, u128),
    /// The `w_j` edge-path from the anchor, with repetitions.
    pub(crate) path: Vec<RayForm>,
    core: HashSet<RayForm>,
    /// Base point of each line through the core, with the labels `s` of the
    /// lines sharing that base.
    lines: HashMap<RayForm, Vec<u32>>,
    max_tail: usize,
    /// Parent of the core vertex nearest the identity. It lies on the line
    /// through that vertex labelled by its last letter, on the side facing
    /// the identity.
    pub(crate) root_parent: RayForm,
    pub(crate) root_label: u32,
}

impl Island {
    pub(crate) fn build(j: u64) -> Result<Island> {
        let word = enumerate(j)?;
        let level = word.max_index().max(2);
        let anchor_len = anchor_len(j)? as usize;
        let window = window(j)?;

        let mut current = RayForm::on_ray(anchor_len);
        let mut path = Vec::with_capacity(word.len() + 1);
        path.push(current.clone());
        for &letter in word.letters() {
            current.push(letter);
            path.push(current.clone());
        }
        let core: HashSet<RayForm> = path.iter().cloned().collect();
        let mut lines: HashMap<RayForm, Vec<u32>> = HashMap::new();
        for u in &core {
            for s in 1..=level {
                let labels = lines.entry(u.line_base(s)).or_default();
                if !labels.contains(&s) {
                    labels.push(s);
                }
            }
        }
        let max_tail = core.iter().map(|u| u.tail.len()).max().unwrap_or(0);
        let root = core
            .iter()
            .min_by_key(|u| u.len())
            .expect("the path contains its anchor");
        debug_assert!(root.tail.is_empty() && root.along > 0);
        let root_label = root.last().expect("anchor is non-empty").index();

        Ok(Island {
            index: j,
            word,
            level,
            window,
            root_parent: RayForm::on_ray(root.along - 1),
            root_label,
            path,
            core,
            lines,
            max_tail,
        })
    }

    pub(crate) fn word_len(&self) -> usize {
        self.word.len()
    }

    pub(crate) fn in_core(&self, v: &RayForm) -> bool {
        v.tail.len() <= self.max_tail && self.core.contains(v)
    }

    pub(crate) fn membership(&self, v: &RayForm) -> Option<Membership> {
        let along = v.along as u128;
        if along < self.window.0 || along > self.window.1 {
            return None;
        }
        if self.in_core(v) {
            return Some(Membership::Core);
        }
        (1..=self.level)
            .find(|&s| {
                v.line_base_tail_len(s) <= self.max_tail
                    && self
                        .lines
                        .get(&v.line_base(s))
                        .is_some_and(|labels| labels.contains(&s))
            })
            .map(Membership::Line)
    }

    /// Rough heap footprint, charged against the cache budget.
    pub(crate) fn footprint(&self) -> usize {
        let per_form = std::mem::size_of::<RayForm>() + 4 * (self.max_tail + 1);
        (self.path.len() + self.core.len() + self.lines.len()) * per_form + 256
    }

    pub(crate) fn data(&self) -> Result<IslandData> {
        let z_path: Vec<ReducedWord> = self
            .path
            .iter()
            .map(|f| ReducedWord::from_reduced_unchecked(f.to_letters()))
            .collect();
        Ok(IslandData {
            index: self.index,
            word: self.word.clone(),
            anchor: anchor(self.index)?,
            level: self.level,
            z_set: z_path.iter().cloned().collect(),
            z_path,
        })
    }
}

/// Public view of one island: `w_j`, its anchor, its level `n_j` and the
/// vertices visited by the `w_j` edge-path from the anchor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IslandData {
    pub index: u64,
    pub word: Word,
    pub anchor: ReducedWord,
    pub level: u32,
    pub z_path: Vec<ReducedWord>,
    pub z_set: BTreeSet<ReducedWord>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_abut_in_order() {
        for j in 1..500u64 {
            let (lo, hi) = window(j).unwrap();
            let (next_lo, _) = window(j + 1).unwrap();
            assert!(lo <= hi);
            assert_eq!(next_lo, hi + 1, "j = {j}");
        }
    }

    #[test]
    fn candidate_lookup() {
        assert_eq!(candidate_island(0), None);
        assert_eq!(candidate_island(1), None);
        for j in 1..200u64 {
            let (lo, hi) = window(j).unwrap();
            assert_eq!(candidate_island(lo as usize), Some(j));
            assert_eq!(candidate_island(hi as usize), Some(j));
        }
    }

    #[test]
    fn first_island() {
        let island = Island::build(1).unwrap();
        assert_eq!(island.level, 2);
        assert_eq!(island.path, vec![RayForm::on_ray(4), RayForm::on_ray(5)]);
        assert_eq!(island.root_parent, RayForm::on_ray(3));
        assert_eq!(island.root_label, 2);
    }
}
