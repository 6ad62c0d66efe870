//! Lifting finite edge-words through `q` and membership in `K`.
//!
//! Along an edge-word the lift is forced one letter at a time: at vertex `v`
//! a letter with index in `E_v` follows the tree edge, any other letter runs
//! once around the loop at `v`.

use std::fmt;

use serde::Serialize;

use crate::graph::ray::RayForm;
use crate::graph::{Oracle, Vertex};
use crate::words::{Letter, ReducedWord, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Tree,
    Loop,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Tree => "tree",
            StepKind::Loop => "loop",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    pub letter: Letter,
    pub kind: StepKind,
    /// Vertex reached after the step.
    pub at: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftTrace {
    pub start: Vertex,
    pub steps: Vec<LiftStep>,
    pub endpoint: Vertex,
}

impl LiftTrace {
    /// The edge-word read off the lifted path: `q` applied to the lift.
    pub fn projection(&self) -> Word {
        Word::new(self.steps.iter().map(|s| s.letter).collect())
    }

    pub fn tree_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == StepKind::Tree).count()
    }
}

fn to_vertex(form: &RayForm) -> Vertex {
    Vertex::certified(ReducedWord::from_reduced_unchecked(form.to_letters()))
}

impl Oracle {
    fn step(&self, form: &mut RayForm, letter: Letter) -> StepKind {
        if self.e_set_form(form).contains(letter.index()) {
            form.push(letter);
            StepKind::Tree
        } else {
            StepKind::Loop
        }
    }

    /// The lift of `w` starting at `start`, one record per letter.
    pub fn lift_word(&self, w: &Word, start: &Vertex) -> LiftTrace {
        let mut form = RayForm::of(start.word().letters());
        let mut steps = Vec::with_capacity(w.len());
        let mut at = start.clone();
        for &letter in w.letters() {
            let kind = self.step(&mut form, letter);
            if kind == StepKind::Tree {
                at = to_vertex(&form);
            }
            steps.push(LiftStep {
                letter,
                kind,
                at: at.clone(),
            });
        }
        LiftTrace {
            start: start.clone(),
            steps,
            endpoint: at,
        }
    }

    /// Where the lift of `w` from `start` ends.
    pub fn endpoint(&self, w: &Word, start: &Vertex) -> Vertex {
        let mut form = RayForm::of(start.word().letters());
        for &letter in w.letters() {
            self.step(&mut form, letter);
        }
        to_vertex(&form)
    }

    /// Whether the loop `w` at the origin lies in `K`, i.e. lifts to a loop at `𝟙`.
    pub fn in_k(&self, w: &Word) -> bool {
        self.endpoint(w, &Vertex::base()).is_base()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(values: &[i64]) -> Word {
        Word::from_signed(values).unwrap()
    }

    #[test]
    fn lift_examples() {
        let oracle = Oracle::new();
        let base = Vertex::base();

        let empty = oracle.lift_word(&Word::empty(), &base);
        assert!(empty.steps.is_empty());
        assert!(empty.endpoint.is_base());

        let loop_trace = oracle.lift_word(&w(&[3]), &base);
        assert_eq!(loop_trace.steps.len(), 1);
        assert_eq!(loop_trace.steps[0].kind, StepKind::Loop);
        assert!(loop_trace.endpoint.is_base());

        let tree = oracle.lift_word(&w(&[1, 2]), &base);
        assert_eq!(tree.tree_steps(), 2);
        assert_eq!(tree.endpoint.word(), &w(&[1, 2]).reduce());
        assert_eq!(tree.projection(), w(&[1, 2]));
    }

    #[test]
    fn endpoints_and_k() {
        let oracle = Oracle::new();
        let base = Vertex::base();
        assert!(oracle.endpoint(&w(&[1, -1]), &base).is_base());
        assert_eq!(oracle.endpoint(&w(&[1]), &base).word(), &w(&[1]).reduce());
        assert!(oracle.in_k(&w(&[3])));
        assert!(!oracle.in_k(&w(&[1])));
        assert!(oracle.in_k(&w(&[1, 2, -2, -1])));
        assert!(oracle.in_k(&Word::empty()));
    }

    #[test]
    fn trace_and_endpoint_agree() {
        let oracle = Oracle::new();
        let word = w(&[1, 2, 3, 1, -2, 4, 2, 2, -1]);
        for start in oracle.sample_vertices(50, 20, 3) {
            let trace = oracle.lift_word(&word, &start);
            assert_eq!(trace.endpoint, oracle.endpoint(&word, &start));
            assert_eq!(trace.projection(), word);
            let mut prev = start.clone();
            for step in &trace.steps {
                match step.kind {
                    StepKind::Tree => assert_eq!(step.at.word(), &prev.word().times(step.letter)),
                    StepKind::Loop => assert_eq!(step.at, prev),
                }
                prev = step.at.clone();
            }
        }
    }
}
