//! Conjugators that push essential words out of `K`.
//!
//! For an essential word `w = w_j`, conjugating by the anchor `β = ŵ_j`
//! walks the lift out to island `j`, replays the `Z_j` edge-path there, and
//! walks back along `β^{-1}`. Since the path ends somewhere other than the
//! anchor, the conjugate cannot lift to a loop, so no nontrivial normal
//! subgroup fits inside `K`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Oracle, Vertex};
use crate::lifting::StepKind;
use crate::words::{anchor, enumerate, index_of, words_up_to_weight, ReducedWord, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationCertificate {
    pub word: Word,
    /// The `j` with `w_j = word`.
    pub index: u64,
    /// `ŵ_j`.
    pub beta: ReducedWord,
    /// Position of the lift once `β` has been read.
    pub midpoint: Vertex,
    pub conjugate_endpoint: Vertex,
    /// `conjugate_endpoint != 𝟙`: the conjugate is not in `K`.
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MidpointStep {
    pub letter: crate::words::Letter,
    pub kind: StepKind,
    pub at: Vertex,
    /// The `Z_j` vertex the step should reach.
    pub expected: ReducedWord,
    pub matches: bool,
    pub in_island: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MidpointReport {
    pub index: u64,
    pub level: u32,
    pub midpoint_is_anchor: bool,
    pub steps: Vec<MidpointStep>,
    pub agrees: bool,
    pub stays_in_island: bool,
}

impl MidpointReport {
    pub fn passed(&self) -> bool {
        self.midpoint_is_anchor && self.agrees && self.stays_in_island
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub index: u64,
    pub word: Word,
    /// Whether `w` itself lies in `K`.
    pub in_k: bool,
    pub verdict: bool,
    pub midpoint_ok: bool,
    pub beta_len: usize,
    pub conjugate_endpoint_len: usize,
}

impl ScanEntry {
    pub fn passed(&self) -> bool {
        self.verdict && self.midpoint_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub max_weight: u32,
    pub words_total: u64,
    pub trivial_skipped: u64,
    pub essential: u64,
    pub in_k: u64,
    pub not_in_k: u64,
    /// Enumeration indices whose certificate failed.
    pub failures: Vec<u64>,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Oracle {
    /// Builds the certificate `β w β^{-1} ∉ K` for an essential word `w`.
    /// The index lookup uses `w` exactly as given, unreduced letters included.
    pub fn witness_conjugator(&self, w: &Word) -> Result<ConjugationCertificate> {
        if w.reduce().is_empty() {
            return Err(Error::TrivialWord(w.to_string()));
        }
        let index = index_of(w)?;
        let beta = anchor(index)?;
        let beta_word = beta.to_word();
        let midpoint = self.endpoint(&beta_word, &Vertex::base());
        let after_w = self.endpoint(w, &midpoint);
        let conjugate_endpoint = self.endpoint(&beta_word.invert(), &after_w);
        let verdict = !conjugate_endpoint.is_base();
        Ok(ConjugationCertificate {
            word: w.clone(),
            index,
            beta,
            midpoint,
            conjugate_endpoint,
            verdict,
        })
    }

    /// Replays the middle segment of a certificate against the `Z_j` path.
    pub fn midpoint_structure_check(&self, cert: &ConjugationCertificate) -> Result<MidpointReport> {
        let data = self.island_data(cert.index)?;
        let trace = self.lift_word(&cert.word, &cert.midpoint);
        let midpoint_is_anchor = cert.midpoint.word() == &data.anchor
            && self.island_of(cert.midpoint.word()) == Some(cert.index);
        let steps: Vec<MidpointStep> = trace
            .steps
            .iter()
            .zip(&data.z_path[1..])
            .map(|(step, expected)| {
                // Labels up to n_j are tree edges all along Z_j; higher labels loop.
                let matches = if step.letter.index() <= data.level {
                    step.kind == StepKind::Tree && step.at.word() == expected
                } else {
                    step.kind == StepKind::Loop
                };
                MidpointStep {
                    letter: step.letter,
                    kind: step.kind,
                    at: step.at.clone(),
                    expected: expected.clone(),
                    matches,
                    in_island: self.island_of(step.at.word()) == Some(cert.index),
                }
            })
            .collect();
        let agrees = steps.len() == cert.word.len() && steps.iter().all(|s| s.matches);
        let stays_in_island = steps.iter().all(|s| s.in_island);
        Ok(MidpointReport {
            index: cert.index,
            level: data.level,
            midpoint_is_anchor,
            steps,
            agrees,
            stays_in_island,
        })
    }

    /// Certifies every essential word of weight at most `max_weight`.
    pub fn core_free_scan(&self, max_weight: u32) -> Result<ScanReport> {
        if max_weight < 2 {
            return Err(Error::TooSmall("max weight", 2));
        }
        let total = u64::try_from(words_up_to_weight(max_weight)).map_err(|_| Error::IndexOverflow)?;
        let outcomes: Vec<Option<ScanEntry>> = (1..=total)
            .into_par_iter()
            .map(|j| -> Result<Option<ScanEntry>> {
                let word = enumerate(j)?;
                if word.reduce().is_empty() {
                    return Ok(None);
                }
                let cert = self.witness_conjugator(&word)?;
                let midpoint_ok = self.midpoint_structure_check(&cert)?.passed();
                Ok(Some(ScanEntry {
                    index: j,
                    in_k: self.in_k(&word),
                    verdict: cert.verdict,
                    midpoint_ok,
                    beta_len: cert.beta.len(),
                    conjugate_endpoint_len: cert.conjugate_endpoint.word().len(),
                    word,
                }))
            })
            .collect::<Result<_>>()?;

        let entries: Vec<ScanEntry> = outcomes.into_iter().flatten().collect();
        let essential = entries.len() as u64;
        let in_k = entries.iter().filter(|e| e.in_k).count() as u64;
        Ok(ScanReport {
            max_weight,
            words_total: total,
            trivial_skipped: total - essential,
            essential,
            in_k,
            not_in_k: essential - in_k,
            failures: entries.iter().filter(|e| !e.passed()).map(|e| e.index).collect(),
            entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;

    fn w(values: &[i64]) -> Word {
        Word::from_signed(values).unwrap()
    }

    #[test]
    fn witnesses() {
        let oracle = Oracle::new();
        let cert = oracle.witness_conjugator(&w(&[3])).unwrap();
        assert_eq!(cert.index, 9);
        assert_eq!(cert.beta, anchor(9).unwrap());
        assert_eq!(cert.midpoint.word(), &cert.beta);
        assert!(cert.verdict);
        assert!(oracle.in_k(&w(&[3])));
        let conjugate = cert.beta.to_word().concat(&w(&[3])).concat(&cert.beta.to_word().invert());
        assert!(!oracle.in_k(&conjugate));

        let cert = oracle.witness_conjugator(&w(&[1])).unwrap();
        assert_eq!(cert.index, 1);
        assert!(cert.verdict);

        assert_eq!(
            oracle.witness_conjugator(&w(&[1, -1])),
            Err(Error::TrivialWord("1,-1".into()))
        );
    }

    #[test]
    fn unreduced_words_use_their_own_index() {
        let oracle = Oracle::new();
        let word = w(&[2, 1, -1]);
        let cert = oracle.witness_conjugator(&word).unwrap();
        assert_eq!(cert.index, index_of(&word).unwrap());
        assert_ne!(cert.index, index_of(&w(&[2])).unwrap());
        assert!(cert.verdict);
        assert!(oracle.midpoint_structure_check(&cert).unwrap().passed());
    }

    #[test]
    fn midpoint_structure() {
        let oracle = Oracle::new();
        let cert = oracle.witness_conjugator(&w(&[3])).unwrap();
        let report = oracle.midpoint_structure_check(&cert).unwrap();
        assert!(report.passed());
        assert_eq!(report.steps.len(), 1);
        assert_eq!(report.steps[0].kind, StepKind::Tree);
        assert_eq!(report.steps[0].at.word(), &anchor(9).unwrap().times(Letter::generator(3)));

        let cert = oracle.witness_conjugator(&w(&[1])).unwrap();
        let report = oracle.midpoint_structure_check(&cert).unwrap();
        assert!(report.passed());
        assert_eq!(report.steps[0].expected, oracle.island_data(1).unwrap().z_path[1]);
    }

    #[test]
    fn small_scans() {
        let oracle = Oracle::new();
        let report = oracle.core_free_scan(3).unwrap();
        assert_eq!(report.words_total, 8);
        // a1 a1^-1 and a1^-1 a1 reduce to the identity.
        assert_eq!(report.trivial_skipped, 2);
        assert!(report.passed());
        let report = oracle.core_free_scan(4).unwrap();
        assert!(report.passed());
        assert!(report.in_k > 0 && report.not_in_k > 0);
        assert!(report.entries.windows(2).all(|p| p[0].index < p[1].index));
        assert!(oracle.core_free_scan(1).is_err());
    }
}
