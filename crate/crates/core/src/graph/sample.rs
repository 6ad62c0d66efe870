use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ray::RayForm;
use super::{Oracle, Vertex};
use crate::words::{anchor_len, Letter, ReducedWord};

impl Oracle {
    /// A random walk of at most `steps` tree moves in `Γ*`, never longer than
    /// `max_len` letters. Each move picks a label of `E_v` and a direction
    /// uniformly.
    pub fn random_walk<R: Rng + ?Sized>(
        &self,
        start: &Vertex,
        steps: usize,
        max_len: usize,
        rng: &mut R,
    ) -> Vertex {
        let mut form = RayForm::of(start.word().letters());
        for _ in 0..steps {
            let labels: Vec<u32> = self.e_set_form(&form).iter().collect();
            let label = labels[rng.gen_range(0..labels.len())];
            let letter = Letter::generator(label);
            let letter = if rng.gen_bool(0.5) { letter } else { letter.inverse() };
            let mut next = form.clone();
            next.push(letter);
            if next.len() <= max_len {
                form = next;
            }
        }
        Vertex::certified(ReducedWord::from_reduced_unchecked(form.to_letters()))
    }

    /// `count` distinct vertices of length at most `max_len`: half from walks
    /// started at `𝟙`, half from walks started at the anchors that fit.
    pub fn sample_vertices(&self, count: usize, max_len: usize, seed: u64) -> Vec<Vertex> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let anchors: Vec<Vertex> = (1u64..)
            .map_while(|j| {
                let len = anchor_len(j).ok()? as usize;
                (len <= max_len).then(|| super::ray_vertex(len))
            })
            .collect();
        let mut seen = BTreeSet::new();
        let mut attempts = 0usize;
        while seen.len() < count && attempts < 50 * count + 1000 {
            attempts += 1;
            let start = if anchors.is_empty() || rng.gen_bool(0.5) {
                Vertex::base()
            } else {
                anchors[rng.gen_range(0..anchors.len())].clone()
            };
            let steps = rng.gen_range(0..=max_len.max(1));
            seen.insert(self.random_walk(&start, steps, max_len, &mut rng));
        }
        seen.into_iter().collect()
    }
}
