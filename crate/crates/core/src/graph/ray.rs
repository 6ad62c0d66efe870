//! Reduced words written relative to the zig-zag ray `a_1 a_2 a_1 a_2 ...`.
//!
//! Every island sits a long way out along that ray, so its vertices share
//! hundreds of leading letters. Splitting a reduced word into the length of
//! its common prefix with the ray plus the (short) remainder makes island
//! bookkeeping independent of anchor length.

use crate::words::Letter;

/// Letter number `k` (0-based) of the zig-zag ray.
pub(crate) fn ray_letter(k: usize) -> Letter {
    Letter::generator(if k.is_multiple_of(2) { 1 } else { 2 })
}

/// Length of the longest common prefix of `letters` with the ray.
pub(crate) fn ray_prefix_len(letters: &[Letter]) -> usize {
    letters
        .iter()
        .enumerate()
        .take_while(|&(k, &l)| l == ray_letter(k))
        .count()
}

/// A reduced word as `ray[..along] · tail`, where `tail` does not start with
/// the ray letter `ray[along]`. The split is unique, so equality of forms is
/// equality of words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct RayForm {
    pub(crate) along: usize,
    pub(crate) tail: Vec<Letter>,
}

impl RayForm {
    pub(crate) fn of(letters: &[Letter]) -> Self {
        let along = ray_prefix_len(letters);
        RayForm {
            along,
            tail: letters[along..].to_vec(),
        }
    }

    /// The form of `letters[..len]`, given `along = ray_prefix_len(letters)`.
    pub(crate) fn of_prefix(letters: &[Letter], along: usize, len: usize) -> Self {
        let along = along.min(len);
        RayForm {
            along,
            tail: letters[along..len].to_vec(),
        }
    }

    pub(crate) fn on_ray(along: usize) -> Self {
        RayForm {
            along,
            tail: Vec::new(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.along + self.tail.len()
    }

    pub(crate) fn last(&self) -> Option<Letter> {
        match self.tail.last() {
            Some(&l) => Some(l),
            None if self.along > 0 => Some(ray_letter(self.along - 1)),
            None => None,
        }
    }

    /// Right multiplication by one letter, followed by reduction.
    pub(crate) fn push(&mut self, letter: Letter) {
        if let Some(&last) = self.tail.last() {
            if last == letter.inverse() {
                self.tail.pop();
            } else {
                self.tail.push(letter);
            }
        } else if self.along > 0 && ray_letter(self.along - 1) == letter.inverse() {
            self.along -= 1;
        } else if letter == ray_letter(self.along) {
            self.along += 1;
        } else {
            self.tail.push(letter);
        }
    }

    /// Number of trailing letters with generator index `s`. In a reduced word
    /// these all carry the same sign.
    pub(crate) fn trailing_run(&self, s: u32) -> usize {
        let in_tail = self.tail.iter().rev().take_while(|l| l.index() == s).count();
        if in_tail == self.tail.len() && self.along > 0 && ray_letter(self.along - 1).index() == s {
            in_tail + 1
        } else {
            in_tail
        }
    }

    /// The word with its trailing `a_s`-run removed: the point of the line
    /// `{(u a_s^r)' : r ∈ ℤ}` through `u` that is closest to the identity.
    pub(crate) fn line_base(&self, s: u32) -> RayForm {
        let run = self.trailing_run(s);
        if run <= self.tail.len() {
            RayForm {
                along: self.along,
                tail: self.tail[..self.tail.len() - run].to_vec(),
            }
        } else {
            RayForm::on_ray(self.along - 1)
        }
    }

    /// Tail length of [`Self::line_base`], without building it.
    pub(crate) fn line_base_tail_len(&self, s: u32) -> usize {
        self.tail.len().saturating_sub(self.trailing_run(s))
    }

    pub(crate) fn to_letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = (0..self.along).map(ray_letter).collect();
        out.extend_from_slice(&self.tail);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn letters(values: &[i64]) -> Vec<Letter> {
        Word::from_signed(values).unwrap().into_letters()
    }

    #[test]
    fn split_is_canonical() {
        let f = RayForm::of(&letters(&[1, 2, 1, 3]));
        assert_eq!(f.along, 3);
        assert_eq!(f.tail, letters(&[3]));
        assert_eq!(f.to_letters(), letters(&[1, 2, 1, 3]));
        assert_eq!(RayForm::of(&[]), RayForm::on_ray(0));
    }

    #[test]
    fn push_matches_reduction() {
        let word = letters(&[1, 2, 1, 2, -2, -1, 3, -3, 2, 2, -2, 1, 2, 4]);
        let mut form = RayForm::default();
        let mut flat: Vec<Letter> = Vec::new();
        for &l in &word {
            form.push(l);
            if flat.last() == Some(&l.inverse()) {
                flat.pop();
            } else {
                flat.push(l);
            }
            assert_eq!(form, RayForm::of(&flat));
        }
    }

    #[test]
    fn line_base_strips_into_the_ray() {
        // a1 a2 a1 a2 · a2 a2: the a2-run reaches one letter into the ray.
        let f = RayForm::of(&letters(&[1, 2, 1, 2, 2, 2]));
        assert_eq!(f.trailing_run(2), 3);
        assert_eq!(f.line_base(2), RayForm::on_ray(3));
        assert_eq!(f.line_base_tail_len(2), 0);
        let g = RayForm::of(&letters(&[1, 2, 3, -1]));
        assert_eq!(g.line_base(1), RayForm::of(&letters(&[1, 2, 3])));
        assert_eq!(g.line_base(3), g);
    }
}
