//! The canonical enumeration `w_1, w_2, ...` of all non-empty words and the
//! anchor words built from it.
//!
//! Words are ordered by weight `|w| + max index`, then by length, then
//! lexicographically under `a_1 < a_1^{-1} < a_2 < a_2^{-1} < ...`. For a fixed
//! weight `W` and length `L` the words in question are exactly the length-`L`
//! words over the first `2(W - L)` letters that use the top generator at least
//! once, so every (weight, length) block has a closed-form size and can be
//! ranked and unranked letter by letter.

use std::sync::OnceLock;

use super::{Letter, ReducedWord, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Block {
    weight: u32,
    len: u32,
    max_index: u32,
    /// Enumeration index of the first word in the block.
    first: u128,
    count: u128,
    /// Total length of all words enumerated before this block.
    len_before: u128,
}

fn pow(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

/// Number of length-`len` words over the first `2m` letters containing `a_m^{±1}`.
fn block_count(m: u32, len: u32) -> u128 {
    let all = pow(2 * m as u128, len);
    let without = pow(2 * (m as u128 - 1), len);
    all.saturating_sub(without)
}

fn blocks() -> &'static [Block] {
    static BLOCKS: OnceLock<Vec<Block>> = OnceLock::new();
    BLOCKS.get_or_init(|| {
        let mut out = Vec::new();
        let mut first: u128 = 1;
        let mut len_before: u128 = 0;
        'weights: for weight in 2u32.. {
            for len in 1..weight {
                let max_index = weight - len;
                let count = block_count(max_index, len);
                out.push(Block {
                    weight,
                    len,
                    max_index,
                    first,
                    count,
                    len_before,
                });
                first = first.saturating_add(count);
                len_before = len_before.saturating_add(count.saturating_mul(len as u128));
                if first > u64::MAX as u128 {
                    break 'weights;
                }
            }
        }
        out
    })
}

fn block_of(j: u64) -> Result<&'static Block> {
    if j == 0 {
        return Err(Error::ZeroIndex);
    }
    let table = blocks();
    let pos = table.partition_point(|b| b.first <= j as u128);
    // pos >= 1 because the first block starts at index 1.
    Ok(&table[pos - 1])
}

/// Completions of a partial word: `remaining` more letters over `2m` letters,
/// requiring `a_m^{±1}` somewhere unless it has already occurred.
fn completions(m: u32, remaining: u32, has_top: bool) -> u128 {
    if has_top {
        pow(2 * m as u128, remaining)
    } else {
        block_count(m, remaining)
    }
}

pub fn weight(w: &Word) -> u64 {
    w.len() as u64 + w.max_index() as u64
}

/// `w_j`.
pub fn enumerate(j: u64) -> Result<Word> {
    let block = block_of(j)?;
    let m = block.max_index;
    let top = 2 * (m as u64 - 1);
    let mut rank = j as u128 - block.first;
    let mut letters = Vec::with_capacity(block.len as usize);
    let mut has_top = false;
    for pos in 0..block.len {
        let remaining = block.len - pos - 1;
        let mut chosen = None;
        for code in 0..2 * m as u64 {
            let has = has_top || code >= top;
            let c = completions(m, remaining, has);
            if rank < c {
                chosen = Some((code, has));
                break;
            }
            rank -= c;
        }
        let (code, has) = chosen.expect("rank lies inside its block");
        letters.push(Letter::from_code(code));
        has_top = has;
    }
    Ok(Word::new(letters))
}

/// The `j` with `w_j = w`, letter for letter.
pub fn index_of(w: &Word) -> Result<u64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let m = w.max_index();
    let len = u32::try_from(w.len()).map_err(|_| Error::IndexOverflow)?;
    let target_weight = len.checked_add(m).ok_or(Error::IndexOverflow)?;
    let block = blocks()
        .iter()
        .find(|b| b.weight == target_weight && b.len == len)
        .ok_or(Error::IndexOverflow)?;
    let top = 2 * (m as u64 - 1);
    let mut rank: u128 = 0;
    let mut has_top = false;
    for (pos, letter) in w.letters().iter().enumerate() {
        let remaining = len - pos as u32 - 1;
        for code in 0..letter.code() {
            rank = rank.saturating_add(completions(m, remaining, has_top || code >= top));
        }
        has_top |= letter.code() >= top;
    }
    let j = block.first.saturating_add(rank);
    u64::try_from(j).map_err(|_| Error::IndexOverflow)
}

/// `|w_j|` without building the word.
pub fn word_len(j: u64) -> Result<u64> {
    Ok(block_of(j)?.len as u64)
}

/// `|w_1| + ... + |w_{j-1}|`.
pub fn length_sum_before(j: u64) -> Result<u128> {
    let block = block_of(j)?;
    Ok(block.len_before + (j as u128 - block.first) * block.len as u128)
}

/// `|ŵ_j| = 2(|w_1| + ... + |w_{j-1}|) + 3j + |w_j|`.
pub fn anchor_len(j: u64) -> Result<u128> {
    let block = block_of(j)?;
    Ok(2 * length_sum_before(j)? + 3 * j as u128 + block.len as u128)
}

/// `ŵ_j`: the alternating word `a_1 a_2 a_1 a_2 ...` of length [`anchor_len`].
pub fn anchor(j: u64) -> Result<ReducedWord> {
    let len = usize::try_from(anchor_len(j)?).map_err(|_| Error::IndexOverflow)?;
    let letters = (0..len)
        .map(|k| Letter::generator(if k % 2 == 0 { 1 } else { 2 }))
        .collect();
    Ok(ReducedWord::from_reduced_unchecked(letters))
}

/// Number of non-empty words of exactly this weight.
pub fn words_of_weight(weight: u32) -> u128 {
    blocks()
        .iter()
        .filter(|b| b.weight == weight)
        .map(|b| b.count)
        .sum()
}

/// Number of non-empty words of weight at most `max_weight`; these are
/// precisely `w_1, ..., w_N` for the returned `N`.
pub fn words_up_to_weight(max_weight: u32) -> u128 {
    (2..=max_weight).map(words_of_weight).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(values: &[i64]) -> Word {
        Word::from_signed(values).unwrap()
    }

    /// Independent oracle: generate every word of weight <= `max_weight` by
    /// brute force and sort by (weight, length, lexicographic letter order).
    fn brute_force(max_weight: u32) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 1..max_weight {
            let max_index = max_weight - len;
            let alphabet: Vec<Letter> = (1..=max_index)
                .flat_map(|i| [Letter::new(i, false).unwrap(), Letter::new(i, true).unwrap()])
                .collect();
            let mut current: Vec<Vec<Letter>> = vec![vec![]];
            for _ in 0..len {
                current = current
                    .into_iter()
                    .flat_map(|p| {
                        alphabet.iter().map(move |&l| {
                            let mut q = p.clone();
                            q.push(l);
                            q
                        })
                    })
                    .collect();
            }
            out.extend(
                current
                    .into_iter()
                    .map(Word::new)
                    .filter(|w| weight(w) <= max_weight as u64),
            );
        }
        out.sort_by(|a, b| {
            (weight(a), a.len())
                .cmp(&(weight(b), b.len()))
                .then_with(|| a.letters().cmp(b.letters()))
        });
        out
    }

    #[test]
    fn first_words() {
        assert_eq!(enumerate(1).unwrap(), w(&[1]));
        assert_eq!(enumerate(2).unwrap(), w(&[-1]));
        assert_eq!(enumerate(3).unwrap(), w(&[2]));
        assert_eq!(enumerate(9).unwrap(), w(&[3]));
        assert_eq!(index_of(&w(&[1])).unwrap(), 1);
        assert_eq!(index_of(&w(&[-1])).unwrap(), 2);
        assert_eq!(index_of(&w(&[3])).unwrap(), 9);
        assert_eq!(enumerate(0), Err(Error::ZeroIndex));
        assert_eq!(index_of(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn matches_brute_force_order() {
        let expected = brute_force(6);
        assert_eq!(words_up_to_weight(6), expected.len() as u128);
        for (i, word) in expected.iter().enumerate() {
            let j = i as u64 + 1;
            assert_eq!(&enumerate(j).unwrap(), word, "w_{j}");
            assert_eq!(index_of(word).unwrap(), j);
            assert_eq!(word_len(j).unwrap(), word.len() as u64);
        }
        assert_eq!(words_up_to_weight(3), 8);
        assert_eq!(words_up_to_weight(5), 124);
    }

    #[test]
    fn round_trip_first_ten_thousand() {
        let mut running = 0u128;
        for j in 1..=10_000u64 {
            let word = enumerate(j).unwrap();
            assert_eq!(index_of(&word).unwrap(), j);
            assert_eq!(length_sum_before(j).unwrap(), running);
            running += word.len() as u128;
        }
    }

    #[test]
    fn anchor_examples() {
        let a1 = anchor(1).unwrap();
        assert_eq!(a1.to_word(), w(&[1, 2, 1, 2]));
        assert_eq!(anchor(2).unwrap().len(), 9);
        assert_eq!(anchor_len(9).unwrap(), 2 * 12 + 27 + 1);
    }

    #[test]
    fn lengths_grow_by_at_most_one() {
        for j in 1..20_000u64 {
            assert!(word_len(j + 1).unwrap() <= word_len(j).unwrap() + 1);
        }
    }

    #[test]
    fn huge_indices_stay_in_range() {
        let word = enumerate(u64::MAX).unwrap();
        assert_eq!(index_of(&word).unwrap(), u64::MAX);
        let long = Word::new(vec![Letter::generator(40); 40]);
        assert_eq!(index_of(&long), Err(Error::IndexOverflow));
    }
}
