//! Words over the countable alphabet `a_1^{±1}, a_2^{±1}, ...`.
//!
//! A [`Word`] is any finite letter sequence, reduced or not. A [`ReducedWord`]
//! carries the guarantee that no letter sits next to its own inverse; the
//! reduced words are exactly the vertices of the Cayley tree of `F_∞`.
//!
//! The text format used throughout is a comma- or whitespace-separated list
//! of non-zero integers: `k` stands for `a_k` and `-k` for `a_k^{-1}`. The
//! empty word is written `e`.

mod enumeration;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use enumeration::{
    anchor, anchor_len, enumerate, index_of, length_sum_before, weight, word_len, words_of_weight,
    words_up_to_weight,
};

/// A generator `a_i` or its inverse, stored as the signed index `±i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: u32, inverse: bool) -> Result<Self> {
        if index == 0 {
            return Err(Error::ZeroIndex);
        }
        let index = i32::try_from(index).map_err(|_| Error::IndexOverflow)?;
        Ok(Letter(if inverse { -index } else { index }))
    }

    /// `a_i`. Panics on `i == 0`.
    pub fn generator(index: u32) -> Self {
        Self::new(index, false).expect("generator index must be positive")
    }

    pub fn from_signed(value: i64) -> Result<Self> {
        if value == 0 {
            return Err(Error::ZeroIndex);
        }
        let index = u32::try_from(value.unsigned_abs()).map_err(|_| Error::IndexOverflow)?;
        Self::new(index, value < 0)
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// `+1` for `a_i`, `-1` for `a_i^{-1}`.
    pub fn sign(self) -> i8 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position in the letter order `a_1 < a_1^{-1} < a_2 < a_2^{-1} < ...`.
    pub fn code(self) -> u64 {
        2 * (self.index() as u64 - 1) + self.is_inverse() as u64
    }

    pub(crate) fn from_code(code: u64) -> Self {
        Letter::new((code / 2 + 1) as u32, code % 2 == 1).expect("letter code in range")
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code().cmp(&other.code())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "a{}^-1", self.index())
        } else {
            write!(f, "a{}", self.index())
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.0)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    if letters.is_empty() {
        return f.write_str("e");
    }
    for (i, letter) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{letter}")?;
    }
    Ok(())
}

/// Cancels adjacent inverse pairs with a stack in a single pass.
fn reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for letter in letters {
        if out.last() == Some(&letter.inverse()) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    out
}

pub(crate) fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[1] != w[0].inverse())
}

/// A finite, possibly unreduced, word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed indices; `0` is rejected.
    pub fn from_signed(values: &[i64]) -> Result<Self> {
        values
            .iter()
            .map(|&v| Letter::from_signed(v))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index occurring in the word, `0` for the empty word.
    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn reduce(&self) -> ReducedWord {
        ReducedWord(reduce_letters(self.0.iter().copied()))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn is_reduced(&self) -> bool {
        is_reduced(&self.0)
    }

    /// Checks the reduced-word invariant without cancelling anything.
    pub fn to_reduced(&self) -> Result<ReducedWord> {
        if self.is_reduced() {
            Ok(ReducedWord(self.0.clone()))
        } else {
            Err(Error::NotReduced(self.to_string()))
        }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() == 1 && tokens[0] == "e" {
            return Ok(Word::empty());
        }
        if tokens.is_empty() {
            return Err(Error::InvalidToken(s.to_string()));
        }
        tokens
            .into_iter()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::InvalidToken(t.to_string()))
                    .and_then(Letter::from_signed)
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A word with no adjacent cancelling pair.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(Vec<Letter>);

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    /// `(self · letter)'`: one step in the Cayley tree.
    pub fn times(&self, letter: Letter) -> ReducedWord {
        let mut letters = self.0.clone();
        if letters.last() == Some(&letter.inverse()) {
            letters.pop();
        } else {
            letters.push(letter);
        }
        ReducedWord(letters)
    }

    /// `(self · w)'`.
    pub fn times_word(&self, w: &Word) -> ReducedWord {
        ReducedWord(reduce_letters(self.0.iter().chain(w.letters()).copied()))
    }

    pub fn prefix(&self, len: usize) -> ReducedWord {
        ReducedWord(self.0[..len].to_vec())
    }

    /// The reduced form of `self^{-1} · other`, computed by cancelling the
    /// common prefix of the two reduced words.
    pub fn quotient(&self, other: &ReducedWord) -> ReducedWord {
        let common = self
            .0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count();
        let mut letters: Vec<Letter> = self.0[common..].iter().rev().map(|l| l.inverse()).collect();
        letters.extend_from_slice(&other.0[common..]);
        ReducedWord(letters)
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters));
        ReducedWord(letters)
    }
}

impl TryFrom<Word> for ReducedWord {
    type Error = Error;

    fn try_from(word: Word) -> Result<Self> {
        if word.is_reduced() {
            Ok(ReducedWord(word.0))
        } else {
            Err(Error::NotReduced(word.to_string()))
        }
    }
}

impl From<ReducedWord> for Word {
    fn from(word: ReducedWord) -> Self {
        Word(word.0)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedWord({self})")
    }
}

impl FromStr for ReducedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Word>()?.try_into()
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn reduce(w: &Word) -> ReducedWord {
    w.reduce()
}

pub fn concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

pub fn invert(w: &Word) -> Word {
    w.invert()
}
