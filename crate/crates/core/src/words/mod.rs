//! Freely reduced words over a basis `x1, ..., xr` and their inverses.
//!
//! Every [`Word`] carries its ambient rank. Binary operations reject
//! operands of different ranks instead of promoting them.

mod cyclic;
mod parse;

pub use cyclic::CyclicWord;
pub use parse::{parse_word, ParseError};

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported rank. Letters are packed into a byte.
pub const MAX_RANK: usize = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("rank must be between 1 and {MAX_RANK}, got {0}")]
    BadRank(usize),
    #[error("letter x{index} is outside rank {rank}")]
    LetterOutOfRank { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
}

/// A letter of `S ∪ S⁻¹`.
///
/// Letters are ordered `x1 < x1⁻¹ < x2 < x2⁻¹ < ...`, which is the order
/// used for canonical rotations and for sorted graph output.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// `generator` is 1-based.
    ///
    /// # Panics
    ///
    /// Panics if `generator` is zero or exceeds [`MAX_RANK`].
    pub fn new(generator: usize, inverted: bool) -> Letter {
        assert!(
            (1..=MAX_RANK).contains(&generator),
            "generator index {generator} out of range"
        );
        Letter(((generator - 1) * 2) as u8 | inverted as u8)
    }

    pub fn gen(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn inv(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    /// Dense index in `0..2r`, following the letter order.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Letter {
        assert!(code < 2 * MAX_RANK);
        Letter(code as u8)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize + 1
    }

    pub fn is_inverted(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// All `2r` letters in letter order.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> {
        (0..2 * rank).map(Letter::from_code)
    }

    /// Vertex name used in DOT and JSON output: `x3` or `x3'`.
    pub fn vertex_name(self) -> String {
        if self.is_inverted() {
            format!("x{}'", self.generator())
        } else {
            format!("x{}", self.generator())
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverted() {
            write!(f, "x{}^-1", self.generator())
        } else {
            write!(f, "x{}", self.generator())
        }
    }
}

/// Free reduction of a letter sequence with a stack.
pub(crate) fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Length of the cyclically reduced core inside a freely reduced slice.
pub(crate) fn peel_len(letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut i = 0;
    while 2 * i + 1 < n && letters[i] == letters[n - 1 - i].inverse() {
        i += 1;
    }
    i
}

fn check_rank(rank: usize) -> Result<(), WordError> {
    if (1..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(WordError::BadRank(rank))
    }
}

/// A freely reduced word in the free group of rank `rank`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Result<Word, WordError> {
        check_rank(rank)?;
        Ok(Word {
            rank,
            letters: Vec::new(),
        })
    }

    /// Freely reduces `raw` into a word of the given rank.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I, rank: usize) -> Result<Word, WordError> {
        check_rank(rank)?;
        let raw: Vec<Letter> = raw.into_iter().collect();
        if let Some(bad) = raw.iter().find(|l| l.generator() > rank) {
            return Err(WordError::LetterOutOfRank {
                index: bad.generator(),
                rank,
            });
        }
        Ok(Word {
            rank,
            letters: free_reduce(raw),
        })
    }

    /// Builds a word from signed generator indices: `2` is `x2`, `-2` is `x2⁻¹`.
    pub fn from_signed(indices: &[i32], rank: usize) -> Result<Word, WordError> {
        let mut raw = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i.unsigned_abs() as usize > MAX_RANK {
                return Err(WordError::LetterOutOfRank {
                    index: i.unsigned_abs() as usize,
                    rank,
                });
            }
            raw.push(Letter::new(i.unsigned_abs() as usize, i < 0));
        }
        Word::reduce(raw, rank)
    }

    /// Caller guarantees `letters` is reduced and within rank.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>, rank: usize) -> Word {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        debug_assert!(letters.iter().all(|l| l.generator() <= rank));
        Word { rank, letters }
    }

    pub fn generator(index: usize, rank: usize) -> Result<Word, WordError> {
        Word::reduce([Letter::gen(index)], rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    fn same_rank(&self, other: &Word) -> Result<(), WordError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        self.same_rank(other)?;
        let letters = free_reduce(self.letters.iter().chain(&other.letters).copied());
        Ok(Word::from_reduced_unchecked(letters, self.rank))
    }

    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Word::from_reduced_unchecked(letters, self.rank)
    }

    /// `t · self · t⁻¹`, reduced.
    pub fn conjugate(&self, t: &Word) -> Result<Word, WordError> {
        t.concat(self)?.concat(&t.inverse())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = k.unsigned_abs() as usize;
        if n == 0 || base.is_empty() {
            return Word::from_reduced_unchecked(Vec::new(), self.rank);
        }
        // base^n = t c^n t⁻¹ with c cyclically reduced, so only the core repeats.
        let p = peel_len(&base.letters);
        let len = base.letters.len();
        let (t, core) = (&base.letters[..p], &base.letters[p..len - p]);
        let mut letters = Vec::with_capacity(2 * p + n * core.len());
        letters.extend_from_slice(t);
        for _ in 0..n {
            letters.extend_from_slice(core);
        }
        letters.extend_from_slice(&base.letters[len - p..]);
        Word::from_reduced_unchecked(letters, self.rank)
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Word {
        Word::from_reduced_unchecked(self.letters[..n.min(self.len())].to_vec(), self.rank)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => a != b.inverse(),
            _ => true,
        }
    }

    /// Splits `self ≡ t · core · t⁻¹` with `t` as long as possible.
    pub fn cyclic_reduce(&self) -> (Word, CyclicWord) {
        let p = peel_len(&self.letters);
        let n = self.letters.len();
        let t = Word::from_reduced_unchecked(self.letters[..p].to_vec(), self.rank);
        let core = Word::from_reduced_unchecked(self.letters[p..n - p].to_vec(), self.rank);
        (t, CyclicWord::from_core_unchecked(core))
    }

    /// Signed letter counts, i.e. the image in `ℤ^r`.
    pub fn abelianize(&self) -> AbelianVector {
        let mut coords = vec![0i64; self.rank];
        for l in &self.letters {
            coords[l.generator() - 1] += if l.is_inverted() { -1 } else { 1 };
        }
        AbelianVector(coords)
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.abelianize().is_zero()
    }

    /// Membership in the subgroup `{x² y : y ∈ [F, F]}`, which is the
    /// preimage of `(2ℤ)^r` under abelianization.
    pub fn in_square_times_commutator(&self) -> bool {
        self.abelianize().0.iter().all(|c| c % 2 == 0)
    }

    /// Set of generator indices that occur (in either sign).
    pub fn support(&self) -> Vec<bool> {
        let mut seen = vec![false; self.rank];
        for l in &self.letters {
            seen[l.generator() - 1] = true;
        }
        seen
    }

    /// Compact rendering (`aabbA`) when the rank allows it, verbose otherwise.
    pub fn to_compact(&self) -> Option<String> {
        if self.rank > 26 {
            return None;
        }
        if self.is_empty() {
            return Some("1".to_string());
        }
        Some(
            self.letters
                .iter()
                .map(|l| {
                    let c = b'a' + (l.generator() - 1) as u8;
                    if l.is_inverted() {
                        c.to_ascii_uppercase() as char
                    } else {
                        c as char
                    }
                })
                .collect(),
        )
    }

    pub fn to_verbose(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| format!("{l:?}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_compact() {
            Some(s) => f.write_str(&s),
            None => f.write_str(&self.to_verbose()),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(r={}, {})", self.rank, self)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Deserializes with the rank inferred from the text.
impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        parse_word(&s, None).map_err(serde::de::Error::custom)
    }
}

/// Image of a word in `ℤ^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianVector(pub Vec<i64>);

impl AbelianVector {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &AbelianVector) -> AbelianVector {
        assert_eq!(self.rank(), other.rank());
        AbelianVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> AbelianVector {
        AbelianVector(self.0.iter().map(|a| -a).collect())
    }
}
