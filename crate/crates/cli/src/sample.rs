//! Random and exhaustive sources of cyclically reduced words.
//!
//! Random words are built letter by letter: the first letter is uniform over
//! all `2r` letters, each later letter is uniform over the `2r - 1` letters
//! that do not cancel its predecessor, and the last letter also avoids the
//! inverse of the first. This is not exactly uniform over cyclically reduced
//! words of the given length, but it is fixed so that seeded statistics are
//! reproducible.

use freetest::words::{Letter, Word};
use rand::Rng;

/// Exhaustive enumeration refuses to go past this many words.
pub const EXHAUSTIVE_LIMIT: u64 = 5_000_000;

pub fn random_cyclically_reduced<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    assert!(rank >= 1, "rank must be positive");
    let letters: Vec<Letter> = Letter::all(rank).collect();
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    for i in 0..len {
        let last = i + 1 == len && len > 1;
        let allowed: Vec<Letter> = letters
            .iter()
            .copied()
            .filter(|&l| out.last().is_none_or(|&p| l != p.inverse()))
            .filter(|&l| !last || l != out[0].inverse())
            .collect();
        out.push(allowed[rng.random_range(0..allowed.len())]);
    }
    Word::reduce(out, rank).expect("letters in rank")
}

/// Number of reduced words of length `len` with no cancellation between
/// consecutive letters, an upper bound on the cyclically reduced ones.
pub fn reduced_word_count(rank: usize, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    let base = 2 * rank as u64;
    let step = base.saturating_sub(1);
    (1..len).fold(base, |acc, _| acc.saturating_mul(step))
}

/// Every cyclically reduced word of length exactly `len`, in lexicographic
/// letter order. `None` if there are more than [`EXHAUSTIVE_LIMIT`] reduced
/// words of that length.
pub fn all_cyclically_reduced(rank: usize, len: usize) -> Option<Vec<Word>> {
    if reduced_word_count(rank, len) > EXHAUSTIVE_LIMIT {
        return None;
    }
    let letters: Vec<Letter> = Letter::all(rank).collect();
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(len);
    fn go(letters: &[Letter], rank: usize, len: usize, buf: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if buf.len() == len {
            if len < 2 || buf[0] != buf[len - 1].inverse() {
                out.push(Word::reduce(buf.iter().copied(), rank).expect("letters in rank"));
            }
            return;
        }
        for &l in letters {
            if buf.last().is_some_and(|&p| p == l.inverse()) {
                continue;
            }
            buf.push(l);
            go(letters, rank, len, buf, out);
            buf.pop();
        }
    }
    go(&letters, rank, len, &mut buf, &mut out);
    Some(out)
}

/// All cyclically reduced words with length in `1..=max_len`.
pub fn all_up_to(rank: usize, max_len: usize) -> Option<Vec<Word>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        out.extend(all_cyclically_reduced(rank, len)?);
    }
    Some(out)
}
