#![allow(dead_code)]

use freetest::words::Word;
use proptest::prelude::*;

/// Raw (possibly unreduced) word of rank `rank` with at most `max_len` letters.
pub fn raw_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    let r = rank as i32;
    prop::collection::vec((1..=r, any::<bool>()), 0..=max_len).prop_map(move |v| {
        let signed: Vec<i32> = v.into_iter().map(|(g, neg)| if neg { -g } else { g }).collect();
        Word::from_signed(&signed, rank).unwrap()
    })
}

/// A rank in `1..=max_rank` and a word of that rank.
pub fn ranked_word(max_rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    (1..=max_rank).prop_flat_map(move |r| raw_word(r, max_len))
}

/// Two words of the same rank.
pub fn word_pair(max_rank: usize, max_len: usize) -> impl Strategy<Value = (Word, Word)> {
    (1..=max_rank).prop_flat_map(move |r| (raw_word(r, max_len), raw_word(r, max_len)))
}

/// Three words of the same rank.
pub fn word_triple(max_rank: usize, max_len: usize) -> impl Strategy<Value = (Word, Word, Word)> {
    (1..=max_rank).prop_flat_map(move |r| (raw_word(r, max_len), raw_word(r, max_len), raw_word(r, max_len)))
}

pub fn core_of(w: &Word) -> Word {
    w.cyclic_reduce().1.into_word()
}
