mod common;

use common::{core_of, ranked_word, word_pair};
use freetest::words::{parse_word, CyclicWord, Word};
use proptest::prelude::*;

proptest! {
    #[test]
    fn reduce_is_idempotent(w in ranked_word(4, 24)) {
        let again = Word::reduce(w.letters().iter().copied(), w.rank()).unwrap();
        prop_assert_eq!(&again, &w);
        for pair in w.letters().windows(2) {
            prop_assert_ne!(pair[0].inverse(), pair[1]);
        }
    }

    #[test]
    fn concat_length_and_parity((u, v) in word_pair(4, 20)) {
        let uv = u.concat(&v).unwrap();
        prop_assert!(uv.len() <= u.len() + v.len());
        prop_assert_eq!(uv.len() % 2, (u.len() + v.len()) % 2);
    }

    #[test]
    fn abelianization_is_a_homomorphism((u, v) in word_pair(4, 20)) {
        let uv = u.concat(&v).unwrap();
        prop_assert_eq!(uv.abelianize(), u.abelianize().add(&v.abelianize()));
        prop_assert_eq!(u.inverse().abelianize(), u.abelianize().neg());
    }

    #[test]
    fn cyclic_reduce_round_trip(w in ranked_word(4, 20)) {
        let (t, core) = w.cyclic_reduce();
        prop_assert!(core.as_word().is_cyclically_reduced());
        prop_assert_eq!(core.as_word().conjugate(&t).unwrap(), w);
    }

    #[test]
    fn core_is_conjugation_invariant((w, t) in word_pair(4, 20)) {
        let conj = w.conjugate(&t).unwrap();
        prop_assert_eq!(conj.cyclic_reduce().1, w.cyclic_reduce().1);
    }

    #[test]
    fn canonical_rotation_is_least(w in ranked_word(3, 14)) {
        let c = w.cyclic_reduce().1;
        let codes = |x: &Word| x.letters().iter().map(|l| l.code()).collect::<Vec<_>>();
        let least = (0..c.len().max(1)).map(|k| codes(c.rotate(k).as_word())).min().unwrap_or_default();
        prop_assert_eq!(codes(&c.canonical()), least);
    }

    #[test]
    fn text_round_trip(w in ranked_word(4, 16)) {
        let compact = w.to_string();
        prop_assert_eq!(parse_word(&compact, Some(w.rank())).unwrap(), w.clone());
        prop_assert_eq!(parse_word(&w.to_verbose(), Some(w.rank())).unwrap(), w);
    }

    #[test]
    fn square_class_matches_abelian_parity(w in ranked_word(4, 16)) {
        let even = w.abelianize().0.iter().all(|c| c % 2 == 0);
        prop_assert_eq!(w.in_square_times_commutator(), even);
        let sq = w.concat(&w).unwrap();
        prop_assert!(sq.in_square_times_commutator());
    }

    #[test]
    fn cyclic_subword_agrees_with_rotations((a, p) in word_pair(2, 10)) {
        let core = core_of(&a);
        let Some(c) = CyclicWord::new(core.clone()) else { return Ok(()) };
        let expected = p.is_empty()
            || p.len() <= c.len()
            && (0..c.len()).any(|k| c.rotate(k).letters().starts_with(p.letters()));
        prop_assert_eq!(c.contains_cyclic_subword(&p), expected);
    }
}

#[test]
fn verbose_and_compact_forms_agree() {
    assert_eq!(parse_word("x1 x2^-1", None).unwrap(), parse_word("aB", None).unwrap());
    assert_eq!(parse_word("aA", None).unwrap().to_string(), "1");
}
