use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::{Letter, Word};

/// A cyclically reduced word, compared up to rotation.
///
/// The stored rotation is kept as given (it matters for axes, where it fixes
/// the base point and direction); equality and hashing go through
/// [`CyclicWord::canonical`].
#[derive(Clone)]
pub struct CyclicWord {
    core: Word,
}

/// Start index of the lexicographically least rotation (Booth).
pub(crate) fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut fail = vec![-1i64; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if sj != at((k as i64 + i + 1) as usize) {
            // i == -1 here
            if sj < at(k) {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

impl CyclicWord {
    pub(crate) fn from_core_unchecked(core: Word) -> CyclicWord {
        debug_assert!(core.is_cyclically_reduced());
        CyclicWord { core }
    }

    /// Accepts a word that is already cyclically reduced.
    pub fn new(core: Word) -> Option<CyclicWord> {
        core.is_cyclically_reduced()
            .then(|| CyclicWord::from_core_unchecked(core))
    }

    /// The cyclic reduction of an arbitrary word.
    pub fn of(w: &Word) -> CyclicWord {
        w.cyclic_reduce().1
    }

    pub fn as_word(&self) -> &Word {
        &self.core
    }

    pub fn into_word(self) -> Word {
        self.core
    }

    pub fn letters(&self) -> &[Letter] {
        self.core.letters()
    }

    pub fn len(&self) -> usize {
        self.core.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.core.rank()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::from_core_unchecked(self.core.inverse())
    }

    /// Rotation starting at letter `k` (mod length).
    pub fn rotate(&self, k: usize) -> CyclicWord {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let s = self.letters();
        let letters = s[k..].iter().chain(&s[..k]).copied().collect();
        CyclicWord::from_core_unchecked(Word::from_reduced_unchecked(letters, self.rank()))
    }

    /// Lexicographically least rotation under `x1 < x1⁻¹ < x2 < ...`.
    pub fn canonical(&self) -> Word {
        self.rotate(least_rotation(self.letters())).into_word()
    }

    /// Ordered pairs of cyclically adjacent letters. Empty for length ≤ 1.
    pub fn bigrams(&self) -> BTreeSet<(Letter, Letter)> {
        let s = self.letters();
        let n = s.len();
        if n < 2 {
            return BTreeSet::new();
        }
        (0..n).map(|i| (s[i], s[(i + 1) % n])).collect()
    }

    /// Offset of the first rotation that begins with `pattern`, if any.
    /// Patterns longer than the word never match.
    pub fn find_cyclic_subword(&self, pattern: &Word) -> Option<usize> {
        let s = self.letters();
        let p = pattern.letters();
        let n = s.len();
        if p.len() > n {
            return None;
        }
        if p.is_empty() {
            return Some(0);
        }
        (0..n).find(|&start| p.iter().enumerate().all(|(j, l)| s[(start + j) % n] == *l))
    }

    pub fn contains_cyclic_subword(&self, pattern: &Word) -> bool {
        self.find_cyclic_subword(pattern).is_some()
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.len() == other.len() && self.canonical() == other.canonical()
    }
}

impl Eq for CyclicWord {}

impl Hash for CyclicWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.core.fmt(f)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord(r={}, ({}))", self.rank(), self.core)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn cw(s: &str, r: usize) -> CyclicWord {
        CyclicWord::new(parse_word(s, Some(r)).unwrap()).unwrap()
    }

    fn naive_least(s: &[Letter]) -> Vec<Letter> {
        (0..s.len())
            .map(|k| s[k..].iter().chain(&s[..k]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    #[test]
    fn canonical_matches_naive() {
        for s in ["bab", "aabb", "BaBa", "abcabcab", "cbaCBA", "b", "abab", "bbaab"] {
            let c = cw(s, 3);
            assert_eq!(c.canonical().letters(), &naive_least(c.letters())[..], "{s}");
        }
    }

    #[test]
    fn rotation_equality() {
        assert_eq!(cw("abb", 2), cw("bab", 2));
        assert_ne!(cw("ab", 2), cw("aB", 2));
        assert_ne!(cw("ab", 2), cw("ab", 3));
    }

    #[test]
    fn rejects_non_cyclically_reduced() {
        assert!(CyclicWord::new(parse_word("abA", Some(2)).unwrap()).is_none());
    }

    #[test]
    fn bigram_examples() {
        let a = Letter::gen(1);
        let b = Letter::gen(2);
        assert_eq!(cw("ab", 2).bigrams(), [(a, b), (b, a)].into_iter().collect());
        assert_eq!(cw("aa", 2).bigrams(), [(a, a)].into_iter().collect());
        assert!(cw("1", 2).bigrams().is_empty());
        assert!(cw("a", 2).bigrams().is_empty());
    }

    #[test]
    fn cyclic_subword_examples() {
        let pat = parse_word("aabba", Some(2)).unwrap();
        assert!(cw("aabbab", 2).contains_cyclic_subword(&pat));
        assert!(!cw("baabb", 2).contains_cyclic_subword(&pat));
        // Same letters rotated so the pattern wraps around the end.
        assert!(cw("bbaaa", 2).contains_cyclic_subword(&pat));
        let aa = parse_word("aa", Some(2)).unwrap();
        assert!(!cw("a", 2).contains_cyclic_subword(&aa));
    }

    #[test]
    fn cyclic_subword_agrees_with_rotation_enumeration() {
        let pat = parse_word("aabba", Some(2)).unwrap();
        for s in ["baabb", "aabbab", "abbaab", "aaabb", "bbaaab"] {
            let c = cw(s, 2);
            let brute = (0..c.len()).any(|k| c.rotate(k).letters().windows(pat.len()).any(|win| win == pat.letters()));
            assert_eq!(c.contains_cyclic_subword(&pat), brute, "{s}");
        }
    }
}
