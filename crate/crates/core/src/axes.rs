//! Axes of elements acting on the Cayley tree of the free group, and the
//! overlap of two axes.
//!
//! A nontrivial `g ≡ t c t⁻¹` (with `c` cyclically reduced) translates the
//! bi-infinite geodesic through `t, t c, t c², ...` by `|c|`. A vertex `u`
//! lies on that axis iff `u⁻¹ g u` is cyclically reduced. Overlaps are
//! measured in vertices.

use serde::ser::{Serialize, Serializer};
use thiserror::Error;

use crate::whgraph::WhiteheadGraph;
use crate::words::{CyclicWord, Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxisError {
    #[error("the trivial element has no axis")]
    Trivial,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("scan window {cap} too small to certify an empty overlap (need {needed})")]
    WindowExhausted { cap: usize, needed: usize },
    #[error("{0} is not cyclically reduced")]
    NotCyclicallyReduced(Word),
    #[error("no k with 1 <= |k| <= {bound} makes Wh(w) a subgraph of Wh(a^k)")]
    WitnessNotFound { bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    conjugator: Word,
    /// Oriented core: the axis is traversed in the direction of `core`.
    core: CyclicWord,
}

impl Axis {
    pub fn of(g: &Word) -> Result<Axis, AxisError> {
        let (conjugator, core) = g.cyclic_reduce();
        if core.is_empty() {
            return Err(AxisError::Trivial);
        }
        Ok(Axis { conjugator, core })
    }

    pub fn rank(&self) -> usize {
        self.core.rank()
    }

    pub fn conjugator(&self) -> &Word {
        &self.conjugator
    }

    pub fn core(&self) -> &CyclicWord {
        &self.core
    }

    pub fn translation_length(&self) -> usize {
        self.core.len()
    }

    /// The element `t c t⁻¹` whose axis this is.
    pub fn element(&self) -> Word {
        self.core.as_word().conjugate(&self.conjugator).expect("same rank")
    }

    /// Vertex at signed position `i`: `t` followed by the first `|i|` letters
    /// of `c c c ...` (or of `c⁻¹ c⁻¹ ...` when `i < 0`).
    pub fn vertex(&self, i: i64) -> Word {
        let core = if i < 0 { self.core.inverse() } else { self.core.clone() };
        let s = core.letters();
        let n = i.unsigned_abs() as usize;
        let path: Vec<Letter> = (0..n).map(|j| s[j % s.len()]).collect();
        let path = Word::reduce(path, self.rank()).expect("letters in rank");
        self.conjugator.concat(&path).expect("same rank")
    }

    pub fn contains(&self, u: &Word) -> Result<bool, AxisError> {
        on_axis(u, &self.element())
    }

    /// Shortest `p` with `core = p^k`, conjugated back: `t p t⁻¹`.
    pub fn primitive_root(&self) -> Word {
        let s = self.core.letters();
        let n = s.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| s[i] == s[i - p]))
            .unwrap_or(n);
        let root = Word::reduce(s[..period].iter().copied(), self.rank()).expect("in rank");
        root.conjugate(&self.conjugator).expect("same rank")
    }

    /// Whether the two axes are the same line of the tree.
    ///
    /// Line stabilizers in a free action on a tree are infinite cyclic, so
    /// two elements share an axis iff their primitive roots agree up to
    /// inversion.
    pub fn same_line(&self, other: &Axis) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        let (p, q) = (self.primitive_root(), other.primitive_root());
        p == q || p == q.inverse()
    }
}

/// `u` lies on the axis of `g` iff `u⁻¹ g u` is cyclically reduced.
pub fn on_axis(u: &Word, g: &Word) -> Result<bool, AxisError> {
    if g.is_empty() {
        return Err(AxisError::Trivial);
    }
    let conj = g.conjugate(&u.inverse())?;
    Ok(conj.is_cyclically_reduced())
}

/// Vertex count of an overlap, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OverlapCount {
    Finite(usize),
    Infinite,
}

impl OverlapCount {
    pub fn at_least(self, n: usize) -> bool {
        match self {
            OverlapCount::Finite(k) => k >= n,
            OverlapCount::Infinite => true,
        }
    }
}

impl Serialize for OverlapCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            OverlapCount::Finite(n) => s.serialize_u64(*n as u64),
            OverlapCount::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl std::fmt::Display for OverlapCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OverlapCount::Finite(n) => write!(f, "{n}"),
            OverlapCount::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisOverlap {
    pub count: OverlapCount,
    /// Extreme common vertices, present iff the count is finite and positive.
    pub endpoints: Option<(Word, Word)>,
}

impl AxisOverlap {
    /// Length in edges: one less than the vertex count.
    pub fn edge_length(&self) -> Option<OverlapCount> {
        match self.count {
            OverlapCount::Finite(0) => None,
            OverlapCount::Finite(n) => Some(OverlapCount::Finite(n - 1)),
            OverlapCount::Infinite => Some(OverlapCount::Infinite),
        }
    }
}

/// Default scan half-width for [`overlap`].
pub fn default_cap(g: &Word, h: &Word) -> usize {
    4 * (g.len() + h.len()) + 8
}

/// Window that always contains a common vertex when one exists.
fn guaranteed_window(a: &Axis, b: &Axis) -> usize {
    a.conjugator.len() + b.conjugator.len() + a.core.len() + b.core.len()
}

/// Number of common vertices of the axes of `g` and `h`.
///
/// Scans the axis of `h` over positions `[-cap, cap]` for a vertex on the
/// axis of `g`, then walks outward while both axes agree. The common part
/// of two distinct lines in a tree is a segment, so the positions found form
/// one interval.
pub fn overlap(g: &Word, h: &Word, cap: Option<usize>) -> Result<AxisOverlap, AxisError> {
    let ag = Axis::of(g)?;
    let ah = Axis::of(h)?;
    if g.rank() != h.rank() {
        return Err(WordError::RankMismatch {
            left: g.rank(),
            right: h.rank(),
        }
        .into());
    }
    if ag.same_line(&ah) {
        return Ok(AxisOverlap {
            count: OverlapCount::Infinite,
            endpoints: None,
        });
    }
    let cap = cap.unwrap_or_else(|| default_cap(g, h));
    let hits = |i: i64| on_axis(&ah.vertex(i), g).expect("g nontrivial");

    let start = std::iter::once(0i64)
        .chain((1..=cap as i64).flat_map(|i| [i, -i]))
        .find(|&i| hits(i));
    let Some(start) = start else {
        let needed = guaranteed_window(&ag, &ah);
        if cap < needed {
            return Err(AxisError::WindowExhausted { cap, needed });
        }
        return Ok(AxisOverlap {
            count: OverlapCount::Finite(0),
            endpoints: None,
        });
    };
    let mut hi = start;
    while hits(hi + 1) {
        hi += 1;
    }
    let mut lo = start;
    while hits(lo - 1) {
        lo -= 1;
    }
    Ok(AxisOverlap {
        count: OverlapCount::Finite((hi - lo + 1) as usize),
        endpoints: Some((ah.vertex(lo), ah.vertex(hi))),
    })
}

/// Smallest `|k|` (positive first) with `Wh(w) ⊆ Wh(a^k)`, searching
/// `1 <= |k| <= bound`. `w` must be cyclically reduced.
pub fn find_k(w: &Word, a: &Word, bound: usize) -> Result<i64, AxisError> {
    if !w.is_cyclically_reduced() {
        return Err(AxisError::NotCyclicallyReduced(w.clone()));
    }
    if a.is_empty() {
        return Err(AxisError::Trivial);
    }
    let gw = WhiteheadGraph::build(w);
    for k in 1..=bound as i64 {
        for k in [k, -k] {
            if gw.is_subgraph(&WhiteheadGraph::build(&a.pow(k)))? {
                return Ok(k);
            }
        }
    }
    Err(AxisError::WitnessNotFound { bound })
}

/// Default `k` search bound for [`find_k`]: `|w| + 2`.
pub fn default_k_bound(w: &Word) -> usize {
    w.len() + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, Some(2)).unwrap()
    }

    /// Test-only oracle: enumerate every vertex within a ball and test
    /// membership in both axes directly.
    fn brute_overlap(g: &Word, h: &Word, radius: usize) -> Vec<Word> {
        let mut ball = vec![Word::identity(g.rank()).unwrap()];
        let mut frontier = ball.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for u in &frontier {
                for l in Letter::all(g.rank()) {
                    if u.last() == Some(l.inverse()) {
                        continue;
                    }
                    next.push(u.concat(&Word::reduce([l], g.rank()).unwrap()).unwrap());
                }
            }
            ball.extend(next.iter().cloned());
            frontier = next;
        }
        ball.into_iter()
            .filter(|u| on_axis(u, g).unwrap() && on_axis(u, h).unwrap())
            .collect()
    }

    #[test]
    fn axis_examples() {
        let a = Axis::of(&w("aabba")).unwrap();
        assert!(a.conjugator().is_empty());
        assert_eq!(a.core().as_word(), &w("aabba"));

        let a = Axis::of(&w("abA")).unwrap();
        assert_eq!(a.conjugator(), &w("a"));
        assert_eq!(a.core().as_word(), &w("b"));

        let p = Axis::of(&w("b")).unwrap();
        let n = Axis::of(&w("B")).unwrap();
        assert!(p.same_line(&n));
        assert_eq!(p.vertex(2), n.vertex(-2));

        assert_eq!(Axis::of(&w("1")), Err(AxisError::Trivial));
    }

    #[test]
    fn on_axis_examples() {
        let one = w("1");
        assert!(on_axis(&one, &w("ab")).unwrap());
        assert!(!on_axis(&one, &w("abA")).unwrap());
        assert!(on_axis(&w("ab"), &w("aba")).unwrap());
        assert!(on_axis(&w("a"), &w("1")).is_err());
    }

    #[test]
    fn vertex_examples() {
        assert_eq!(Axis::of(&w("ab")).unwrap().vertex(3), w("aba"));
        assert_eq!(Axis::of(&w("abA")).unwrap().vertex(0), w("a"));
        let g = w("aabba");
        assert_eq!(Axis::of(&g).unwrap().vertex(g.len() as i64), g);
        assert_eq!(Axis::of(&w("ab")).unwrap().vertex(-3), w("BAB"));
    }

    #[test]
    fn vertex_translation() {
        for s in ["abA", "aabba", "bAAB", "abbaB"] {
            let g = w(s);
            let ax = Axis::of(&g).unwrap();
            let n = ax.translation_length() as i64;
            for i in -6..6 {
                assert_eq!(ax.vertex(i + n), g.concat(&ax.vertex(i)).unwrap(), "{s} at {i}");
                assert_eq!(ax.vertex(i).inverse().concat(&ax.vertex(i + 1)).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn same_line_examples() {
        let g = w("aabba");
        assert!(Axis::of(&g).unwrap().same_line(&Axis::of(&g.pow(2)).unwrap()));
        // x2 x1 = x1^-1 (x1 x2) x1: a translate of the axis, meeting it only at 1.
        assert!(!Axis::of(&w("ab")).unwrap().same_line(&Axis::of(&w("ba")).unwrap()));
        assert_eq!(
            overlap(&w("ab"), &w("ba"), None).unwrap().count,
            OverlapCount::Finite(1)
        );
        assert!(!Axis::of(&w("a")).unwrap().same_line(&Axis::of(&w("b")).unwrap()));
        assert!(Axis::of(&w("abA")).unwrap().same_line(&Axis::of(&w("aBBA")).unwrap()));
    }

    #[test]
    fn overlap_worked_value() {
        let g = w("aabba");
        let h = w("aabb");
        let ov = overlap(&g, &h, None).unwrap();
        assert_eq!(ov.count, OverlapCount::Finite(7));
        let expected = ["1", "a", "aa", "aab", "aabb", "aabba", "aabbaa"];
        let mut brute = brute_overlap(&g, &h, 8);
        brute.sort_by_key(|u| u.len());
        assert_eq!(brute, expected.iter().map(|s| w(s)).collect::<Vec<_>>());
        assert_eq!(ov.endpoints, Some((w("1"), w("aabbaa"))));
        assert_eq!(ov.edge_length(), Some(OverlapCount::Finite(6)));
    }

    #[test]
    fn overlap_of_generators() {
        let ov = overlap(&w("a"), &w("b"), None).unwrap();
        assert_eq!(ov.count, OverlapCount::Finite(1));
        assert_eq!(brute_overlap(&w("a"), &w("b"), 4), vec![w("1")]);
    }

    #[test]
    fn overlap_of_powers_is_infinite() {
        let g = w("aabba");
        assert_eq!(overlap(&g, &g.pow(2), None).unwrap().count, OverlapCount::Infinite);
        assert_eq!(overlap(&g, &g.pow(-3), None).unwrap().count, OverlapCount::Infinite);
    }

    #[test]
    fn overlap_matches_brute_force() {
        let pairs = [
            ("aabba", "aabb"),
            ("abA", "b"),
            ("bab", "aBa"),
            ("aaB", "ab"),
            ("abAB", "aabb"),
            ("BaabA", "ab"),
        ];
        for (g, h) in pairs {
            let (g, h) = (w(g), w(h));
            let ov = overlap(&g, &h, None).unwrap();
            let brute = brute_overlap(&g, &h, 8).len();
            assert_eq!(ov.count, OverlapCount::Finite(brute), "{g} {h}");
        }
    }

    #[test]
    fn empty_overlap_and_window() {
        // Axis of x2 through 1, axis of x1^2 x2 x1^-2 through x1^2: disjoint.
        let g = w("b");
        let h = w("aabAA");
        assert_eq!(overlap(&g, &h, None).unwrap().count, OverlapCount::Finite(0));
        assert_eq!(brute_overlap(&g, &h, 6).len(), 0);
        assert!(matches!(
            overlap(&g, &h, Some(1)),
            Err(AxisError::WindowExhausted { cap: 1, needed: 4 })
        ));
    }

    #[test]
    fn find_k_examples() {
        assert_eq!(find_k(&w("aabb"), &w("aabba"), 6), Ok(1));
        assert_eq!(find_k(&w("b"), &w("aB"), 3), Ok(1));
        assert_eq!(find_k(&w("ab"), &w("aba"), 4), Ok(1));
        // Length-one core needs the square to produce the bigram x1 x1.
        assert_eq!(find_k(&w("aa"), &w("a"), 4), Ok(2));
        assert!(matches!(
            find_k(&w("abA"), &w("a"), 3),
            Err(AxisError::NotCyclicallyReduced(_))
        ));
        assert_eq!(
            find_k(&w("abAB"), &w("a"), 3),
            Err(AxisError::WitnessNotFound { bound: 3 })
        );
    }
}
