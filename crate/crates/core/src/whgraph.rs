//! Whitehead graphs and their cut vertices.
//!
//! The Whitehead graph of `w` has vertex set `S ∪ S⁻¹` (always all `2r`
//! letters) and an edge `{x, y}` for every `x ≠ y` such that `x y⁻¹`
//! occurs as a cyclic subword of the cyclic reduction of `w`. Edge
//! multiplicities are dropped.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::words::{CyclicWord, Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WhiteheadGraph {
    rank: usize,
    /// Unordered edges stored as `(low, high)` in letter order.
    edges: BTreeSet<(Letter, Letter)>,
}

/// JSON form: `{"rank": r, "edges": [["x1", "x2'"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphJson {
    pub rank: usize,
    pub edges: Vec<[String; 2]>,
}

fn ordered(a: Letter, b: Letter) -> (Letter, Letter) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl WhiteheadGraph {
    pub fn build(w: &Word) -> WhiteheadGraph {
        WhiteheadGraph::of_cyclic(&CyclicWord::of(w))
    }

    pub fn of_cyclic(w: &CyclicWord) -> WhiteheadGraph {
        let edges = w
            .bigrams()
            .into_iter()
            .map(|(x, z)| (x, z.inverse()))
            .filter(|(x, y)| x != y)
            .map(|(x, y)| ordered(x, y))
            .collect();
        WhiteheadGraph { rank: w.rank(), edges }
    }

    /// Arbitrary simple graph on the `2r` letters. Self-loops and letters
    /// outside the rank are rejected.
    pub fn from_edges<I>(rank: usize, edges: I) -> Result<WhiteheadGraph, WordError>
    where
        I: IntoIterator<Item = (Letter, Letter)>,
    {
        Word::identity(rank)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for l in [a, b] {
                if l.generator() > rank {
                    return Err(WordError::LetterOutOfRank {
                        index: l.generator(),
                        rank,
                    });
                }
            }
            if a != b {
                set.insert(ordered(a, b));
            }
        }
        Ok(WhiteheadGraph { rank, edges: set })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.rank
    }

    pub fn edges(&self) -> &BTreeSet<(Letter, Letter)> {
        &self.edges
    }

    pub fn has_edge(&self, a: Letter, b: Letter) -> bool {
        self.edges.contains(&ordered(a, b))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in &self.edges {
            adj[a.code()].push(b.code());
            adj[b.code()].push(a.code());
        }
        adj
    }

    pub fn is_subgraph(&self, other: &WhiteheadGraph) -> Result<bool, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(self.edges.is_subset(&other.edges))
    }

    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut count = 0;
        for s in 0..adj.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        count
    }

    /// Connectivity over all `2r` vertices; isolated vertices count.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Vertices whose deletion leaves the remaining `2r − 1` vertices
    /// disconnected.
    ///
    /// Uses one depth-first pass computing low-links. For each vertex `v`,
    /// the number of pieces its own component breaks into is derived from
    /// the DFS tree, and the other components are added unchanged.
    pub fn cut_vertices(&self) -> BTreeSet<Letter> {
        let adj = self.adjacency();
        let n = adj.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        // pieces[v] = components of (component of v) − v
        let mut pieces = vec![0usize; n];
        let mut timer = 0;
        let mut components = 0;

        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            components += 1;
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            // (vertex, parent, next neighbour index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(top) = stack.last_mut() {
                let (v, parent) = (top.0, top.1);
                if top.2 < adj[v].len() {
                    let u = adj[v][top.2];
                    top.2 += 1;
                    if disc[u] == usize::MAX {
                        disc[u] = timer;
                        low[u] = timer;
                        timer += 1;
                        // the piece holding the DFS parent survives deleting u
                        pieces[u] = 1;
                        stack.push((u, v, 0));
                    } else if u != parent {
                        low[v] = low[v].min(disc[u]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if parent == root || low[v] >= disc[parent] {
                            pieces[parent] += 1;
                        }
                    }
                }
            }
        }

        (0..n)
            .filter(|&v| components - 1 + pieces[v] >= 2)
            .map(Letter::from_code)
            .collect()
    }

    pub fn has_cut_vertex(&self) -> bool {
        !self.cut_vertices().is_empty()
    }

    /// Deterministic DOT rendering. Vertices are named `x1`, `x1'`, ...
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph whitehead {\n");
        for l in Letter::all(self.rank) {
            let _ = writeln!(out, "  \"{}\";", l.vertex_name());
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", a.vertex_name(), b.vertex_name());
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            rank: self.rank,
            edges: self
                .edges
                .iter()
                .map(|(a, b)| [a.vertex_name(), b.vertex_name()])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn g(s: &str, r: usize) -> WhiteheadGraph {
        WhiteheadGraph::build(&parse_word(s, Some(r)).unwrap())
    }

    fn edge_set(pairs: &[(Letter, Letter)]) -> BTreeSet<(Letter, Letter)> {
        pairs.iter().map(|&(a, b)| ordered(a, b)).collect()
    }

    /// Edges straight from the definition: scan every ordered pair of
    /// distinct letters and look for `x y⁻¹` in the doubled core.
    fn definitional_edges(s: &str, r: usize) -> BTreeSet<(Letter, Letter)> {
        let core = CyclicWord::of(&parse_word(s, Some(r)).unwrap());
        let l = core.letters();
        let n = l.len();
        let mut out = BTreeSet::new();
        for x in Letter::all(r) {
            for y in Letter::all(r) {
                if x == y || n < 2 {
                    continue;
                }
                if (0..n).any(|i| l[i] == x && l[(i + 1) % n] == y.inverse()) {
                    out.insert(ordered(x, y));
                }
            }
        }
        out
    }

    /// Test-only oracle: delete each vertex and flood-fill the rest.
    fn brute_cut_vertices(g: &WhiteheadGraph) -> BTreeSet<Letter> {
        let n = g.vertex_count();
        let adj = g.adjacency();
        let mut out = BTreeSet::new();
        for v in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&u| u != v).collect();
            if rest.is_empty() {
                continue;
            }
            let mut seen = vec![false; n];
            seen[v] = true;
            seen[rest[0]] = true;
            let mut stack = vec![rest[0]];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if rest.iter().any(|&u| !seen[u]) {
                out.insert(Letter::from_code(v));
            }
        }
        out
    }

    #[test]
    fn commutator_graph_is_four_cycle() {
        let (a, ai, b, bi) = (Letter::gen(1), Letter::inv(1), Letter::gen(2), Letter::inv(2));
        let expected = edge_set(&[(a, bi), (a, b), (ai, b), (ai, bi)]);
        assert_eq!(definitional_edges("abAB", 2), expected);
        assert_eq!(g("abAB", 2).edges(), &expected);
    }

    #[test]
    fn squares_graph_is_four_cycle() {
        let (a, ai, b, bi) = (Letter::gen(1), Letter::inv(1), Letter::gen(2), Letter::inv(2));
        let expected = edge_set(&[(a, ai), (a, bi), (b, bi), (b, ai)]);
        assert_eq!(definitional_edges("aabb", 2), expected);
        assert_eq!(g("aabb", 2).edges(), &expected);
    }

    #[test]
    fn single_letter_graph_is_edgeless() {
        let gr = g("a", 2);
        assert!(gr.edges().is_empty());
        assert_eq!(gr.vertex_count(), 4);
    }

    #[test]
    fn build_matches_definition_on_samples() {
        for s in ["abAB", "aabba", "abab", "aBBc", "cabACb", "abcABC", "aabbccA"] {
            assert_eq!(g(s, 3).edges(), &definitional_edges(s, 3), "{s}");
        }
    }

    #[test]
    fn cut_vertex_examples() {
        assert!(g("aabb", 2).cut_vertices().is_empty());
        assert!(brute_cut_vertices(&g("aabb", 2)).is_empty());

        let gr = g("aba", 2);
        let (a, ai, b, bi) = (Letter::gen(1), Letter::inv(1), Letter::gen(2), Letter::inv(2));
        assert_eq!(gr.edges(), &edge_set(&[(a, bi), (b, ai), (a, ai)]));
        assert!(gr.cut_vertices().contains(&a));
        assert_eq!(gr.cut_vertices(), brute_cut_vertices(&gr));

        let empty = g("a", 2);
        assert_eq!(empty.cut_vertices().len(), 4);
    }

    #[test]
    fn rank_one_has_no_cut_vertices() {
        // Two vertices: deleting one leaves a single vertex.
        assert!(g("a", 1).cut_vertices().is_empty());
        assert!(g("aa", 1).cut_vertices().is_empty());
    }

    #[test]
    fn disconnected_graph_conventions() {
        // Edge {x1, x1'} plus two isolated vertices: every vertex is a cut vertex.
        let gr = g("aa", 2);
        assert_eq!(gr.cut_vertices().len(), 4);
        assert_eq!(gr.cut_vertices(), brute_cut_vertices(&gr));
        // Connected on three vertices plus one isolated vertex: only the
        // isolated vertex is not a cut vertex.
        let (a, ai, b) = (Letter::gen(1), Letter::inv(1), Letter::gen(2));
        let gr = WhiteheadGraph::from_edges(2, [(a, ai), (ai, b), (b, a)]).unwrap();
        assert_eq!(gr.cut_vertices(), brute_cut_vertices(&gr));
        assert!(!gr.cut_vertices().contains(&Letter::inv(2)));
    }

    #[test]
    fn cut_vertices_agree_with_brute_force_on_all_rank2_graphs() {
        let pairs: Vec<(Letter, Letter)> = Letter::all(2)
            .flat_map(|a| Letter::all(2).filter(move |&b| a < b).map(move |b| (a, b)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            let gr = WhiteheadGraph::from_edges(2, edges).unwrap();
            assert_eq!(gr.cut_vertices(), brute_cut_vertices(&gr), "mask {mask:b}");
        }
    }

    #[test]
    fn subgraph_examples() {
        assert!(g("ab", 2).is_subgraph(&g("abAB", 2)).unwrap());
        assert!(g("abAB", 2).is_subgraph(&g("abAB", 2)).unwrap());
        assert!(!g("aabb", 2).is_subgraph(&g("abAB", 2)).unwrap());
        assert!(g("a", 2).is_subgraph(&g("a", 3)).is_err());
    }

    #[test]
    fn connectivity_examples() {
        assert!(g("abAB", 2).is_connected());
        assert!(!g("a", 2).is_connected());
        assert!(g("aabb", 2).is_connected());
    }

    #[test]
    fn dot_output() {
        let dot = g("a", 2).to_dot();
        assert_eq!(dot.lines().filter(|l| l.ends_with(';') && !l.contains("--")).count(), 4);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 0);
        let dot = g("aabb", 2).to_dot();
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 4);
        assert_eq!(dot, g("aabb", 2).to_dot());
        assert!(dot.contains("\"x1\" -- \"x1'\";"));
    }

    #[test]
    fn json_edges_sorted() {
        let j = g("aabb", 2).to_json();
        assert_eq!(j.rank, 2);
        let names: Vec<String> = j.edges.iter().map(|e| format!("{}-{}", e[0], e[1])).collect();
        assert_eq!(names, vec!["x1-x1'", "x1-x2'", "x1'-x2", "x2-x2'"]);
    }
}
