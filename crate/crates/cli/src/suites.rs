//! The regression suite behind `verify-paper`: the builtin-word and
//! endomorphism reports from the core crate, plus seeded property suites
//! for the Whitehead-graph and cut-vertex lemmas.

use std::collections::{BTreeMap, BTreeSet};

use freetest::autos::{is_whitehead_minimal, whitehead_minimize, SimplicityOracle};
use freetest::certify::{verify_endomorphism_examples, verify_minimal_words, CertifyError, Report};
use freetest::whgraph::WhiteheadGraph;
use freetest::words::{CyclicWord, Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, SCHEMA};
use crate::sample::random_cyclically_reduced;

/// Sample sizes for the seeded suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteSizes {
    /// Random words for the graph-invariance and subgraph laws.
    pub graph_samples: usize,
    /// Random words pushed through the oracle for the cut-vertex lemmas.
    pub oracle_samples: usize,
    /// Longest word in the oracle suite.
    pub oracle_max_len: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            graph_samples: 2000,
            oracle_samples: 300,
            oracle_max_len: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaperReport {
    pub schema: u32,
    pub seed: u64,
    pub ranks: Vec<usize>,
    pub sizes: SuiteSizes,
    pub passed: bool,
    pub checks: BTreeMap<String, bool>,
    pub skipped: Vec<String>,
    /// A few offending inputs per failed check.
    pub counterexamples: BTreeMap<String, Vec<String>>,
}

#[derive(Default)]
struct Tally {
    checks: BTreeMap<String, bool>,
    skipped: Vec<String>,
    counterexamples: BTreeMap<String, Vec<String>>,
}

impl Tally {
    fn absorb(&mut self, report: Report) {
        for c in report.checks {
            self.checks.insert(c.name, c.passed);
        }
        self.skipped.extend(report.skipped);
    }

    fn record(&mut self, name: String, failures: Vec<String>) {
        self.checks.insert(name.clone(), failures.is_empty());
        if !failures.is_empty() {
            self.counterexamples
                .insert(name, failures.into_iter().take(5).collect());
        }
    }
}

/// Cut vertices by deleting each vertex and counting what remains.
pub fn cut_vertices_by_deletion(g: &WhiteheadGraph) -> BTreeSet<Letter> {
    let verts: Vec<Letter> = Letter::all(g.rank()).collect();
    verts
        .iter()
        .copied()
        .filter(|&v| {
            let rest: Vec<Letter> = verts.iter().copied().filter(|&x| x != v).collect();
            let mut seen: BTreeSet<Letter> = BTreeSet::new();
            let mut pieces = 0;
            for &s in &rest {
                if !seen.insert(s) {
                    continue;
                }
                pieces += 1;
                let mut stack = vec![s];
                while let Some(x) = stack.pop() {
                    for &y in &rest {
                        if g.has_edge(x, y) && seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
            }
            pieces >= 2
        })
        .collect()
}

/// A random cyclically reduced word whose cyclic bigrams all occur in
/// `v` or its inverse, built as a closed walk through those bigrams.
pub fn bigram_walk<R: Rng + ?Sized>(rng: &mut R, v: &CyclicWord, steps: usize) -> Option<Word> {
    let mut pool = v.bigrams();
    pool.extend(v.inverse().bigrams());
    if pool.is_empty() {
        return None;
    }
    let mut next: BTreeMap<Letter, Vec<Letter>> = BTreeMap::new();
    for &(x, y) in &pool {
        next.entry(x).or_default().push(y);
    }
    let start = v.letters()[rng.random_range(0..v.len())];
    let mut walk = vec![start];
    for _ in 0..steps.max(1) {
        let options = &next[walk.last().expect("nonempty")];
        walk.push(options[rng.random_range(0..options.len())]);
    }
    // Close the walk by a shortest path back to the start.
    let last = *walk.last().expect("nonempty");
    let mut parent: BTreeMap<Letter, Letter> = BTreeMap::new();
    let mut frontier = vec![last];
    let mut reached = last == start;
    while !reached && !frontier.is_empty() {
        let mut fresh = Vec::new();
        for x in frontier {
            for &y in &next[&x] {
                if y == start {
                    parent.insert(y, x);
                    reached = true;
                    break;
                }
                if y != last && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    fresh.push(y);
                }
            }
            if reached {
                break;
            }
        }
        frontier = fresh;
    }
    if !reached {
        return None;
    }
    if last != start {
        let mut tail = Vec::new();
        let mut at = start;
        while at != last {
            tail.push(at);
            at = parent[&at];
        }
        tail.reverse();
        walk.extend(tail);
    }
    walk.pop();
    Word::reduce(walk, v.rank()).ok().filter(|w| w.is_cyclically_reduced())
}

fn graph_laws(rank: usize, samples: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
    let mut conj = Vec::new();
    let mut sub = Vec::new();
    let mut shrink = Vec::new();
    for _ in 0..samples {
        let len = rng.random_range(1..=16);
        let w = random_cyclically_reduced(rng, rank, len);
        let tlen = rng.random_range(0..=6);
        let t = random_cyclically_reduced(rng, rank, tlen);
        let t = t.concat(&random_cyclically_reduced(rng, rank, 1)).expect("same rank");
        let g = WhiteheadGraph::build(&w);
        let gc = WhiteheadGraph::build(&w.conjugate(&t).expect("same rank"));
        let gi = WhiteheadGraph::build(&w.inverse());
        if g != gc || g != gi {
            conj.push(format!("w={w} t={t}"));
        }

        let v = CyclicWord::of(&w);
        let steps = rng.random_range(0..=12);
        if let Some(u) = bigram_walk(rng, &v, steps) {
            let gu = WhiteheadGraph::build(&u);
            if !gu.is_subgraph(&g).expect("same rank") {
                sub.push(format!("u={u} v={w}"));
            }
            if !g.cut_vertices().is_subset(&gu.cut_vertices()) {
                shrink.push(format!("u={u} v={w}"));
            }
        }

        // Adding edges can only remove cut vertices.
        let verts: Vec<Letter> = Letter::all(rank).collect();
        let extra: Vec<(Letter, Letter)> = (0..rng.random_range(0..=3))
            .map(|_| {
                (
                    verts[rng.random_range(0..verts.len())],
                    verts[rng.random_range(0..verts.len())],
                )
            })
            .filter(|(a, b)| a != b)
            .collect();
        let bigger = WhiteheadGraph::from_edges(rank, g.edges().iter().copied().chain(extra)).expect("in rank");
        if !bigger.cut_vertices().is_subset(&g.cut_vertices()) {
            shrink.push(format!("w={w} plus edges"));
        }
    }
    tally.record(format!("r{rank}.graph_conjugation_inversion_invariance"), conj);
    tally.record(format!("r{rank}.bigram_containment_gives_subgraph"), sub);
    tally.record(format!("r{rank}.supergraph_cut_vertices_shrink"), shrink);
}

enum CutVertexOutcome {
    Undecided,
    Checked {
        simple_without_cut: bool,
        non_simple_with_cut: bool,
        articulation_mismatch: bool,
    },
}

fn cut_vertex_check(oracle: &SimplicityOracle, w: &Word) -> CutVertexOutcome {
    let Ok(simple) = oracle.is_simple(w) else {
        return CutVertexOutcome::Undecided;
    };
    let c = CyclicWord::of(w);
    let min = whitehead_minimize(&c).0;
    let g = WhiteheadGraph::build(w);
    let gmin = WhiteheadGraph::of_cyclic(&min);
    CutVertexOutcome::Checked {
        simple_without_cut: simple && !gmin.has_cut_vertex(),
        non_simple_with_cut: !simple && is_whitehead_minimal(&c) && g.has_cut_vertex(),
        articulation_mismatch: g.cut_vertices() != cut_vertices_by_deletion(&g)
            || gmin.cut_vertices() != cut_vertices_by_deletion(&gmin),
    }
}

fn cut_vertex_lemmas(config: &RunConfig, rank: usize, sizes: SuiteSizes, rng: &mut ChaCha8Rng, tally: &mut Tally) {
    let words: Vec<Word> = (0..sizes.oracle_samples)
        .map(|_| {
            let len = rng.random_range(1..=sizes.oracle_max_len.max(1));
            random_cyclically_reduced(rng, rank, len)
        })
        .collect();
    let oracle = SimplicityOracle::new(config.oracle_cap);
    let outcomes: Vec<CutVertexOutcome> = config
        .pool()
        .install(|| words.par_iter().map(|w| cut_vertex_check(&oracle, w)).collect());
    let (mut a, mut b, mut c, mut undecided) = (Vec::new(), Vec::new(), Vec::new(), 0);
    for (w, o) in words.iter().zip(outcomes) {
        match o {
            CutVertexOutcome::Undecided => undecided += 1,
            CutVertexOutcome::Checked {
                simple_without_cut,
                non_simple_with_cut,
                articulation_mismatch,
            } => {
                if simple_without_cut {
                    a.push(w.to_string());
                }
                if non_simple_with_cut {
                    b.push(w.to_string());
                }
                if articulation_mismatch {
                    c.push(w.to_string());
                }
            }
        }
    }
    tally.record(format!("r{rank}.simple_minimal_has_cut_vertex"), a);
    tally.record(format!("r{rank}.non_simple_minimal_is_cut_free"), b);
    tally.record(format!("r{rank}.articulation_matches_deletion"), c);
    if undecided > 0 {
        tally.skipped.push(format!(
            "r{rank}: {undecided} sampled words undecided within the oracle budget"
        ));
    }
}

pub fn verify_paper(config: &RunConfig, ranks: &[usize], sizes: SuiteSizes) -> Result<PaperReport, CertifyError> {
    let mut tally = Tally::default();
    for &rank in ranks {
        let oracle = SimplicityOracle::new(config.oracle_cap);
        tally.absorb(verify_minimal_words(rank)?);
        tally.absorb(verify_endomorphism_examples(rank, &oracle)?);
        // One stream per rank so adding a rank leaves the others unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (rank as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        graph_laws(rank, sizes.graph_samples, &mut rng, &mut tally);
        cut_vertex_lemmas(config, rank, sizes, &mut rng, &mut tally);
    }
    Ok(PaperReport {
        schema: SCHEMA,
        seed: config.seed,
        ranks: ranks.to_vec(),
        sizes,
        passed: tally.checks.values().all(|&p| p),
        checks: tally.checks,
        skipped: tally.skipped,
        counterexamples: tally.counterexamples,
    })
}
