//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::process::Command;
use std::time::{Duration, Instant};

use freetest::autos::{is_whitehead_minimal, whitehead_minimize, SimplicityOracle};
use freetest::axes::{find_k, on_axis, overlap, Axis, OverlapCount};
use freetest::certify::{commutator_word, squares_word, Certificate, Certifier};
use freetest::whgraph::WhiteheadGraph;
use freetest::words::{CyclicWord, Word};
use freetest_cli::sample::{all_cyclically_reduced, all_up_to, random_cyclically_reduced};
use freetest_cli::suites::{bigram_walk, cut_vertices_by_deletion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const BIN: &str = env!("CARGO_BIN_EXE_freetest");

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn freetest(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("run freetest")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_verify_paper() -> Outcome {
    let out = freetest(&["verify-paper", "--ranks", "2,4", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let checks = report["checks"].as_object().ok_or("no checks")?;
    let failed: Vec<&String> = checks
        .iter()
        .filter(|(_, v)| v != &&serde_json::Value::Bool(true))
        .map(|(k, _)| k)
        .collect();
    ensure(out.status.code() == Some(0) && failed.is_empty(), || {
        format!("failed checks {failed:?}")
    })?;
    for needed in [
        "u_minimal",
        "w_comm_minimal",
        "u_cut_free",
        "w_comm_cut_free",
        "phi1_fixes_u1",
        "phi2_fixes_u2",
        "phi1_abelian_det_zero",
        "phi2_abelian_det_zero",
        "u1_non_simple",
        "u2_non_simple",
    ] {
        for r in [2, 4] {
            ensure(checks.contains_key(&format!("r{r}.{needed}")), || {
                format!("missing r{r}.{needed}")
            })?;
        }
    }
    Ok(format!("{} checks", checks.len()))
}

fn c2_graph_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut premises = 0;
    for i in 0..10_000 {
        let rank = 1 + i % 4;
        let len = rng.random_range(1..=16);
        let w = random_cyclically_reduced(&mut rng, rank, len);
        let tlen = rng.random_range(1..=8);
        let t = random_cyclically_reduced(&mut rng, rank, tlen);
        let g = WhiteheadGraph::build(&w);
        ensure(WhiteheadGraph::build(&w.conjugate(&t).unwrap()) == g, || {
            format!("conjugation: w={w} t={t}")
        })?;
        ensure(WhiteheadGraph::build(&w.inverse()) == g, || format!("inversion: w={w}"))?;

        let v = CyclicWord::of(&w);
        let steps = rng.random_range(0..=16);
        let mut candidates: Vec<Word> = bigram_walk(&mut rng, &v, steps).into_iter().collect();
        let ulen = rng.random_range(1..=16);
        candidates.push(random_cyclically_reduced(&mut rng, rank, ulen));
        let mut pool = v.bigrams();
        pool.extend(v.inverse().bigrams());
        for u in candidates {
            if CyclicWord::of(&u).bigrams().is_subset(&pool) {
                premises += 1;
                ensure(WhiteheadGraph::build(&u).is_subgraph(&g).unwrap(), || {
                    format!("subgraph: u={u} v={w}")
                })?;
            }
        }
    }
    Ok(format!("10000 words, {premises} bigram-containment pairs"))
}

fn c3_cut_vertex_lemmas() -> Outcome {
    let words = all_up_to(2, 8).ok_or("enumeration too large")?;
    let oracle = SimplicityOracle::default();
    let bad: Vec<String> = words
        .par_iter()
        .filter_map(|w| {
            let simple = match oracle.is_simple(w) {
                Ok(s) => s,
                Err(e) => return Some(format!("{w}: {e}")),
            };
            let c = CyclicWord::of(w);
            let g = WhiteheadGraph::build(w);
            let gmin = WhiteheadGraph::of_cyclic(&whitehead_minimize(&c).0);
            if g.cut_vertices() != cut_vertices_by_deletion(&g)
                || gmin.cut_vertices() != cut_vertices_by_deletion(&gmin)
            {
                return Some(format!("{w}: articulation disagrees with deletion"));
            }
            if simple && !gmin.has_cut_vertex() {
                return Some(format!("{w}: simple but minimal graph has no cut vertex"));
            }
            if !simple && is_whitehead_minimal(&c) && g.has_cut_vertex() {
                return Some(format!("{w}: non-simple minimal with a cut vertex"));
            }
            None
        })
        .collect();
    ensure(bad.is_empty(), || {
        bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
    })?;
    Ok(format!("{} words", words.len()))
}

/// A word whose axis runs along `w`'s for a while: a prefix of `w^∞`
/// longer than `|w|`, followed by a random tail.
fn aligned_subject(rng: &mut ChaCha8Rng, w: &Word) -> Word {
    let extra = rng.random_range(1..=w.len() + 2);
    let n = w.len() + extra;
    let prefix = w.pow(n.div_ceil(w.len()) as i64).prefix(n);
    let tlen = rng.random_range(0..=4);
    let tail = random_cyclically_reduced(rng, w.rank(), tlen);
    let a = prefix.concat(&tail).unwrap();
    let shift = rng.random_range(0..=w.len());
    a.conjugate(&w.pow(2).prefix(shift)).unwrap()
}

fn c4_witness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut qualifying, mut tries) = (0, 0);
    // Pairs that meet |w|+1 only when counting vertices, and how many of
    // those have no witness.
    let (mut vertex_only, mut vertex_only_missing) = (0, 0);
    while qualifying < 1000 {
        tries += 1;
        ensure(tries < 200_000, || format!("only {qualifying} qualifying pairs"))?;
        let rank = rng.random_range(2..=3);
        let wlen = rng.random_range(1..=8);
        let w = random_cyclically_reduced(&mut rng, rank, wlen);
        let a = if rng.random_bool(0.8) {
            aligned_subject(&mut rng, &w)
        } else {
            let alen = rng.random_range(1..=12);
            random_cyclically_reduced(&mut rng, rank, alen)
        };
        if a.is_empty() {
            continue;
        }
        let ov = overlap(&a, &w, None).map_err(|e| e.to_string())?;
        if !ov.edge_length().is_some_and(|e| e.at_least(w.len() + 1)) {
            if ov.count.at_least(w.len() + 1) {
                vertex_only += 1;
                vertex_only_missing += usize::from(find_k(&w, &a, w.len() + 2).is_err());
            }
            continue;
        }
        qualifying += 1;
        let k = find_k(&w, &a, w.len() + 2).map_err(|e| format!("w={w} a={a}: {e}"))?;
        ensure(k.unsigned_abs() as usize <= w.len() + 2, || format!("k={k} too large"))?;
        let ok = WhiteheadGraph::build(&w)
            .is_subgraph(&WhiteheadGraph::build(&a.pow(k)))
            .unwrap();
        ensure(ok, || format!("w={w} a={a} k={k}: not a subgraph"))?;
    }
    Ok(format!(
        "{qualifying} pairs with overlap >= |w|+1 edges ({tries} drawn); \
         {vertex_only_missing} of {vertex_only} pairs meeting it only in vertices lack a witness"
    ))
}

fn certified_rules(c: &Certifier, pivots: &[Word], a: &Word) -> Vec<Certificate> {
    let mut certs = vec![c.squares_subword(a).unwrap(), c.commutator_subword(a).unwrap()];
    certs.extend(pivots.iter().map(|p| c.via_theorem(p, a).unwrap()));
    certs.into_iter().filter(Certificate::is_certified).collect()
}

fn c5_theorem_soundness() -> Outcome {
    let words = all_up_to(2, 10).ok_or("enumeration too large")?;
    let c = Certifier::default();
    let pivots = vec![squares_word(2).unwrap(), commutator_word(2).unwrap()];
    let results: Vec<(usize, Option<String>)> = words
        .par_iter()
        .map(|a| {
            let certs = certified_rules(&c, &pivots, a);
            if certs.is_empty() {
                return (0, None);
            }
            let bad = match c.oracle().is_simple(a) {
                Ok(false) => None,
                Ok(true) => Some(format!("{a} certified by {:?} but simple", certs[0].rule)),
                Err(e) => Some(format!("{a}: {e}")),
            };
            (1, bad)
        })
        .collect();
    let certified: usize = results.iter().map(|r| r.0).sum();
    let bad: Vec<&String> = results.iter().filter_map(|r| r.1.as_ref()).collect();
    ensure(bad.is_empty(), || format!("{} violations, e.g. {}", bad.len(), bad[0]))?;
    ensure(certified > 0, || "nothing was certified".into())?;
    Ok(format!("{} words, {certified} certified, 0 violations", words.len()))
}

fn c6_squares_corollary() -> Outcome {
    let pattern = Word::from_signed(&[1, 1, 2, 2, 1], 2).unwrap();
    let gk = Word::from_signed(&[1, 1, 2, 2, 1, 1], 2).unwrap();
    let oracle = SimplicityOracle::default();
    let words = all_up_to(2, 9).ok_or("enumeration too large")?;
    let hits: Vec<&Word> = words
        .iter()
        .filter(|w| CyclicWord::of(w).contains_cyclic_subword(&pattern))
        .collect();
    for w in &hits {
        ensure(oracle.is_simple(w) == Ok(false), || {
            format!("{w} contains the pattern but is not certified non-simple by the oracle")
        })?;
    }
    let mut gk_hits = 0;
    for len in 1..=12 {
        for w in all_cyclically_reduced(2, len).ok_or("enumeration too large")? {
            let c = CyclicWord::of(&w);
            if c.contains_cyclic_subword(&gk) {
                gk_hits += 1;
                ensure(c.contains_cyclic_subword(&pattern), || {
                    format!("{w} has the longer pattern only")
                })?;
            }
        }
    }
    Ok(format!(
        "{} words contain x1²x2²x1 (length ≤ 9); {gk_hits} contain x1²x2²x1² (length ≤ 12)",
        hits.len()
    ))
}

fn c7_axes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = Word::from_signed(&[1, 1, 2, 2, 1], 2).unwrap();
    let h = Word::from_signed(&[1, 1, 2, 2], 2).unwrap();
    let worked = overlap(&g, &h, None).map_err(|e| e.to_string())?.count;
    ensure(worked == OverlapCount::Finite(7), || format!("worked overlap {worked}"))?;
    let random_word = |rng: &mut ChaCha8Rng, rank: usize, max: usize| {
        let len = rng.random_range(0..=max);
        let raw: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.random_range(1..=rank as i32);
                if rng.random_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        Word::from_signed(&raw, rank).unwrap()
    };
    for _ in 0..1000 {
        let rank = rng.random_range(1..=3);
        let (g, h, t) = (
            random_word(&mut rng, rank, 10),
            random_word(&mut rng, rank, 10),
            random_word(&mut rng, rank, 6),
        );
        if g.is_empty() || h.is_empty() {
            continue;
        }
        let ax = Axis::of(&g).unwrap();
        for i in -6..=6 {
            ensure(on_axis(&ax.vertex(i), &g).unwrap(), || {
                format!("vertex {i} of {g} off its axis")
            })?;
        }
        let gh = overlap(&g, &h, None).map_err(|e| e.to_string())?.count;
        ensure(overlap(&h, &g, None).unwrap().count == gh, || {
            format!("asymmetric: {g} {h}")
        })?;
        let conj = overlap(&g.conjugate(&t).unwrap(), &h.conjugate(&t).unwrap(), None)
            .unwrap()
            .count;
        ensure(conj == gh, || format!("not equivariant: {g} {h} {t}"))?;
        let n = rng.random_range(2..=4);
        ensure(
            overlap(&g, &g.pow(n), None).unwrap().count == OverlapCount::Infinite,
            || format!("{g} vs its power"),
        )?;
    }
    Ok("1000 random triples, worked value 7".into())
}

fn c8_determinism() -> Outcome {
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "corpus", "--rank", "2", "--length", "8", "--count", "400", "--seed", "17", "--jobs", "4", "--format",
            "json",
        ],
        vec![
            "corpus", "--rank", "2", "--length", "6", "--count", "all", "--format", "json",
        ],
        vec![
            "verify-paper",
            "--ranks",
            "2,3",
            "--seed",
            "17",
            "--jobs",
            "4",
            "--format",
            "json",
        ],
    ];
    for args in &runs {
        let a = freetest(args);
        let b = freetest(args);
        ensure(a.status.success() && b.status.success(), || format!("{args:?} failed"))?;
        ensure(a.stdout == b.stdout, || format!("{args:?} differs between runs"))?;
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
        ensure(v["schema"] == 1, || format!("{args:?} lacks schema 1"))?;
    }
    Ok(format!("{} configurations byte-identical", runs.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "1 regression suite (verify-paper, ranks 2 and 4)",
            Duration::from_secs(10),
            c1_verify_paper,
        ),
        (
            "2 Whitehead-graph laws on random words",
            Duration::from_secs(60),
            c2_graph_laws,
        ),
        (
            "3 cut-vertex lemmas, exhaustive rank 2, length <= 8",
            Duration::from_secs(300),
            c3_cut_vertex_lemmas,
        ),
        (
            "4 power witness for long overlaps",
            Duration::from_secs(120),
            c4_witness,
        ),
        (
            "5 certificate soundness, exhaustive rank 2, length <= 10",
            Duration::from_secs(600),
            c5_theorem_soundness,
        ),
        (
            "6 squares-subword rule and pattern containment",
            Duration::from_secs(300),
            c6_squares_corollary,
        ),
        ("7 axis suite", Duration::from_secs(30), c7_axes),
        (
            "8 determinism of corpus and verify-paper",
            Duration::from_secs(120),
            c8_determinism,
        ),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s limit", limit.as_secs())),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {detail} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
