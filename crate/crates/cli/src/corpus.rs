//! Statistics over a corpus of cyclically reduced words: how many are
//! simple, how many each rule certifies, and whether any certificate is
//! contradicted by the oracle.

use std::collections::BTreeMap;

use freetest::certify::{commutator_word, squares_word, Certifier, CertifyError, Verdict};
use freetest::words::Word;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{RunConfig, SCHEMA};
use crate::sample::{all_cyclically_reduced, random_cyclically_reduced, EXHAUSTIVE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Sample(usize),
    All,
}

impl std::str::FromStr for Count {
    type Err = String;

    fn from_str(s: &str) -> Result<Count, String> {
        if s == "all" {
            return Ok(Count::All);
        }
        s.parse()
            .map(Count::Sample)
            .map_err(|_| format!("expected a number or `all`, got `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("corpus rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("rank {rank}, length {length} has more than {limit} words; use --count N", limit = EXHAUSTIVE_LIMIT)]
    TooLarge { rank: usize, length: usize },
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Rule labels used as report keys.
pub const SQUARES: &str = "COR_SQUARES";
pub const COMMUTATORS: &str = "COR_COMMUTATORS";
pub const THEOREM_U: &str = "THEOREM_OVERLAP_U";
pub const THEOREM_W_COMM: &str = "THEOREM_OVERLAP_W_COMM";
pub const ANY: &str = "ANY";

/// Outcome for one word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordResult {
    pub word: Word,
    /// `None` when the oracle ran out of budget.
    pub simple: Option<bool>,
    pub certified: Vec<&'static str>,
    pub undecided_certificates: usize,
}

impl WordResult {
    pub fn is_violation(&self) -> bool {
        self.simple == Some(true) && !self.certified.is_empty()
    }
}

/// Checks one word against the oracle and every applicable rule.
pub fn evaluate(certifier: &Certifier, a: &Word) -> Result<WordResult, CertifyError> {
    let rank = a.rank();
    let simple = certifier.oracle().is_simple(a).ok();
    let mut certs = vec![
        (SQUARES, certifier.squares_subword(a)?),
        (THEOREM_U, certifier.via_theorem(&squares_word(rank)?, a)?),
    ];
    if rank.is_multiple_of(2) {
        certs.push((COMMUTATORS, certifier.commutator_subword(a)?));
        certs.push((THEOREM_W_COMM, certifier.via_theorem(&commutator_word(rank)?, a)?));
    }
    Ok(WordResult {
        word: a.clone(),
        simple,
        certified: certs
            .iter()
            .filter(|(_, c)| c.is_certified())
            .map(|(n, _)| *n)
            .collect(),
        undecided_certificates: certs.iter().filter(|(_, c)| c.verdict == Verdict::Undecided).count(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub schema: u32,
    pub rank: usize,
    pub length: usize,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub words: usize,
    pub simple: usize,
    pub non_simple: usize,
    pub undecided: usize,
    pub fraction_simple: f64,
    pub fraction_non_simple: f64,
    pub certified: BTreeMap<&'static str, usize>,
    pub fraction_certified: BTreeMap<&'static str, f64>,
    pub undecided_certificates: usize,
    pub violations: usize,
    /// Up to ten words that were certified yet found simple.
    pub violation_examples: Vec<Word>,
}

fn fraction(n: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        n as f64 / total as f64
    }
}

/// The words a corpus run looks at, in order.
pub fn corpus_words(rank: usize, length: usize, count: Count, seed: u64) -> Result<Vec<Word>, CorpusError> {
    if rank < 2 {
        return Err(CorpusError::RankTooSmall(rank));
    }
    match count {
        Count::All => all_cyclically_reduced(rank, length).ok_or(CorpusError::TooLarge { rank, length }),
        Count::Sample(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..n)
                .map(|_| random_cyclically_reduced(&mut rng, rank, length))
                .collect())
        }
    }
}

pub fn run_corpus(config: &RunConfig, rank: usize, length: usize, count: Count) -> Result<CorpusReport, CorpusError> {
    let words: Vec<Word> = corpus_words(rank, length, count, config.seed)?
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let certifier = config.certifier();
    let results: Result<Vec<WordResult>, CertifyError> = config
        .pool()
        .install(|| words.par_iter().map(|w| evaluate(&certifier, w)).collect());
    let results = results?;
    Ok(summarize(rank, length, count, config.seed, &results))
}

pub fn summarize(rank: usize, length: usize, count: Count, seed: u64, results: &[WordResult]) -> CorpusReport {
    let total = results.len();
    let simple = results.iter().filter(|r| r.simple == Some(true)).count();
    let non_simple = results.iter().filter(|r| r.simple == Some(false)).count();
    let mut labels = vec![SQUARES, THEOREM_U];
    if rank.is_multiple_of(2) {
        labels.extend([COMMUTATORS, THEOREM_W_COMM]);
    }
    let mut certified: BTreeMap<&'static str, usize> = labels
        .iter()
        .map(|&l| (l, results.iter().filter(|r| r.certified.contains(&l)).count()))
        .collect();
    certified.insert(ANY, results.iter().filter(|r| !r.certified.is_empty()).count());
    let fraction_certified = certified.iter().map(|(&k, &v)| (k, fraction(v, total))).collect();
    let violations: Vec<&WordResult> = results.iter().filter(|r| r.is_violation()).collect();
    CorpusReport {
        schema: SCHEMA,
        rank,
        length,
        mode: match count {
            Count::All => "exhaustive",
            Count::Sample(_) => "sample",
        },
        seed: matches!(count, Count::Sample(_)).then_some(seed),
        words: total,
        simple,
        non_simple,
        undecided: total - simple - non_simple,
        fraction_simple: fraction(simple, total),
        fraction_non_simple: fraction(non_simple, total),
        certified,
        fraction_certified,
        undecided_certificates: results.iter().map(|r| r.undecided_certificates).sum(),
        violations: violations.len(),
        violation_examples: violations.iter().take(10).map(|r| r.word.clone()).collect(),
    }
}
