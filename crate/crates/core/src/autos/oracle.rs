//! Deciding whether an element lies in a proper free factor.
//!
//! The element is first shortened to minimal cyclic length. All minimal
//! words in its automorphism orbit are then explored breadth-first through
//! length-preserving multiplier moves. The element is simple iff some
//! explored word omits a generator.
//!
//! The search works on classes of cyclic words modulo rotation, inversion
//! of the whole word, and signed relabeling of generators. None of these
//! change whether a generator is omitted, and the set of multiplier moves
//! is closed under conjugation by relabelings, so the quotient search
//! visits exactly the classes of the full orbit.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use super::{image_core, multiplier_moves};
use crate::words::{Letter, Word};

pub const DEFAULT_ORACLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("undecided within budget: visited {visited} classes (cap {budget})")]
    Undecided { visited: usize, budget: usize },
}

type MemoKey = (usize, Vec<u8>);
type MoveTables = Arc<Vec<Vec<Vec<Letter>>>>;

/// Simplicity oracle with a shared memo of decided classes.
///
/// Safe to share between threads. Every class visited during one search
/// lies in the same orbit, so all of them are memoized with the answer.
pub struct SimplicityOracle {
    budget: usize,
    memo: RwLock<HashMap<MemoKey, bool>>,
    tables: RwLock<HashMap<usize, MoveTables>>,
}

impl Default for SimplicityOracle {
    fn default() -> Self {
        SimplicityOracle::new(DEFAULT_ORACLE_BUDGET)
    }
}

/// Relabels a letter sequence so generators appear as `x1, x2, ...` in
/// order of first occurrence, each first occurrence positive. This is the
/// least sequence among all signed relabelings of `s`.
fn relabel_first_occurrence(s: impl Iterator<Item = Letter>, rank: usize, out: &mut Vec<u8>) {
    out.clear();
    let mut map: Vec<Option<(usize, bool)>> = vec![None; rank];
    let mut next = 0;
    for l in s {
        let slot = &mut map[l.generator() - 1];
        let (g, flip) = *slot.get_or_insert_with(|| {
            next += 1;
            (next, l.is_inverted())
        });
        out.push(Letter::new(g, l.is_inverted() ^ flip).code() as u8);
    }
}

/// Canonical key of a cyclic word modulo rotation, inversion and signed
/// relabeling.
pub(crate) fn class_key(core: &[Letter], rank: usize) -> Vec<u8> {
    let n = core.len();
    let mut best: Option<Vec<u8>> = None;
    let mut buf = Vec::with_capacity(n);
    for inverted in [false, true] {
        for start in 0..n {
            if inverted {
                let it = (0..n).map(|j| core[(start + n - j) % n].inverse());
                relabel_first_occurrence(it, rank, &mut buf);
            } else {
                let it = (0..n).map(|j| core[(start + j) % n]);
                relabel_first_occurrence(it, rank, &mut buf);
            }
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
    }
    best.unwrap_or_default()
}

fn omits_generator(key: &[u8], rank: usize) -> bool {
    // After first-occurrence relabeling the generators used are exactly 1..=k.
    key.iter().map(|&c| c as usize / 2 + 1).max().unwrap_or(0) < rank
}

fn key_letters(key: &[u8]) -> Vec<Letter> {
    key.iter().map(|&c| Letter::from_code(c as usize)).collect()
}

impl SimplicityOracle {
    pub fn new(budget: usize) -> SimplicityOracle {
        SimplicityOracle {
            budget: budget.max(1),
            memo: RwLock::new(HashMap::new()),
            tables: RwLock::new(HashMap::new()),
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn tables(&self, rank: usize) -> MoveTables {
        if let Some(t) = self.tables.read().expect("tables lock").get(&rank) {
            return t.clone();
        }
        let t: MoveTables = Arc::new(multiplier_moves(rank).map(|m| m.letter_images()).collect());
        self.tables
            .write()
            .expect("tables lock")
            .entry(rank)
            .or_insert(t)
            .clone()
    }

    fn lookup(&self, rank: usize, key: &[u8]) -> Option<bool> {
        self.memo.read().expect("memo lock").get(&(rank, key.to_vec())).copied()
    }

    fn record(&self, rank: usize, keys: impl IntoIterator<Item = Vec<u8>>, simple: bool) {
        let mut memo = self.memo.write().expect("memo lock");
        for k in keys {
            memo.insert((rank, k), simple);
        }
    }

    /// Number of memoized classes.
    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    /// True iff `w` lies in a proper free factor. The identity counts as
    /// simple. In rank 1 the only proper free factor is trivial.
    pub fn is_simple(&self, w: &Word) -> Result<bool, OracleError> {
        let rank = w.rank();
        let core = w.cyclic_reduce().1;
        if core.is_empty() {
            return Ok(true);
        }
        let tables = self.tables(rank);

        // Descend to minimal length, remembering the classes passed through.
        let mut current = core.letters().to_vec();
        let mut seen_keys = Vec::new();
        loop {
            let key = class_key(&current, rank);
            if omits_generator(&key, rank) {
                seen_keys.push(key);
                self.record(rank, seen_keys, true);
                return Ok(true);
            }
            if let Some(ans) = self.lookup(rank, &key) {
                self.record(rank, seen_keys, ans);
                return Ok(ans);
            }
            seen_keys.push(key);
            match tables
                .iter()
                .map(|t| image_core(t, &current))
                .find(|img| img.len() < current.len())
            {
                Some(shorter) => current = shorter,
                None => break,
            }
        }

        // Breadth-first search over minimal classes.
        let start = seen_keys.last().expect("at least one key").clone();
        let len = start.len();
        let mut visited: HashSet<Vec<u8>> = HashSet::new();
        visited.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        let mut verdict = false;
        'search: while let Some(node) = queue.pop_front() {
            let letters = key_letters(&node);
            for t in tables.iter() {
                let img = image_core(t, &letters);
                if img.len() != len {
                    continue;
                }
                let key = class_key(&img, rank);
                if visited.contains(&key) {
                    continue;
                }
                if omits_generator(&key, rank) {
                    visited.insert(key);
                    verdict = true;
                    break 'search;
                }
                if let Some(ans) = self.lookup(rank, &key) {
                    visited.insert(key);
                    verdict = ans;
                    break 'search;
                }
                visited.insert(key.clone());
                if visited.len() > self.budget {
                    return Err(OracleError::Undecided {
                        visited: visited.len(),
                        budget: self.budget,
                    });
                }
                queue.push_back(key);
            }
        }
        self.record(rank, seen_keys.into_iter().chain(visited), verdict);
        Ok(verdict)
    }

    pub fn is_test_element_for_monos(&self, w: &Word) -> Result<bool, OracleError> {
        self.is_simple(w).map(|s| !s)
    }
}

/// One-off query with a fresh oracle and the default budget.
pub fn is_simple(w: &Word) -> Result<bool, OracleError> {
    SimplicityOracle::default().is_simple(w)
}

pub fn is_test_element_for_monos(w: &Word) -> Result<bool, OracleError> {
    is_simple(w).map(|s| !s)
}
