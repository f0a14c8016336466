//! Certificates that an element lies in no proper free factor, and hence is
//! a test element for monomorphisms.
//!
//! The overlap rule: let `w` be non-simple with `S` minimizing its length.
//! If the axes of `w` and a nontrivial `a` share a segment of at least
//! `|w| + 1` edges, then `Wh(w)` is a subgraph of `Wh(a^k)` for some `k`;
//! `Wh(w)` has no cut vertex, so neither has `Wh(a^k)`, and `a^k` (hence
//! `a`) is not simple.
//!
//! The two subword rules are the special cases where `w` is
//! `x1² ... xr²` or `[x1, x2] ... [x(2n-1), x(2n)]` and `a` contains
//! `w · x1` cyclically.

use serde::Serialize;
use thiserror::Error;

use crate::autos::{is_whitehead_minimal, GeneratorMap, OracleError, SimplicityOracle, DEFAULT_ORACLE_BUDGET};
use crate::axes::{default_k_bound, find_k, overlap, AxisError, OverlapCount};
use crate::whgraph::WhiteheadGraph;
use crate::words::{CyclicWord, Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("commutator words need even rank, got {0}")]
    OddRank(usize),
    #[error("{0} must be nontrivial")]
    Trivial(&'static str),
    #[error("{0} is not cyclically reduced; pass its cyclic core")]
    NotCyclicallyReduced(Word),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Axis(#[from] AxisError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NonSimpleCertified,
    HypothesisFailed,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    TheoremOverlap,
    CorSquares,
    CorCommutators,
    Oracle,
}

/// The individual checks recorded in a trail, in the order they run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// The subject contains the corollary pattern cyclically.
    Subword,
    /// The pivot `w` is not simple.
    PivotNonSimple,
    /// The pivot is cyclically reduced and no Whitehead move shortens it.
    PivotMinimal,
    /// The axes share a segment of at least `|w| + 1` edges.
    Overlap,
    /// Some power `a^k` has `Wh(w)` as a subgraph.
    Witness,
    /// `Wh(w)` has no cut vertex.
    CutFreePivot,
    /// `Wh(a^k)` has no cut vertex.
    CutFreePower,
    /// The simplicity oracle says the subject is not simple.
    OracleNonSimple,
}

/// Where the corollary pattern sits in the subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub pattern: Word,
    pub offset: usize,
    /// `a ≡ a′ · pattern · a″` when the occurrence does not wrap around.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_prime: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_double_prime: Option<Word>,
    /// The rotation of the subject that starts with the pattern.
    pub rotated: Word,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Trail {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_simple_w: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal: Option<bool>,
    /// Common vertices of the two axes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap: Option<OverlapCount>,
    /// Common segment length in edges; this is what `threshold` bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap_edges: Option<OverlapCount>,
    /// `|w| + 1`, in edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgraph: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_free_w: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_free_ak: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_simple: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub subject: Word,
    pub verdict: Verdict,
    pub rule: Rule,
    /// First check that failed (or could not be decided).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed: Option<Check>,
    pub trail: Trail,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::NonSimpleCertified
    }

    fn new(subject: &Word, rule: Rule) -> Certificate {
        Certificate {
            subject: subject.clone(),
            verdict: Verdict::NonSimpleCertified,
            rule,
            failed: None,
            trail: Trail::default(),
        }
    }

    fn fail(mut self, check: Check) -> Certificate {
        self.verdict = Verdict::HypothesisFailed;
        self.failed = Some(check);
        self
    }

    fn undecided(mut self, check: Check) -> Certificate {
        self.verdict = Verdict::Undecided;
        self.failed = Some(check);
        self
    }
}

/// `x1² x2² ... xr²`.
pub fn squares_word(rank: usize) -> Result<Word, CertifyError> {
    power_word(rank, 2)
}

/// `x1^k x2^k ... xr^k`.
pub fn power_word(rank: usize, k: usize) -> Result<Word, CertifyError> {
    if rank < 2 {
        return Err(CertifyError::RankTooSmall(rank));
    }
    let letters = (1..=rank).flat_map(|g| std::iter::repeat_n(Letter::gen(g), k));
    Ok(Word::reduce(letters, rank)?)
}

/// `[x1, x2][x3, x4] ... [x(2n-1), x(2n)]` with `[x, y] = x y x⁻¹ y⁻¹`.
pub fn commutator_word(rank: usize) -> Result<Word, CertifyError> {
    if rank < 2 {
        return Err(CertifyError::RankTooSmall(rank));
    }
    if !rank.is_multiple_of(2) {
        return Err(CertifyError::OddRank(rank));
    }
    let letters = (1..=rank / 2).flat_map(|i| {
        let (x, y) = (Letter::gen(2 * i - 1), Letter::gen(2 * i));
        [x, y, x.inverse(), y.inverse()]
    });
    Ok(Word::reduce(letters, rank)?)
}

fn append_x1(w: &Word) -> Word {
    w.concat(&Word::generator(1, w.rank()).expect("rank >= 1"))
        .expect("same rank")
}

/// Named words used throughout: `u`, `u1 = u·x1`, the power family
/// `x1^k ... xr^k` for `k = 2, 3`, and (for even rank) `w_comm` and
/// `u2 = w_comm·x1`.
pub fn builtin_words(rank: usize) -> Result<Vec<(String, Word)>, CertifyError> {
    let u = squares_word(rank)?;
    let mut out = vec![("u".to_string(), u.clone()), ("u1".to_string(), append_x1(&u))];
    if rank.is_multiple_of(2) {
        let c = commutator_word(rank)?;
        out.push(("w_comm".to_string(), c.clone()));
        out.push(("u2".to_string(), append_x1(&c)));
    }
    for k in 2..=3 {
        out.push((format!("power_{k}"), power_word(rank, k)?));
    }
    Ok(out)
}

/// Runs certification rules against a shared simplicity oracle.
pub struct Certifier {
    oracle: SimplicityOracle,
    overlap_cap: Option<usize>,
    k_bound: Option<usize>,
}

impl Default for Certifier {
    fn default() -> Self {
        Certifier::new(SimplicityOracle::new(DEFAULT_ORACLE_BUDGET))
    }
}

impl Certifier {
    pub fn new(oracle: SimplicityOracle) -> Certifier {
        Certifier {
            oracle,
            overlap_cap: None,
            k_bound: None,
        }
    }

    /// Scan half-width for overlaps; `None` uses [`crate::axes::default_cap`].
    pub fn with_overlap_cap(mut self, cap: Option<usize>) -> Certifier {
        self.overlap_cap = cap;
        self
    }

    /// Bound on `|k|`; `None` uses `|w| + 2`.
    pub fn with_k_bound(mut self, bound: Option<usize>) -> Certifier {
        self.k_bound = bound;
        self
    }

    pub fn oracle(&self) -> &SimplicityOracle {
        &self.oracle
    }

    fn check_rank(w: &Word) -> Result<(), CertifyError> {
        if w.rank() < 2 {
            Err(CertifyError::RankTooSmall(w.rank()))
        } else {
            Ok(())
        }
    }

    /// Fills in overlap, witness and cut-vertex entries for pivot `w` and
    /// subject `a`, returning the first failed check.
    fn replay(&self, trail: &mut Trail, w: &Word, a: &Word) -> Result<Option<Check>, CertifyError> {
        let threshold = w.len() + 1;
        let ov = overlap(a, w, self.overlap_cap)?;
        trail.overlap = Some(ov.count);
        trail.overlap_edges = Some(ov.edge_length().unwrap_or(OverlapCount::Finite(0)));
        trail.threshold = Some(threshold);
        if !ov.edge_length().is_some_and(|e| e.at_least(threshold)) {
            return Ok(Some(Check::Overlap));
        }
        let bound = self.k_bound.unwrap_or_else(|| default_k_bound(w));
        let k = match find_k(w, a, bound) {
            Ok(k) => k,
            Err(AxisError::WitnessNotFound { .. }) => {
                trail.subgraph = Some(false);
                return Ok(Some(Check::Witness));
            }
            Err(e) => return Err(e.into()),
        };
        trail.k = Some(k);
        trail.subgraph = Some(true);
        let cut_free_w = !WhiteheadGraph::build(w).has_cut_vertex();
        trail.cut_free_w = Some(cut_free_w);
        if !cut_free_w {
            return Ok(Some(Check::CutFreePivot));
        }
        let cut_free_ak = !WhiteheadGraph::build(&a.pow(k)).has_cut_vertex();
        trail.cut_free_ak = Some(cut_free_ak);
        if !cut_free_ak {
            return Ok(Some(Check::CutFreePower));
        }
        Ok(None)
    }

    /// The overlap rule with an arbitrary pivot `w`.
    pub fn via_theorem(&self, w: &Word, a: &Word) -> Result<Certificate, CertifyError> {
        Certifier::check_rank(w)?;
        if w.rank() != a.rank() {
            return Err(WordError::RankMismatch {
                left: w.rank(),
                right: a.rank(),
            }
            .into());
        }
        if w.is_empty() {
            return Err(CertifyError::Trivial("pivot"));
        }
        if a.is_empty() {
            return Err(CertifyError::Trivial("subject"));
        }
        let mut cert = Certificate::new(a, Rule::TheoremOverlap);
        cert.trail.w = Some(w.clone());

        match self.oracle.is_simple(w) {
            Err(OracleError::Undecided { .. }) => return Ok(cert.undecided(Check::PivotNonSimple)),
            Ok(simple) => {
                cert.trail.non_simple_w = Some(!simple);
                if simple {
                    return Ok(cert.fail(Check::PivotNonSimple));
                }
            }
        }

        let minimal = w.is_cyclically_reduced() && is_whitehead_minimal(&CyclicWord::of(w));
        cert.trail.minimal = Some(minimal);
        if !minimal {
            return Ok(cert.fail(Check::PivotMinimal));
        }

        Ok(match self.replay(&mut cert.trail, w, a)? {
            Some(check) => cert.fail(check),
            None => cert,
        })
    }

    fn via_subword(&self, a: &Word, pivot: Word, rule: Rule) -> Result<Certificate, CertifyError> {
        if a.is_empty() {
            return Err(CertifyError::Trivial("subject"));
        }
        if a.rank() != pivot.rank() {
            return Err(WordError::RankMismatch {
                left: pivot.rank(),
                right: a.rank(),
            }
            .into());
        }
        let core = CyclicWord::new(a.clone()).ok_or_else(|| CertifyError::NotCyclicallyReduced(a.clone()))?;
        let pattern = append_x1(&pivot);
        let mut cert = Certificate::new(a, rule);
        cert.trail.w = Some(pivot.clone());

        let Some(offset) = core.find_cyclic_subword(&pattern) else {
            return Ok(cert.fail(Check::Subword));
        };
        let rotated = core.rotate(offset).into_word();
        let linear = offset + pattern.len() <= a.len();
        cert.trail.decomposition = Some(Decomposition {
            pattern,
            offset,
            a_prime: linear.then(|| a.prefix(offset)),
            a_double_prime: linear.then(|| {
                Word::reduce(a.letters()[offset + pivot.len() + 1..].iter().copied(), a.rank()).expect("in rank")
            }),
            rotated: rotated.clone(),
        });

        let minimal = is_whitehead_minimal(&CyclicWord::of(&pivot));
        cert.trail.minimal = Some(minimal);
        if !minimal {
            return Ok(cert.fail(Check::PivotMinimal));
        }
        Ok(match self.replay(&mut cert.trail, &pivot, &rotated)? {
            Some(check) => cert.fail(check),
            None => cert,
        })
    }

    /// Subject contains `x1² ... xr² x1` cyclically.
    pub fn squares_subword(&self, a: &Word) -> Result<Certificate, CertifyError> {
        Certifier::check_rank(a)?;
        self.via_subword(a, squares_word(a.rank())?, Rule::CorSquares)
    }

    /// Subject contains `[x1, x2] ... [x(2n-1), x(2n)] x1` cyclically.
    pub fn commutator_subword(&self, a: &Word) -> Result<Certificate, CertifyError> {
        Certifier::check_rank(a)?;
        self.via_subword(a, commutator_word(a.rank())?, Rule::CorCommutators)
    }

    /// Direct decision by the orbit-search oracle.
    pub fn via_oracle(&self, a: &Word) -> Certificate {
        let mut cert = Certificate::new(a, Rule::Oracle);
        match self.oracle.is_simple(a) {
            Ok(simple) => {
                cert.trail.oracle_simple = Some(simple);
                if simple {
                    cert.fail(Check::OracleNonSimple)
                } else {
                    cert
                }
            }
            Err(_) => cert.undecided(Check::OracleNonSimple),
        }
    }

    /// Tries the subword rules on the cyclic core of `a`, then the overlap
    /// rule on the core with the builtin pivots `x1² ... xr²` and (even rank) the
    /// commutator word. Returns the first certificate, or else the last
    /// failure; an undecided pivot makes the overall answer undecided.
    pub fn auto(&self, a: &Word) -> Result<Certificate, CertifyError> {
        Certifier::check_rank(a)?;
        if a.is_empty() {
            return Err(CertifyError::Trivial("subject"));
        }
        let core = CyclicWord::of(a).into_word();
        let mut attempts = vec![self.squares_subword(&core)?];
        if a.rank().is_multiple_of(2) {
            attempts.push(self.commutator_subword(&core)?);
        }
        let mut pivots = vec![squares_word(a.rank())?];
        if a.rank().is_multiple_of(2) {
            pivots.push(commutator_word(a.rank())?);
        }
        for p in &pivots {
            if attempts.iter().any(Certificate::is_certified) {
                break;
            }
            attempts.push(self.via_theorem(p, &core)?);
        }
        let mut attempts: Vec<Certificate> = attempts
            .into_iter()
            .map(|mut c| {
                c.subject = a.clone();
                c
            })
            .collect();
        if let Some(i) = attempts.iter().position(Certificate::is_certified) {
            return Ok(attempts.swap_remove(i));
        }
        if let Some(i) = attempts.iter().position(|c| c.verdict == Verdict::Undecided) {
            return Ok(attempts.swap_remove(i));
        }
        Ok(attempts.pop().expect("at least one attempt"))
    }
}

/// One named pass/fail line of a regression report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
    pub skipped: Vec<String>,
}

impl Report {
    fn push(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(CheckOutcome {
            name: name.into(),
            passed,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.skipped.extend(other.skipped);
    }
}

fn oracle_non_simple(oracle: &SimplicityOracle, w: &Word) -> bool {
    matches!(oracle.is_simple(w), Ok(false))
}

/// The endomorphisms `φ1: x1 ↦ u1⁻¹, x2 ↦ u1², xj ↦ 1` and
/// `φ2: xi ↦ u2` fix `u1 = x1²...xr² x1` and `u2 = [x1,x2]...[..] x1`
/// without being automorphisms, while `u1`, `u2` are not simple.
pub fn verify_endomorphism_examples(rank: usize, oracle: &SimplicityOracle) -> Result<Report, CertifyError> {
    let mut report = Report::default();
    let u1 = append_x1(&squares_word(rank)?);
    let mut images = vec![u1.inverse(), u1.pow(2)];
    images.extend((3..=rank).map(|_| Word::identity(rank).expect("rank ok")));
    let phi1 = GeneratorMap::new(rank, images).expect("rank ok");
    report.push(
        format!("r{rank}.phi1_fixes_u1"),
        phi1.apply(&u1).is_ok_and(|img| img == u1),
    );
    report.push(
        format!("r{rank}.phi1_abelian_det_zero"),
        phi1.abelian_matrix().determinant() == 0,
    );
    report.push(
        format!("r{rank}.phi1_not_automorphism"),
        !phi1.is_possibly_automorphism(),
    );
    report.push(format!("r{rank}.u1_non_simple"), oracle_non_simple(oracle, &u1));

    match commutator_word(rank) {
        Ok(c) => {
            let u2 = append_x1(&c);
            let phi2 = GeneratorMap::new(rank, vec![u2.clone(); rank]).expect("rank ok");
            report.push(
                format!("r{rank}.phi2_fixes_u2"),
                phi2.apply(&u2).is_ok_and(|img| img == u2),
            );
            report.push(
                format!("r{rank}.phi2_abelian_det_zero"),
                phi2.abelian_matrix().determinant() == 0,
            );
            report.push(
                format!("r{rank}.phi2_not_automorphism"),
                !phi2.is_possibly_automorphism(),
            );
            report.push(format!("r{rank}.u2_non_simple"), oracle_non_simple(oracle, &u2));
        }
        Err(CertifyError::OddRank(_)) => report
            .skipped
            .push(format!("r{rank}: commutator endomorphism example needs even rank")),
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// Minimality of `x1² ... xr²` and of the commutator word, checked by
/// exhausting Whitehead moves, together with their abelian images and the
/// absence of cut vertices in their Whitehead graphs.
pub fn verify_minimal_words(rank: usize) -> Result<Report, CertifyError> {
    let mut report = Report::default();
    let u = squares_word(rank)?;
    let cu = CyclicWord::of(&u);
    report.push(format!("r{rank}.u_minimal"), is_whitehead_minimal(&cu));
    report.push(
        format!("r{rank}.u_length_preserved"),
        crate::autos::whitehead_minimize(&cu).0.len() == 2 * rank,
    );
    report.push(
        format!("r{rank}.u_square_times_commutator"),
        u.in_square_times_commutator(),
    );
    report.push(
        format!("r{rank}.u_cut_free"),
        !WhiteheadGraph::build(&u).has_cut_vertex(),
    );

    match commutator_word(rank) {
        Ok(c) => {
            let cc = CyclicWord::of(&c);
            report.push(format!("r{rank}.w_comm_minimal"), is_whitehead_minimal(&cc));
            report.push(
                format!("r{rank}.w_comm_length_preserved"),
                crate::autos::whitehead_minimize(&cc).0.len() == 2 * rank,
            );
            report.push(
                format!("r{rank}.w_comm_in_commutator_subgroup"),
                c.in_commutator_subgroup(),
            );
            report.push(
                format!("r{rank}.w_comm_cut_free"),
                !WhiteheadGraph::build(&c).has_cut_vertex(),
            );
        }
        Err(CertifyError::OddRank(_)) => report
            .skipped
            .push(format!("r{rank}: commutator minimality needs even rank")),
        Err(e) => return Err(e),
    }
    Ok(report)
}
