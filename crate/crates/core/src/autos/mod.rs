//! Whitehead automorphisms, endomorphisms given by generator images, cyclic
//! length minimization, and the orbit-search simplicity oracle.
//!
//! Conventions for Whitehead moves:
//!
//! * a *relabeling* permutes the generators and may invert some of them;
//! * a *multiplier* move `(a, A)` with `a ∈ A`, `a⁻¹ ∉ A` fixes `a` and sends
//!   every other generator `x` to `x`, `x a`, `a⁻¹ x` or `a⁻¹ x a` according
//!   to whether `x ∈ A` and/or `x⁻¹ ∈ A`.
//!
//! By Whitehead's peak-reduction theorem, if a cyclic word is not of minimal
//! length in its automorphism orbit then some multiplier move shortens it,
//! and any two minimal words in one orbit are joined by a chain of Whitehead
//! moves through minimal words.

mod oracle;

pub use oracle::{is_simple, is_test_element_for_monos, OracleError, SimplicityOracle, DEFAULT_ORACLE_BUDGET};

use std::fmt;

use thiserror::Error;

use crate::words::{free_reduce, parse_word, peel_len, CyclicWord, Letter, ParseError, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WhiteheadAutomorphism {
    /// `images[i]` is the letter that `x(i+1)` is sent to.
    Relabeling { rank: usize, images: Vec<Letter> },
    /// `subset` holds letters sorted in letter order; it contains
    /// `multiplier` and not its inverse.
    Multiplier {
        rank: usize,
        multiplier: Letter,
        subset: Vec<Letter>,
    },
}

/// Which relabelings [`enumerate_whitehead_autos`] emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relabelings {
    /// Every signed permutation (`r! · 2^r` moves, identity first).
    All,
    /// Adjacent transpositions and the inversion of `x1`.
    Generators,
    None,
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All Whitehead moves of the given rank in a fixed order: relabelings
/// first, then multiplier moves ordered by multiplier letter and then by the
/// subset of the remaining `2r − 2` letters read as a binary number.
pub fn enumerate_whitehead_autos(rank: usize, relabelings: Relabelings) -> Vec<WhiteheadAutomorphism> {
    let mut out = Vec::new();
    match relabelings {
        Relabelings::All => {
            let mut perm: Vec<usize> = (1..=rank).collect();
            loop {
                for flags in 0u64..(1u64 << rank) {
                    let images = perm
                        .iter()
                        .enumerate()
                        .map(|(i, &g)| Letter::new(g, flags >> i & 1 == 1))
                        .collect();
                    out.push(WhiteheadAutomorphism::Relabeling { rank, images });
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        Relabelings::Generators => {
            let identity: Vec<Letter> = (1..=rank).map(Letter::gen).collect();
            for i in 0..rank.saturating_sub(1) {
                let mut images = identity.clone();
                images.swap(i, i + 1);
                out.push(WhiteheadAutomorphism::Relabeling { rank, images });
            }
            let mut images = identity;
            images[0] = Letter::inv(1);
            out.push(WhiteheadAutomorphism::Relabeling { rank, images });
        }
        Relabelings::None => {}
    }
    out.extend(multiplier_moves(rank));
    out
}

fn multiplier_moves(rank: usize) -> impl Iterator<Item = WhiteheadAutomorphism> {
    Letter::all(rank).flat_map(move |a| {
        let others: Vec<Letter> = Letter::all(rank).filter(|l| l.generator() != a.generator()).collect();
        (0u64..(1u64 << others.len())).map(move |mask| {
            let mut subset: Vec<Letter> = others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &l)| l)
                .chain(std::iter::once(a))
                .collect();
            subset.sort();
            WhiteheadAutomorphism::Multiplier {
                rank,
                multiplier: a,
                subset,
            }
        })
    })
}

impl WhiteheadAutomorphism {
    pub fn rank(&self) -> usize {
        match self {
            WhiteheadAutomorphism::Relabeling { rank, .. } | WhiteheadAutomorphism::Multiplier { rank, .. } => *rank,
        }
    }

    /// Image of the positive generator `x(g)` as a letter sequence.
    fn generator_image(&self, g: usize) -> Vec<Letter> {
        match self {
            WhiteheadAutomorphism::Relabeling { images, .. } => vec![images[g - 1]],
            WhiteheadAutomorphism::Multiplier {
                multiplier: a, subset, ..
            } => {
                let x = Letter::gen(g);
                if g == a.generator() {
                    return vec![x];
                }
                let mut img = Vec::with_capacity(3);
                if subset.binary_search(&x.inverse()).is_ok() {
                    img.push(a.inverse());
                }
                img.push(x);
                if subset.binary_search(&x).is_ok() {
                    img.push(*a);
                }
                img
            }
        }
    }

    /// Images of all `2r` letters, indexed by [`Letter::code`].
    pub fn letter_images(&self) -> Vec<Vec<Letter>> {
        Letter::all(self.rank())
            .map(|l| {
                let img = self.generator_image(l.generator());
                if l.is_inverted() {
                    img.iter().rev().map(|x| x.inverse()).collect()
                } else {
                    img
                }
            })
            .collect()
    }

    pub fn to_generator_map(&self) -> GeneratorMap {
        let rank = self.rank();
        let images = (1..=rank)
            .map(|g| Word::reduce(self.generator_image(g), rank).expect("move images stay in rank"))
            .collect();
        GeneratorMap { rank, images }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, AutoError> {
        self.to_generator_map().apply(w)
    }

    /// Image of a cyclic word, cyclically reduced.
    pub fn apply_cyclic(&self, w: &CyclicWord) -> CyclicWord {
        assert_eq!(self.rank(), w.rank(), "rank mismatch");
        let table = self.letter_images();
        let core = image_core(&table, w.letters());
        CyclicWord::new(Word::from_reduced_unchecked(core, w.rank())).expect("trimmed core")
    }

    pub fn inverse(&self) -> WhiteheadAutomorphism {
        match self {
            WhiteheadAutomorphism::Relabeling { rank, images } => {
                let mut inv = vec![Letter::gen(1); *rank];
                for (i, img) in images.iter().enumerate() {
                    inv[img.generator() - 1] = Letter::new(i + 1, img.is_inverted());
                }
                WhiteheadAutomorphism::Relabeling {
                    rank: *rank,
                    images: inv,
                }
            }
            WhiteheadAutomorphism::Multiplier {
                rank,
                multiplier,
                subset,
            } => {
                let mut s: Vec<Letter> = subset
                    .iter()
                    .map(|&l| if l == *multiplier { l.inverse() } else { l })
                    .collect();
                s.sort();
                WhiteheadAutomorphism::Multiplier {
                    rank: *rank,
                    multiplier: multiplier.inverse(),
                    subset: s,
                }
            }
        }
    }
}

impl fmt::Display for WhiteheadAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadAutomorphism::Relabeling { images, .. } => {
                let parts: Vec<String> = images.iter().map(|l| format!("{l:?}")).collect();
                write!(f, "relabel[{}]", parts.join(", "))
            }
            WhiteheadAutomorphism::Multiplier { multiplier, subset, .. } => {
                let parts: Vec<String> = subset.iter().map(|l| l.vertex_name()).collect();
                write!(f, "mult({}; {{{}}})", multiplier.vertex_name(), parts.join(", "))
            }
        }
    }
}

/// Substitutes through a letter table, freely reduces, and trims to the
/// cyclically reduced core.
pub(crate) fn image_core(table: &[Vec<Letter>], letters: &[Letter]) -> Vec<Letter> {
    let mut reduced = free_reduce(letters.iter().flat_map(|l| table[l.code()].iter().copied()));
    let p = peel_len(&reduced);
    if p > 0 {
        reduced.drain(reduced.len() - p..);
        reduced.drain(..p);
    }
    reduced
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutoError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("generator map must have {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    MapSyntax { line: usize, message: String },
}

/// An endomorphism given by the images of `x1, ..., xr`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    rank: usize,
    images: Vec<Word>,
}

impl GeneratorMap {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<GeneratorMap, AutoError> {
        Word::identity(rank)?;
        if images.len() != rank {
            return Err(AutoError::ImageCount {
                expected: rank,
                got: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|w| w.rank() != rank) {
            return Err(WordError::RankMismatch {
                left: rank,
                right: bad.rank(),
            }
            .into());
        }
        Ok(GeneratorMap { rank, images })
    }

    pub fn identity(rank: usize) -> Result<GeneratorMap, AutoError> {
        let images = (1..=rank).map(|g| Word::generator(g, rank)).collect::<Result<_, _>>()?;
        GeneratorMap::new(rank, images)
    }

    /// Parses lines of the form `x<i> -> <word>`. Blank lines and lines
    /// starting with `#` are skipped; generators without a line map to
    /// themselves.
    pub fn parse(text: &str, rank: usize) -> Result<GeneratorMap, AutoError> {
        let mut images: Vec<Option<Word>> = vec![None; rank];
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| AutoError::MapSyntax { line: n + 1, message };
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| err("expected `x<i> -> <word>`".into()))?;
            let g: usize = lhs
                .trim()
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .filter(|g| (1..=rank).contains(g))
                .ok_or_else(|| err(format!("bad generator {:?}", lhs.trim())))?;
            if images[g - 1].is_some() {
                return Err(err(format!("x{g} given twice")));
            }
            images[g - 1] = Some(parse_word(rhs, Some(rank))?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.map_or_else(|| Word::generator(i + 1, rank), Ok))
            .collect::<Result<_, _>>()?;
        GeneratorMap::new(rank, images)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word, AutoError> {
        if w.rank() != self.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: w.rank(),
            }
            .into());
        }
        let inverses: Vec<Word> = self.images.iter().map(Word::inverse).collect();
        let raw = w.letters().iter().flat_map(|l| {
            let img = if l.is_inverted() {
                &inverses[l.generator() - 1]
            } else {
                &self.images[l.generator() - 1]
            };
            img.letters().iter().copied()
        });
        Ok(Word::reduce(raw, self.rank)?)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &GeneratorMap) -> Result<GeneratorMap, AutoError> {
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<_, _>>()?;
        GeneratorMap::new(self.rank, images)
    }

    pub fn abelian_matrix(&self) -> AbelianMatrix {
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.abelianize().0).collect();
        let rows = (0..self.rank).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        AbelianMatrix { rows }
    }

    /// `|det| = 1` on the abelianization, a necessary condition for the map
    /// to be an automorphism.
    pub fn is_possibly_automorphism(&self) -> bool {
        self.abelian_matrix().determinant().abs() == 1
    }
}

/// Integer matrix whose column `i` is the abelianized image of `x(i+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl AbelianMatrix {
    /// Fraction-free (Bareiss) elimination; exact for integer entries.
    pub fn determinant(&self) -> i128 {
        let n = self.rows.len();
        let mut m: Vec<Vec<i128>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&i| m[i][k] != 0) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        if n == 0 {
            1
        } else {
            sign * m[n - 1][n - 1]
        }
    }
}

/// Greedy descent: applies the most-shortening multiplier move (first in
/// enumeration order on ties) until no move shortens the word.
pub fn whitehead_minimize(w: &CyclicWord) -> (CyclicWord, Vec<WhiteheadAutomorphism>) {
    let moves = enumerate_whitehead_autos(w.rank(), Relabelings::None);
    let tables: Vec<Vec<Vec<Letter>>> = moves.iter().map(|m| m.letter_images()).collect();
    let mut current = w.letters().to_vec();
    let mut trail = Vec::new();
    loop {
        let mut best: Option<(usize, Vec<Letter>)> = None;
        for (i, t) in tables.iter().enumerate() {
            let img = image_core(t, &current);
            let bound = best.as_ref().map_or(current.len(), |(_, b)| b.len());
            if img.len() < bound {
                best = Some((i, img));
            }
        }
        match best {
            Some((i, img)) => {
                trail.push(moves[i].clone());
                current = img;
            }
            None => break,
        }
    }
    let core = Word::from_reduced_unchecked(current, w.rank());
    (CyclicWord::new(core).expect("cyclic core"), trail)
}

/// True iff no Whitehead move strictly shortens the cyclic word.
pub fn is_whitehead_minimal(w: &CyclicWord) -> bool {
    multiplier_moves(w.rank()).all(|m| image_core(&m.letter_images(), w.letters()).len() >= w.len())
}
