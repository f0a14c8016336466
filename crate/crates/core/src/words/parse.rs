//! Text syntax for words.
//!
//! Two forms are accepted and told apart automatically:
//!
//! * compact: `a`..`z` are `x1`..`x26`, `A`..`Z` their inverses (`aabbA`);
//! * verbose: whitespace-separated `x<k>` or `x<k>^-1` tokens (`x1 x2^-1`).
//!
//! `1`, `ε` and the empty string denote the identity. Unless a rank is
//! supplied, the rank is the largest generator index used (at least 1).

use thiserror::Error;

use super::{Letter, Word, WordError, MAX_RANK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// `position` is a 0-based character offset into the input.
    #[error("parse error at column {}: {message}", position + 1)]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        position,
        message: message.into(),
    }
}

pub fn parse_word(text: &str, rank: Option<usize>) -> Result<Word, ParseError> {
    let trimmed = text.trim();
    let letters = if trimmed.is_empty() || trimmed == "1" || trimmed == "ε" {
        Vec::new()
    } else if trimmed.chars().any(|c| c.is_ascii_digit()) {
        parse_verbose(text)?
    } else {
        parse_compact(text)?
    };

    let used = letters.iter().map(|(_, l)| l.generator()).max().unwrap_or(1);
    let rank = rank.unwrap_or(used);
    if let Some((pos, l)) = letters.iter().find(|(_, l)| l.generator() > rank) {
        return Err(syntax(
            *pos,
            format!("generator x{} exceeds rank {rank}", l.generator()),
        ));
    }
    Ok(Word::reduce(letters.into_iter().map(|(_, l)| l), rank)?)
}

fn parse_compact(text: &str) -> Result<Vec<(usize, Letter)>, ParseError> {
    text.chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(pos, c)| {
            if !c.is_ascii_alphabetic() {
                return Err(syntax(pos, format!("unexpected {c:?}; letters are a-z and A-Z")));
            }
            let index = (c.to_ascii_lowercase() as u8 - b'a') as usize + 1;
            Ok((pos, Letter::new(index, c.is_ascii_uppercase())))
        })
        .collect()
}

fn parse_verbose(text: &str) -> Result<Vec<(usize, Letter)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if chars[i] != 'x' {
            return Err(syntax(i, format!("expected 'x', found {:?}", chars[i])));
        }
        i += 1;
        let digits_start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return Err(syntax(i, "expected generator index after 'x'"));
        }
        let digits: String = chars[digits_start..i].iter().collect();
        let index: usize = digits
            .parse()
            .ok()
            .filter(|&k| (1..=MAX_RANK).contains(&k))
            .ok_or_else(|| syntax(digits_start, format!("generator index {digits} out of range")))?;
        let mut inverted = false;
        if i < chars.len() && chars[i] == '^' {
            let tail: String = chars[i..].iter().take(3).collect();
            if tail != "^-1" {
                return Err(syntax(i, "only the exponent ^-1 is supported"));
            }
            inverted = true;
            i += 3;
        }
        if i < chars.len() && !chars[i].is_whitespace() {
            return Err(syntax(i, format!("unexpected {:?}", chars[i])));
        }
        out.push((start, Letter::new(index, inverted)));
    }
    Ok(out)
}
