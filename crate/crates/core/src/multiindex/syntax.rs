//! Text syntax: words are decimal letters separated by whitespace or commas,
//! `e` is the empty word; tails are written `u;v` for `u · v^∞`.

use super::tail::TailSpec;
use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// Splits on whitespace and commas, yielding 1-based columns.
pub(crate) fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        let sep = ch.is_whitespace() || ch == ',';
        match (sep, start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

pub(crate) fn parse_letter(tok: &str, column: usize, d: Option<usize>) -> Result<Letter> {
    let value: usize = tok.parse().map_err(|_| Error::Parse {
        column,
        message: format!("expected a letter, found {tok:?}"),
    })?;
    let max = d.unwrap_or(Letter::MAX as usize);
    if value == 0 || value > max {
        return Err(Error::Parse {
            column,
            message: format!("letter {value} out of range 1..={max}"),
        });
    }
    Ok(value as Letter)
}

pub fn parse_word(text: &str, d: Option<usize>) -> Result<Word> {
    parse_word_at(text, d, 0)
}

fn parse_word_at(text: &str, d: Option<usize>, offset: usize) -> Result<Word> {
    let toks = tokens(text);
    if toks.len() == 1 && toks[0].1 == "e" {
        return Ok(Word::empty());
    }
    let letters = toks
        .into_iter()
        .map(|(col, tok)| parse_letter(tok, col + offset, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Word::from_letters(letters))
}

pub fn parse_tail(text: &str, d: Option<usize>) -> Result<TailSpec> {
    let Some(split) = text.find(';') else {
        return Err(Error::Parse {
            column: text.len() + 1,
            message: "expected `prefix;period`".into(),
        });
    };
    let prefix = parse_word_at(&text[..split], d, 0)?;
    let period = parse_word_at(&text[split + 1..], d, split + 1)?;
    if period.is_empty() {
        return Err(Error::Parse {
            column: split + 2,
            message: "period must be nonempty".into(),
        });
    }
    TailSpec::new(prefix, period)
}
