//! Hand-written scanner for the element literal grammars.
//!
//! Every backend parses a signed sum of terms. A term is an optional decimal
//! coefficient followed by an optional basis letter (`i`, `j`, `k`, `s`, or
//! nothing for the constant term). Whitespace is ignored everywhere and both
//! `-` and `\u{2212}` are accepted as minus signs. Positions in errors are
//! character offsets into the original text.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let chars = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Cursor {
            chars,
            idx: 0,
            text,
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    pub(crate) fn pos(&self) -> usize {
        self.chars
            .get(self.idx)
            .map(|&(p, _)| p)
            .unwrap_or_else(|| self.text.chars().count())
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.idx += 1;
        }
        c
    }

    pub(crate) fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.idx >= self.chars.len()
    }

    /// Consumes a sign if present; `None` when no sign character follows.
    pub(crate) fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.idx += 1;
                Some(false)
            }
            Some('-') | Some('\u{2212}') => {
                self.idx += 1;
                Some(true)
            }
            _ => None,
        }
    }

    pub(crate) fn digits(&mut self) -> Option<BigInt> {
        let start = self.idx;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.idx += 1;
        }
        if self.idx == start {
            return None;
        }
        let s: String = self.chars[start..self.idx]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        Some(s.parse().expect("ascii digits parse"))
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.pos(), msg)
    }
}

/// Parses `±c₀ ± c₁e₁ ± …` where each `eᵢ` is one of `letters`; returns one
/// coefficient per slot (slot 0 is the constant term). Repeated letters add.
pub(crate) fn parse_linear(text: &str, letters: &[char]) -> Result<Vec<BigInt>> {
    let mut cur = Cursor::new(text);
    let coeffs = parse_linear_terms(&mut cur, letters, None)?;
    if !cur.at_end() {
        return Err(cur.error(format!("unexpected character '{}'", cur.peek().unwrap())));
    }
    Ok(coeffs)
}

/// Reads terms until the cursor hits `stop` (not consumed) or the end.
pub(crate) fn parse_linear_terms(
    cur: &mut Cursor<'_>,
    letters: &[char],
    stop: Option<char>,
) -> Result<Vec<BigInt>> {
    let mut coeffs = vec![BigInt::zero(); letters.len() + 1];
    if cur.at_end() || cur.peek() == stop {
        return Err(cur.error("empty literal"));
    }
    let mut first = true;
    loop {
        if cur.at_end() || cur.peek() == stop {
            break;
        }
        let negative = match cur.sign() {
            Some(neg) => neg,
            None if first => false,
            None => return Err(cur.error("expected '+' or '-'")),
        };
        first = false;
        let (slot, value) = parse_term_body(cur, letters)?;
        if negative {
            coeffs[slot] -= value;
        } else {
            coeffs[slot] += value;
        }
    }
    Ok(coeffs)
}

fn parse_term_body(cur: &mut Cursor<'_>, letters: &[char]) -> Result<(usize, BigInt)> {
    let start = cur.pos();
    let magnitude = cur.digits();
    let slot = match cur.peek() {
        Some(c) if letters.contains(&c) => {
            cur.bump();
            1 + letters.iter().position(|&l| l == c).unwrap()
        }
        _ => 0,
    };
    match (magnitude, slot) {
        (None, 0) => Err(Error::parse(
            start,
            "expected a coefficient or basis letter",
        )),
        (None, s) => Ok((s, BigInt::one())),
        (Some(m), s) => Ok((s, m)),
    }
}

/// Formats `coeffs` (constant first) against basis `letters` in canonical order.
pub(crate) fn format_linear(coeffs: &[&BigInt], letters: &[char]) -> String {
    let mut out = String::new();
    for (slot, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = c.sign() == num_bigint::Sign::Minus;
        let mag = c.magnitude();
        if negative {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if slot == 0 {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push(letters[slot - 1]);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
