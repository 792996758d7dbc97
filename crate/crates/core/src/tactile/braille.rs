//! Grade-1 literary braille.
//!
//! Letters follow the standard a–z table. Capitals take the capital
//! indicator (dot 6), and each digit run takes the numeric indicator
//! (dots 3-4-5-6) with digits written as a–j. A letter a–j directly after a
//! digit gets the letter sign (dots 5-6) so it is not read as a digit.
//! Parentheses, `+`, `%` and `/` use their two-cell UEB forms, which keeps
//! the encoding reversible.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrailleError {
    #[error("character {ch:?} at position {pos} has no braille mapping (supported: letters, digits, space and . , : ; ( ) % / + -)")]
    Unsupported { ch: char, pos: usize },
    #[error("braille cell {cell} at index {index} cannot be decoded")]
    Undecodable { cell: BrailleCell, index: usize },
}

/// One 2×3 cell. Bit `d - 1` is set when dot `d` is raised; dots 1-2-3 run
/// down the left column and 4-5-6 down the right. Serializes as the mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct BrailleCell(u8);

impl BrailleCell {
    pub const BLANK: BrailleCell = BrailleCell(0);
    pub const CAPITAL: BrailleCell = BrailleCell::from_dots(&[6]);
    pub const NUMERIC: BrailleCell = BrailleCell::from_dots(&[3, 4, 5, 6]);
    pub const LETTER_SIGN: BrailleCell = BrailleCell::from_dots(&[5, 6]);

    /// Panics (at compile time in const contexts) on dots outside 1..=6.
    pub const fn from_dots(dots: &[u8]) -> BrailleCell {
        let mut mask = 0u8;
        let mut i = 0;
        while i < dots.len() {
            assert!(
                dots[i] >= 1 && dots[i] <= 6,
                "braille dots are numbered 1 to 6"
            );
            mask |= 1 << (dots[i] - 1);
            i += 1;
        }
        BrailleCell(mask)
    }

    pub fn from_mask(mask: u8) -> Option<BrailleCell> {
        (mask < 64).then_some(BrailleCell(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn has(self, dot: u8) -> bool {
        (1..=6).contains(&dot) && self.0 & (1 << (dot - 1)) != 0
    }

    /// Raised dots in ascending order.
    pub fn dots(self) -> Vec<u8> {
        (1..=6).filter(|&d| self.has(d)).collect()
    }

    pub fn is_blank(self) -> bool {
        self.0 == 0
    }

    /// Unicode braille pattern character.
    pub fn to_unicode(self) -> char {
        char::from_u32(0x2800 + self.0 as u32).expect("U+2800..U+283F are valid")
    }

    pub fn from_unicode(c: char) -> Option<BrailleCell> {
        let v = (c as u32).checked_sub(0x2800)?;
        u8::try_from(v).ok().and_then(BrailleCell::from_mask)
    }

    /// Offset of a dot from the cell's top-left dot, in units of the
    /// intra-cell dot pitch: `(column, row)`.
    pub fn dot_offset(dot: u8) -> (u8, u8) {
        ((dot - 1) / 3, (dot - 1) % 3)
    }
}

impl fmt::Display for BrailleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_unicode())
    }
}

const LETTERS: [&[u8]; 26] = [
    &[1],
    &[1, 2],
    &[1, 4],
    &[1, 4, 5],
    &[1, 5],
    &[1, 2, 4],
    &[1, 2, 4, 5],
    &[1, 2, 5],
    &[2, 4],
    &[2, 4, 5],
    &[1, 3],
    &[1, 2, 3],
    &[1, 3, 4],
    &[1, 3, 4, 5],
    &[1, 3, 5],
    &[1, 2, 3, 4],
    &[1, 2, 3, 4, 5],
    &[1, 2, 3, 5],
    &[2, 3, 4],
    &[2, 3, 4, 5],
    &[1, 3, 6],
    &[1, 2, 3, 6],
    &[2, 4, 5, 6],
    &[1, 3, 4, 6],
    &[1, 3, 4, 5, 6],
    &[1, 3, 5, 6],
];

const PUNCTUATION: [(char, &[&[u8]]); 10] = [
    ('.', &[&[2, 5, 6]]),
    (',', &[&[2]]),
    (':', &[&[2, 5]]),
    (';', &[&[2, 3]]),
    ('-', &[&[3, 6]]),
    ('(', &[&[5], &[1, 2, 6]]),
    (')', &[&[5], &[3, 4, 5]]),
    ('+', &[&[5], &[2, 3, 5]]),
    ('%', &[&[4, 6], &[3, 5, 6]]),
    ('/', &[&[4, 5, 6], &[3, 4]]),
];

fn letter(c: char) -> BrailleCell {
    BrailleCell::from_dots(LETTERS[(c as u8 - b'a') as usize])
}

fn digit(c: char) -> BrailleCell {
    // 1..9 are a..i, 0 is j.
    let idx = match c {
        '0' => 9,
        d => (d as u8 - b'1') as usize,
    };
    BrailleCell::from_dots(LETTERS[idx])
}

pub fn is_supported(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == ' ' || PUNCTUATION.iter().any(|(p, _)| *p == c)
}

/// Translates text to Grade-1 braille cells.
pub fn to_braille(text: &str) -> Result<Vec<BrailleCell>, BrailleError> {
    let mut out = Vec::with_capacity(text.len() + 2);
    let mut prev_digit = false;
    for (pos, c) in text.chars().enumerate() {
        match c {
            'a'..='z' | 'A'..='Z' => {
                let lower = c.to_ascii_lowercase();
                if c.is_ascii_uppercase() {
                    out.push(BrailleCell::CAPITAL);
                } else if prev_digit && lower <= 'j' {
                    out.push(BrailleCell::LETTER_SIGN);
                }
                out.push(letter(lower));
                prev_digit = false;
            }
            '0'..='9' => {
                if !prev_digit {
                    out.push(BrailleCell::NUMERIC);
                }
                out.push(digit(c));
                prev_digit = true;
            }
            ' ' => {
                out.push(BrailleCell::BLANK);
                prev_digit = false;
            }
            _ => {
                let (_, cells) = PUNCTUATION
                    .iter()
                    .find(|(p, _)| *p == c)
                    .ok_or(BrailleError::Unsupported { ch: c, pos })?;
                out.extend(cells.iter().map(|d| BrailleCell::from_dots(d)));
                prev_digit = false;
            }
        }
    }
    Ok(out)
}

/// Reverse of [`to_braille`].
pub fn decode(cells: &[BrailleCell]) -> Result<String, BrailleError> {
    let letter_of = |cell: BrailleCell| {
        LETTERS
            .iter()
            .position(|d| BrailleCell::from_dots(d) == cell)
            .map(|i| (b'a' + i as u8) as char)
    };
    let mut out = String::new();
    let mut numeric = false;
    let mut i = 0;
    while i < cells.len() {
        let cell = cells[i];
        let bad = BrailleError::Undecodable { cell, index: i };
        if numeric {
            if let Some(l) = letter_of(cell).filter(|l| *l <= 'j') {
                out.push(if l == 'j' {
                    '0'
                } else {
                    (b'1' + (l as u8 - b'a')) as char
                });
                i += 1;
                continue;
            }
            numeric = false;
        }
        if cell == BrailleCell::NUMERIC {
            numeric = true;
            i += 1;
            continue;
        }
        if cell == BrailleCell::CAPITAL || cell == BrailleCell::LETTER_SIGN {
            let next = cells.get(i + 1).copied().and_then(letter_of).ok_or(bad)?;
            out.push(if cell == BrailleCell::CAPITAL {
                next.to_ascii_uppercase()
            } else {
                next
            });
            i += 2;
            continue;
        }
        if cell.is_blank() {
            out.push(' ');
            i += 1;
            continue;
        }
        if let Some(l) = letter_of(cell) {
            out.push(l);
            i += 1;
            continue;
        }
        let rest = &cells[i..];
        let (p, len) = PUNCTUATION
            .iter()
            .find(|(_, seq)| {
                seq.len() <= rest.len()
                    && seq
                        .iter()
                        .zip(rest)
                        .all(|(d, c)| BrailleCell::from_dots(d) == *c)
            })
            .map(|(p, seq)| (*p, seq.len()))
            .ok_or(bad)?;
        out.push(p);
        i += len;
    }
    Ok(out)
}

/// Unicode rendering of `text`, for previews and logs.
pub fn to_unicode_string(text: &str) -> Result<String, BrailleError> {
    Ok(to_braille(text)?
        .into_iter()
        .map(BrailleCell::to_unicode)
        .collect())
}
