//! Freely reduced words over a signed alphabet.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

/// A generator `a_i` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub index: u16,
    pub sign: Sign,
}

impl Letter {
    pub const fn pos(index: u16) -> Self {
        Letter { index, sign: Sign::Pos }
    }

    pub const fn neg(index: u16) -> Self {
        Letter { index, sign: Sign::Neg }
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            sign: match self.sign {
                Sign::Pos => Sign::Neg,
                Sign::Neg => Sign::Pos,
            },
        }
    }

    pub fn is_pos(self) -> bool {
        self.sign == Sign::Pos
    }

    pub fn idx(self) -> usize {
        self.index as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purity {
    Empty,
    PurePositive,
    PureNegative,
    Mixed,
}

/// A reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, freely reducing the input.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Wraps letters known to be reduced. Pure words always are.
    pub fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0].inverse() != p[1]));
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Appends a letter with free reduction.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn extend_reduced(&mut self, other: &Word) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        concat(self, other)
    }

    pub fn inverse(&self) -> Word {
        invert(self)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn purity(&self) -> Purity {
        purity(self)
    }

    pub fn is_pure_positive(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|l| l.is_pos())
    }

    pub fn is_pure_negative(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|l| !l.is_pos())
    }

    /// Renders with letter names; the empty word is `1`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names, compact: false }
    }

    /// Renders without separators when every name is one character; `e` for the empty word.
    pub fn display_compact<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names, compact: true }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
    compact: bool,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str(if self.compact { "e" } else { "1" });
        }
        let tight = self.compact && self.names.iter().all(|n| n.chars().count() == 1);
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 && !tight {
                f.write_str(" ")?;
            }
            f.write_str(&self.names[l.idx()])?;
            if !l.is_pos() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Free product `u v`.
pub fn concat(u: &Word, v: &Word) -> Word {
    let mut out = Vec::with_capacity(u.len() + v.len());
    out.extend_from_slice(&u.0);
    let mut w = Word(out);
    w.extend_reduced(v);
    w
}

pub fn invert(u: &Word) -> Word {
    Word(u.0.iter().rev().map(|l| l.inverse()).collect())
}

pub fn purity(u: &Word) -> Purity {
    if u.is_empty() {
        Purity::Empty
    } else if u.0.iter().all(|l| l.is_pos()) {
        Purity::PurePositive
    } else if u.0.iter().all(|l| !l.is_pos()) {
        Purity::PureNegative
    } else {
        Purity::Mixed
    }
}

pub fn orientation_changes(u: &Word) -> usize {
    u.0.windows(2).filter(|p| p[0].sign != p[1].sign).count()
}

/// Returns `(core, conjugator)` with `u = conjugator · core · conjugator⁻¹`.
pub fn cyclic_reduce(u: &Word) -> (Word, Word) {
    let l = &u.0;
    let mut i = 0;
    while l.len() >= 2 * (i + 1) && l[i] == l[l.len() - 1 - i].inverse() {
        i += 1;
    }
    (Word(l[i..l.len() - i].to_vec()), Word(l[..i].to_vec()))
}

/// Parses whitespace separated tokens `x` or `x^-1`; `1` stands for the empty word.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, Error> {
    let mut w = Word::empty();
    for tok in text.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (name, sign) = match tok.strip_suffix("^-1") {
            Some(n) => (n, Sign::Neg),
            None => (tok, Sign::Pos),
        };
        let index = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))?;
        w.push(Letter { index: index as u16, sign });
    }
    Ok(w)
}
