//! Freely reduced words in the group generators.

use std::fmt;

use crate::error::Result;
use crate::matrix::Matrix;

/// A word in the generators, stored as non-zero signed 1-based letters:
/// +k is generator k, -k its inverse. The letter list is kept freely
/// reduced at all times.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Appends a letter, cancelling against the current tail.
    pub fn push(&mut self, letter: i32) {
        debug_assert!(letter != 0);
        if self.letters.last() == Some(&-letter) {
            self.letters.pop();
        } else {
            self.letters.push(letter);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Evaluates the word at concrete matrices; `invs` are the precomputed
    /// generator inverses.
    pub fn evaluate(&self, gens: &[Matrix], invs: &[Matrix], identity: &Matrix) -> Result<Matrix> {
        let mut acc = identity.clone();
        for &l in &self.letters {
            let m = if l > 0 {
                &gens[(l - 1) as usize]
            } else {
                &invs[(-l - 1) as usize]
            };
            acc = acc.mul(m)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if l > 0 {
                write!(f, "x{}", l)?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}
