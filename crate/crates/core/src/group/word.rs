use std::fmt;

use crate::error::{Error, Result};

/// A freely reduced word in a free group. Letter `+i` is the generator
/// `x_i` (1-based) and `-i` its inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReducedWord(Vec<i32>);

/// Appends `x` to a reduced letter stack, cancelling against the top.
#[inline]
fn push_reduced(stack: &mut Vec<i32>, x: i32) {
    if stack.last() == Some(&-x) {
        stack.pop();
    } else {
        stack.push(x);
    }
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord(Vec::new())
    }

    /// Free reduction of an arbitrary letter sequence. Zero letters are rejected.
    pub fn reduce(raw: &[i32]) -> Result<Self> {
        let mut out = Vec::with_capacity(raw.len());
        for &x in raw {
            if x == 0 {
                return Err(Error::GeneratorOutOfRange { index: 0, rank: 0 });
            }
            push_reduced(&mut out, x);
        }
        Ok(ReducedWord(out))
    }

    /// Caller guarantees `letters` is already reduced and nonzero.
    pub(crate) fn from_reduced_unchecked(letters: Vec<i32>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        ReducedWord(letters)
    }

    pub fn generator(i: i32) -> Self {
        assert!(i != 0);
        ReducedWord(vec![i])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        ReducedWord(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let common = self
            .0
            .iter()
            .rev()
            .zip(other.0.iter())
            .take_while(|(x, y)| **x == -**y)
            .count();
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * common);
        out.extend_from_slice(&self.0[..self.len() - common]);
        out.extend_from_slice(&other.0[common..]);
        ReducedWord(out)
    }

    /// Appends letters one at a time with cancellation.
    pub(crate) fn extend_reduced(&mut self, letters: impl IntoIterator<Item = i32>) {
        for x in letters {
            push_reduced(&mut self.0, x);
        }
    }

    /// Largest exponent accepted by [`ReducedWord::power`].
    pub const MAX_EXPONENT: u64 = 1 << 16;

    pub fn power(&self, k: i64) -> Result<Self> {
        if k.unsigned_abs() > Self::MAX_EXPONENT {
            return Err(Error::ResourceCap(format!(
                "power exponent {k} exceeds 2^16"
            )));
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = ReducedWord::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Returns `(core, conjugator)` with `self = conjugator * core * conjugator^-1`
    /// and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Self, Self) {
        let w = &self.0;
        let mut i = 0;
        let mut j = w.len();
        while j >= i + 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        (ReducedWord(w[i..j].to_vec()), ReducedWord(w[..i].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1]
    }

    /// Reads words such as `ab'a`, `abAB` or `1` (identity). Lowercase letters
    /// are generators, uppercase letters and a trailing apostrophe invert.
    pub fn parse(s: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for c in s.chars() {
            match c {
                'a'..='z' => raw.push(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => raw.push(-(c as i32 - 'A' as i32 + 1)),
                '\'' => match raw.last_mut() {
                    Some(x) => *x = -*x,
                    None => return Err(Error::Parse(format!("dangling apostrophe in {s:?}"))),
                },
                '1' | ' ' | '*' | '.' => {}
                _ => return Err(Error::Parse(format!("unexpected character {c:?} in word {s:?}"))),
            }
        }
        Self::reduce(&raw)
    }
}

fn letter_name(x: i32) -> String {
    let i = x.unsigned_abs();
    let base = if i <= 26 {
        char::from(b'a' + (i - 1) as u8).to_string()
    } else {
        format!("x{i}")
    };
    if x < 0 {
        format!("{base}'")
    } else {
        base
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &x in &self.0 {
            f.write_str(&letter_name(x))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
