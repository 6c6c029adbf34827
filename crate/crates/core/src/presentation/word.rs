use std::fmt;

use serde::{Deserialize, Serialize};

/// An element of the free group on generators `1..=n`, stored as signed letters.
///
/// A positive letter `i` is the generator `γᵢ`, a negative letter `-i` its inverse.
/// Constructors that go through [`Word::new`] always produce the freely reduced form.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<i32>);

impl Word {
    /// Builds the freely reduced word equal to `letters`. Zero letters are dropped.
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut buf: Vec<i32> = Vec::new();
        for x in letters {
            if x == 0 {
                continue;
            }
            if buf.last() == Some(&-x) {
                buf.pop();
            } else {
                buf.push(x);
            }
        }
        Word(buf)
    }

    /// Wraps letters without reducing them.
    pub fn from_raw(letters: Vec<i32>) -> Self {
        Word(letters)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![i as i32])
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

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1]) && !self.0.contains(&0)
    }

    pub fn reduce(&self) -> Word {
        free_reduce(self)
    }

    pub fn inverse(&self) -> Word {
        word_inverse(self)
    }

    /// Largest absolute generator index, 0 for the empty word.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Exponent sum of every generator `1..=n`.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut sums = vec![0i64; n];
        for &x in &self.0 {
            let i = x.unsigned_abs() as usize;
            if (1..=n).contains(&i) {
                sums[i - 1] += x.signum() as i64;
            }
        }
        sums
    }

    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = word_multiply(&out, &base);
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

pub fn free_reduce(w: &Word) -> Word {
    Word::new(w.0.iter().copied())
}

pub fn word_multiply(u: &Word, v: &Word) -> Word {
    Word::new(u.0.iter().chain(v.0.iter()).copied())
}

pub fn word_inverse(u: &Word) -> Word {
    Word(u.0.iter().rev().map(|x| -x).collect())
}
