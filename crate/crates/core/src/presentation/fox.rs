use std::collections::BTreeMap;

use super::{word_multiply, Word};
use crate::error::{Error, Result};

/// Element of the integral group ring ℤ[F] of a free group.
///
/// Terms are kept merged by reduced word, sorted, with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, Word::identity())
    }

    pub fn monomial(coeff: i64, w: Word) -> Self {
        let mut out = Self::zero();
        out.add_term(coeff, w);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Word)>) -> Self {
        let mut out = Self::zero();
        for (c, w) in terms {
            out.add_term(c, w);
        }
        out
    }

    pub fn add_term(&mut self, coeff: i64, w: Word) {
        if coeff == 0 {
            return;
        }
        let w = w.reduce();
        let c = self.terms.get(&w).copied().unwrap_or(0) + coeff;
        if c == 0 {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Word)> {
        self.terms.iter().map(|(w, c)| (*c, w))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients (the augmentation ℤ[F] → ℤ).
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, w) in other.terms() {
            out.add_term(c, w.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (c1, w1) in self.terms() {
            for (c2, w2) in other.terms() {
                out.add_term(c1 * c2, word_multiply(w1, w2));
            }
        }
        out
    }

    /// Left multiplication by a group element.
    pub fn left_mul_word(&self, u: &Word) -> Self {
        Self::from_terms(self.terms().map(|(c, w)| (c, word_multiply(u, w))))
    }
}

/// Fox derivative `∂w/∂γᵢ` for a generator index `i` in `1..=n`.
///
/// Walks the word once: a letter `γᵢ` after prefix `p` contributes `+p`, a letter
/// `γᵢ⁻¹` contributes `−p·γᵢ⁻¹`.
pub fn fox_derivative(w: &Word, i: usize, n: usize) -> Result<GroupRingElement> {
    if i == 0 || i > n {
        return Err(Error::GeneratorIndex { index: i as i64, count: n });
    }
    if w.max_generator() > n {
        return Err(Error::GeneratorIndex { index: w.max_generator() as i64, count: n });
    }
    let target = i as i32;
    let mut out = GroupRingElement::zero();
    let mut prefix: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w.reduce().letters() {
        if x == target {
            out.add_term(1, Word::new(prefix.iter().copied()));
        }
        prefix.push(x);
        if x == -target {
            out.add_term(-1, Word::new(prefix.iter().copied()));
        }
    }
    Ok(out)
}
