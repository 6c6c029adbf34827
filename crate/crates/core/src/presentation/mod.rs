//! Finitely presented groups: free-group words, Fox calculus, abelianization,
//! and ball enumeration against a reference representation.

mod abelian;
mod ball;
mod fox;
mod parse;
mod word;

use std::fmt;

pub use abelian::{abelianization, exponent_sum_matrix, smith_normal_form, AbelianizationResult, SmithForm};
pub use ball::{enumerate_ball, BallElement, DEFAULT_ELEMENT_BUDGET};
pub use fox::{fox_derivative, GroupRingElement};
pub use parse::{parse_presentation, parse_word_with};
pub use word::{free_reduce, word_inverse, word_multiply, Word};

use crate::error::{Error, Result};

/// The Weeks manifold group, as written in the text format.
pub const WEEKS_PRESENTATION: &str = "a,b | a^2 b^2 a^2 B a B, a^2 b^2 A b A b^2";

/// `⟨γ₁,…,γₙ | R₁,…,R_m⟩` with named generators and freely reduced relators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Syntax { pos: 0, msg: "a presentation needs at least one generator".into() });
        }
        for (i, n) in names.iter().enumerate() {
            let mut chars = n.chars();
            let ok = chars.next().is_some_and(|c| c.is_ascii_lowercase())
                && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
            if !ok {
                return Err(Error::Syntax { pos: 0, msg: format!("invalid generator name `{n}`") });
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        let count = names.len();
        for r in &relators {
            if let Some(&x) = r.letters().iter().find(|x| x.unsigned_abs() as usize > count || **x == 0) {
                return Err(Error::GeneratorIndex { index: x as i64, count });
            }
        }
        let relators = relators.iter().map(free_reduce).collect();
        Ok(Presentation { names, relators })
    }

    /// Free group on generators named `a`, `b`, … (or `x1`, `x2`, … past 26).
    pub fn free(n: usize) -> Self {
        let names = (0..n)
            .map(|i| {
                if n <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{}", i + 1)
                }
            })
            .collect();
        Presentation { names, relators: Vec::new() }
    }

    pub fn weeks() -> Self {
        parse_presentation(WEEKS_PRESENTATION).expect("built-in presentation parses")
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    /// Parses a word over this presentation's generators.
    pub fn word(&self, text: &str) -> Result<Word> {
        parse_word_with(text, &self.names)
    }

    /// Renders a word with this presentation's generator names.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let letters = w.letters();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < letters.len() {
            let x = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == x {
                run += 1;
            }
            let name = &self.names[x.unsigned_abs() as usize - 1];
            let atom = if x > 0 {
                name.clone()
            } else {
                let mut up = name.clone();
                up.replace_range(0..1, &name[..1].to_ascii_uppercase());
                up
            };
            if run > 1 {
                parts.push(format!("{atom}^{run}"));
            } else {
                parts.push(atom);
            }
            i += run;
        }
        parts.join(" ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |", self.names.join(","))?;
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        if !rels.is_empty() {
            write!(f, " {}", rels.join(", "))?;
        }
        Ok(())
    }
}
