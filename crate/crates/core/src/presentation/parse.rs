//! Text format for group presentations.
//!
//! ```text
//! presentation := gen_list "|" relator_list?
//! gen_list     := name ("," name)*
//! relator_list := word ("," word)*
//! word         := atom+
//! atom         := name ("^" int)? | Name ("^" int)?
//! ```
//!
//! Names are `[a-z][a-z0-9_]*`; a leading uppercase letter denotes the inverse
//! of the corresponding lowercase generator. Inside relators a run of name
//! characters is split greedily into the longest declared generator names, so
//! `aBa` reads as `a b⁻¹ a` when `a` and `b` are declared. An exponent binds to
//! the last generator of its run. A bare `1` stands for the identity.

use super::{Presentation, Word};
use crate::error::{Error, Result};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn name_run(&mut self) -> &'a str {
        let start = self.pos;
        self.bump();
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            self.bump();
        }
        &self.text[start..self.pos]
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(None);
        }
        let caret = self.pos;
        self.bump();
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits {
            return self.syntax("expected an integer exponent");
        }
        let value: i64 = self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "exponent out of range".into() })?;
        if value == 0 {
            return Err(Error::ZeroExponent { pos: caret });
        }
        Ok(Some(value))
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut cur = Cursor { text, pos: 0 };
    let mut names: Vec<String> = Vec::new();
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                let name = cur.name_run().to_string();
                if names.contains(&name) {
                    return Err(Error::DuplicateGenerator(name));
                }
                names.push(name);
            }
            _ => return cur.syntax("expected a generator name"),
        }
        cur.skip_ws();
        let here = cur.pos;
        match cur.bump() {
            Some(',') => continue,
            Some('|') => break,
            Some(_) => {
                cur.pos = here;
                return cur.syntax("expected `,` or `|`");
            }
            None => return cur.syntax("expected `|` after the generator list"),
        }
    }

    let mut relators = Vec::new();
    cur.skip_ws();
    if cur.peek().is_some() {
        loop {
            relators.push(parse_word(&mut cur, &names)?);
            cur.skip_ws();
            let here = cur.pos;
            match cur.bump() {
                Some(',') => continue,
                None => break,
                Some(_) => {
                    cur.pos = here;
                    return cur.syntax("expected `,` or end of input");
                }
            }
        }
    }
    Presentation::new(names, relators)
}

/// Parses a single word over the given generator names, e.g. `a^2 B a`.
pub fn parse_word_with(text: &str, names: &[String]) -> Result<Word> {
    let mut cur = Cursor { text, pos: 0 };
    let w = parse_word(&mut cur, names)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return cur.syntax("trailing input after word");
    }
    Ok(w)
}

fn parse_word(cur: &mut Cursor<'_>, names: &[String]) -> Result<Word> {
    let mut letters: Vec<i32> = Vec::new();
    let mut atoms = 0usize;
    loop {
        cur.skip_ws();
        let start = cur.pos;
        let Some(c) = cur.peek() else { break };
        if c == '1' {
            // identity, as printed for relators that reduce to the empty word
            cur.bump();
            atoms += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            break;
        }
        let inverse = c.is_ascii_uppercase();
        let run = cur.name_run();
        let mut lowered = run.to_string();
        if inverse {
            lowered.replace_range(0..1, &c.to_ascii_lowercase().to_string());
        }
        let mut split = split_run(&lowered, names, start)?;
        if inverse {
            split[0] = -split[0];
        }
        if let Some(k) = cur.exponent()? {
            let last = split.pop().expect("run is nonempty");
            let unit = if k < 0 { -last } else { last };
            split.extend(std::iter::repeat_n(unit, k.unsigned_abs() as usize));
        }
        letters.extend(split);
        atoms += 1;
    }
    if atoms == 0 {
        return cur.syntax("expected a relator word");
    }
    Ok(Word::new(letters))
}

fn split_run(run: &str, names: &[String], offset: usize) -> Result<Vec<i32>> {
    let mut out = Vec::new();
    let mut p = 0;
    while p < run.len() {
        let rest = &run[p..];
        let best = names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len());
        match best {
            Some((i, n)) => {
                out.push(i as i32 + 1);
                p += n.len();
            }
            None => {
                let end = rest
                    .find(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'))
                    .unwrap_or(rest.len());
                return Err(Error::UnknownGenerator {
                    pos: offset + p,
                    name: rest[..end].to_string(),
                });
            }
        }
    }
    Ok(out)
}
