//! Words over a generating set and finite presentations.
//!
//! A letter is a nonzero `i32`: letter `k > 0` is generator `k-1`, letter
//! `-k` is its inverse. Words are flat letter vectors, kept free-reduced by
//! the operations here. Presentations carry a generator name table and a
//! relator list and round-trip through a small line-based text format:
//!
//! ```text
//! # comment
//! group name
//! gens a,b,c
//! rel (a*b)^3
//! rel a^2
//! ```

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

pub type Letter = i32;
pub type Word = Vec<Letter>;

/// Inverse of a single letter.
#[inline]
pub fn inv_letter(l: Letter) -> Letter {
    -l
}

/// Inverse of a word.
pub fn inv_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

/// Concatenate and free-reduce.
pub fn mul_words(a: &[Letter], b: &[Letter]) -> Word {
    let mut out = a.to_vec();
    for &l in b {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Remove all adjacent inverse pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    mul_words(&[], w)
}

/// Free-reduce, then strip matching inverse prefix/suffix pairs.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut v = free_reduce(w);
    let mut lo = 0;
    let mut hi = v.len();
    while hi - lo >= 2 && v[lo] == -v[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    v.truncate(hi);
    v.drain(..lo);
    v
}

/// Cyclically reduce and pick the friendlier of the word and its inverse:
/// fewer inverse letters, ties broken lexicographically on (base, sign).
/// Orientation-insensitive callers should use [`cyclic_normal_form`].
pub fn normalize_relator(w: &[Letter]) -> Word {
    let c = cyclic_reduce(w);
    let ci = inv_word(&c);
    let score = |v: &[Letter]| -> (usize, Vec<(i32, bool)>) {
        (
            v.iter().filter(|&&l| l < 0).count(),
            v.iter().map(|&l| (l.abs(), l < 0)).collect(),
        )
    };
    if score(&ci) < score(&c) {
        ci
    } else {
        c
    }
}

/// Least rotation of `w` or of its inverse, for cyclic-class deduplication.
pub fn cyclic_normal_form(w: &[Letter]) -> Word {
    let v = cyclic_reduce(w);
    if v.is_empty() {
        return v;
    }
    let mut best: Option<Word> = None;
    for cand in [v.clone(), inv_word(&v)] {
        for i in 0..cand.len() {
            let mut rot = cand[i..].to_vec();
            rot.extend_from_slice(&cand[..i]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: Option<String>,
    pub gens: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(name: Option<&str>, gens: &[&str], relators: Vec<Word>) -> Self {
        Presentation {
            name: name.map(str::to_owned),
            gens: gens.iter().map(|s| s.to_string()).collect(),
            relators,
        }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Index of a named generator.
    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    /// Parse a word like `(a*b)^3*c^-1` against this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let map: HashMap<&str, usize> = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.as_str(), i))
            .collect();
        parse_word_line(text, 0, &map)
    }

    /// Canonical text form; `parse_presentation` round-trips it.
    pub fn print(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str("group ");
            out.push_str(n);
            out.push('\n');
        }
        out.push_str("gens ");
        out.push_str(&self.gens.join(","));
        out.push('\n');
        for r in &self.relators {
            if r.is_empty() {
                continue;
            }
            out.push_str("rel ");
            out.push_str(&print_word(r, &self.gens));
            out.push('\n');
        }
        out
    }
}

/// Print a word with powers condensed, e.g. `a^2*b^-1`.
pub fn print_word(w: &[Letter], gens: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let l = w[i];
        let mut j = i;
        while j < w.len() && w[j] == l {
            j += 1;
        }
        let name = &gens[(l.unsigned_abs() as usize) - 1];
        let e = if l > 0 { (j - i) as i64 } else { -((j - i) as i64) };
        if e == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{}^{}", name, e));
        }
        i = j;
    }
    parts.join("*")
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parse the presentation file format described in the module docs.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut name: Option<String> = None;
    let mut gens: Vec<String> = Vec::new();
    let mut gen_map: HashMap<String, usize> = HashMap::new();
    let mut relators: Vec<Word> = Vec::new();
    let mut seen_gens = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("group ") {
            if name.is_some() {
                return Err(err(lineno, 1, "duplicate group line"));
            }
            let n = rest.trim();
            if !is_ident(n) {
                return Err(err(lineno, 7, format!("bad group name {:?}", n)));
            }
            name = Some(n.to_string());
        } else if let Some(rest) = line.strip_prefix("gens ") {
            for part in rest.split(',') {
                let g = part.trim();
                if !is_ident(g) {
                    return Err(err(lineno, 6, format!("bad generator name {:?}", g)));
                }
                if gen_map.contains_key(g) {
                    return Err(err(lineno, 6, format!("duplicate generator {:?}", g)));
                }
                gen_map.insert(g.to_string(), gens.len());
                gens.push(g.to_string());
            }
            seen_gens = true;
        } else if let Some(rest) = line.strip_prefix("rel ") {
            if !seen_gens {
                return Err(err(lineno, 1, "rel before gens"));
            }
            let map: HashMap<&str, usize> =
                gen_map.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            relators.push(parse_word_line(rest, lineno, &map)?);
        } else {
            return Err(err(lineno, 1, format!("unrecognized line {:?}", line)));
        }
    }
    if !seen_gens {
        return Err(err(text.lines().count().max(1), 1, "missing gens line"));
    }
    Ok(Presentation {
        name,
        gens,
        relators,
    })
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// Recursive-descent word parser: word := factor ('*' factor)*,
// factor := atom ('^' int)?, atom := ident | '(' word ')'.
struct WordParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    gens: &'a HashMap<&'a str, usize>,
}

fn parse_word_line(
    text: &str,
    line: usize,
    gens: &HashMap<&str, usize>,
) -> Result<Word, ParseError> {
    let mut p = WordParser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        gens,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(err(line, p.pos + 1, "trailing input after word"));
    }
    Ok(free_reduce(&w))
}

impl<'a> WordParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut w = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                let f = self.factor()?;
                w.extend_from_slice(&f);
            } else {
                return Ok(w);
            }
        }
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.int()?;
            let core = if e < 0 { inv_word(&base) } else { base };
            let mut out = Vec::with_capacity(core.len() * e.unsigned_abs() as usize);
            for _ in 0..e.unsigned_abs() {
                out.extend_from_slice(&core);
            }
            Ok(out)
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(err(self.line, self.pos + 1, "expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.gens.get(name.as_str()) {
                    Some(&i) => Ok(vec![i as Letter + 1]),
                    None => Err(err(
                        self.line,
                        start + 1,
                        format!("unknown generator {:?}", name),
                    )),
                }
            }
            _ => Err(err(self.line, self.pos + 1, "expected generator or '('")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        let dstart = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == dstart {
            return Err(err(self.line, self.pos + 1, "expected integer exponent"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>()
            .map_err(|_| err(self.line, start + 1, "exponent out of range"))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduce_cancels_pairs() {
        assert_eq!(free_reduce(&[1, -1]), Vec::<Letter>::new());
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(free_reduce(&[1, 2, -1]), vec![1, 2, -1]);
    }

    #[test]
    fn cyclic_reduce_strips_conjugating_ends() {
        assert_eq!(cyclic_reduce(&[1, 2, 3, -1]), vec![2, 3]);
        assert_eq!(cyclic_reduce(&[1, -2, 2, -1]), Vec::<Letter>::new());
        assert_eq!(cyclic_reduce(&[2, 1, -2]), vec![1]);
    }

    #[test]
    fn reduce_is_idempotent() {
        let w = vec![1, 1, -2, 2, -1, 3];
        let r = free_reduce(&w);
        assert_eq!(free_reduce(&r), r);
        let c = cyclic_reduce(&w);
        assert_eq!(cyclic_reduce(&c), c);
    }

    #[test]
    fn parse_example_word() {
        let p = parse_presentation("gens a,b\nrel (a*b)^3\n").unwrap();
        assert_eq!(p.relators, vec![vec![1, 2, 1, 2, 1, 2]]);
    }

    #[test]
    fn parse_negative_and_nested_powers() {
        let p = parse_presentation("gens a,b\n").unwrap();
        assert_eq!(p.parse_word("a^-2").unwrap(), vec![-1, -1]);
        assert_eq!(p.parse_word("(a*b^-1)^-2").unwrap(), vec![2, -1, 2, -1]);
        assert_eq!(p.parse_word("b^0").unwrap(), Vec::<Letter>::new());
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_presentation("gens a\nrel a*c\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("unknown generator"));
        let e = parse_presentation("rel a\n").unwrap_err();
        assert!(e.msg.contains("rel before gens"));
    }

    #[test]
    fn print_parse_round_trip() {
        let text = "group s3\ngens a,b\nrel a^2\nrel b^2\nrel (a*b)^3\n";
        let p = parse_presentation(text).unwrap();
        let printed = p.print();
        let q = parse_presentation(&printed).unwrap();
        assert_eq!(p, q);
        assert_eq!(printed, parse_presentation(&printed).unwrap().print());
    }

    #[test]
    fn print_condenses_powers() {
        let p = Presentation::new(None, &["a", "b"], vec![vec![1, 1, -2, -2, -2, 1]]);
        assert_eq!(print_word(&p.relators[0], &p.gens), "a^2*b^-3*a");
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# header\n\ngens a # trailing\nrel a^3\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.gens, vec!["a"]);
        assert_eq!(p.relators, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn cyclic_normal_form_identifies_rotations_and_inverses() {
        let a = cyclic_normal_form(&[1, 2, -3]);
        let b = cyclic_normal_form(&[2, -3, 1]);
        let c = cyclic_normal_form(&[3, -2, -1]);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}
