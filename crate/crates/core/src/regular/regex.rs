use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Regular expression over an arbitrary symbol type.
///
/// Surface syntax: juxtaposition for concatenation, `|` for union, postfix
/// `*`, parentheses for grouping and `()` for the empty word. Symbols are
/// single characters or names written in single quotes (`'tau1'`).
/// Whitespace between tokens is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex<S> {
    Epsilon,
    Symbol(S),
    Concat(Vec<Regex<S>>),
    Union(Vec<Regex<S>>),
    Star(Box<Regex<S>>),
}

impl<S: Clone + Ord> Regex<S> {
    pub fn sym(s: S) -> Self {
        Regex::Symbol(s)
    }

    pub fn star(r: Regex<S>) -> Self {
        Regex::Star(Box::new(r))
    }

    /// Concatenation with the trivial cases folded away.
    pub fn concat(parts: Vec<Regex<S>>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Regex::Epsilon => {}
                Regex::Concat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Regex::Epsilon,
            1 => flat.pop().unwrap(),
            _ => Regex::Concat(flat),
        }
    }

    /// Union; a single alternative is returned as is. An empty list is not a
    /// valid union and is reported by [`Regex::check`].
    pub fn union(alts: Vec<Regex<S>>) -> Self {
        let mut flat = Vec::with_capacity(alts.len());
        for a in alts {
            match a {
                Regex::Union(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Regex::Union(flat)
        }
    }

    /// A word as a concatenation of symbols.
    pub fn word(w: &[S]) -> Self {
        Regex::concat(w.iter().cloned().map(Regex::Symbol).collect())
    }

    /// All symbol leaves, deduplicated.
    pub fn symbols(&self) -> BTreeSet<S> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<S>) {
        match self {
            Regex::Epsilon => {}
            Regex::Symbol(s) => {
                out.insert(s.clone());
            }
            Regex::Concat(v) | Regex::Union(v) => v.iter().for_each(|r| r.collect_symbols(out)),
            Regex::Star(r) => r.collect_symbols(out),
        }
    }

    /// Checks that every leaf is in `alphabet` and every union is non-empty.
    pub fn check(&self, alphabet: &BTreeSet<S>) -> Result<()>
    where
        S: fmt::Debug,
    {
        match self {
            Regex::Epsilon => Ok(()),
            Regex::Symbol(s) if alphabet.contains(s) => Ok(()),
            Regex::Symbol(s) => Err(Error::MalformedRegex(format!(
                "symbol {s:?} is outside the declared alphabet"
            ))),
            Regex::Union(v) if v.is_empty() => {
                Err(Error::MalformedRegex("empty union".to_string()))
            }
            Regex::Concat(v) | Regex::Union(v) => v.iter().try_for_each(|r| r.check(alphabet)),
            Regex::Star(r) => r.check(alphabet),
        }
    }

    /// Replaces every symbol leaf by its image.
    pub fn substitute<T, F>(&self, map: &F) -> Result<Regex<T>>
    where
        T: Clone + Ord,
        S: fmt::Debug,
        F: Fn(&S) -> Option<Regex<T>>,
    {
        Ok(match self {
            Regex::Epsilon => Regex::Epsilon,
            Regex::Symbol(s) => {
                map(s).ok_or_else(|| Error::IncompleteSubstitution(format!("{s:?}")))?
            }
            Regex::Concat(v) => Regex::concat(
                v.iter()
                    .map(|r| r.substitute(map))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Regex::Union(v) => Regex::union(
                v.iter()
                    .map(|r| r.substitute(map))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Regex::Star(r) => Regex::star(r.substitute(map)?),
        })
    }

    /// Renames symbols without changing structure.
    pub fn map_symbols<T: Clone + Ord>(&self, f: &impl Fn(&S) -> T) -> Regex<T> {
        match self {
            Regex::Epsilon => Regex::Epsilon,
            Regex::Symbol(s) => Regex::Symbol(f(s)),
            Regex::Concat(v) => Regex::Concat(v.iter().map(|r| r.map_symbols(f)).collect()),
            Regex::Union(v) => Regex::Union(v.iter().map(|r| r.map_symbols(f)).collect()),
            Regex::Star(r) => Regex::Star(Box::new(r.map_symbols(f))),
        }
    }

    /// Renders in the surface syntax, naming symbols through `name`.
    pub fn render(&self, name: &impl Fn(&S) -> String) -> String {
        let mut out = String::new();
        self.render_into(name, 0, &mut out);
        out
    }

    // prec: 0 = union context, 1 = concat context, 2 = operand of star
    fn render_into(&self, name: &impl Fn(&S) -> String, prec: u8, out: &mut String) {
        match self {
            Regex::Epsilon => out.push_str("()"),
            Regex::Symbol(s) => out.push_str(&quote_symbol(&name(s))),
            Regex::Concat(v) => {
                if prec > 1 {
                    out.push('(');
                }
                for r in v {
                    r.render_into(name, 2.min(prec.max(1)), out);
                }
                if prec > 1 {
                    out.push(')');
                }
            }
            Regex::Union(v) => {
                if prec > 0 {
                    out.push('(');
                }
                for (i, r) in v.iter().enumerate() {
                    if i > 0 {
                        out.push('|');
                    }
                    r.render_into(name, 1, out);
                }
                if prec > 0 {
                    out.push(')');
                }
            }
            Regex::Star(r) => {
                r.render_into(name, 2, out);
                out.push('*');
            }
        }
    }
}

impl Regex<String> {
    /// Parses the surface syntax. Every symbol must be in `alphabet`.
    pub fn parse(text: &str, alphabet: &BTreeSet<String>) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let r = p.alternation()?;
        if p.pos != p.tokens.len() {
            return Err(Error::MalformedRegex(format!(
                "unexpected token at position {} in `{text}`",
                p.pos
            )));
        }
        r.check(alphabet)?;
        Ok(r)
    }
}

impl fmt::Display for Regex<String> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|s: &String| s.clone()))
    }
}

const SPECIAL: &[char] = &['(', ')', '|', '*', '\''];

/// Quotes a symbol name if it cannot be written as a bare single character.
pub fn quote_symbol(name: &str) -> String {
    let mut chars = name.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if !SPECIAL.contains(&c) && !c.is_whitespace() => name.to_string(),
        _ => format!("'{name}'"),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Bar,
    Star,
    Sym(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '(' => out.push(Token::Open),
            ')' => out.push(Token::Close),
            '|' => out.push(Token::Bar),
            '*' => out.push(Token::Star),
            '\'' => {
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('\'') => break,
                        Some(c) => name.push(c),
                        None => {
                            return Err(Error::MalformedRegex(format!(
                                "unterminated quoted symbol in `{text}`"
                            )))
                        }
                    }
                }
                if name.is_empty() {
                    return Err(Error::MalformedRegex("empty quoted symbol".to_string()));
                }
                out.push(Token::Sym(name));
            }
            c => out.push(Token::Sym(c.to_string())),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn alternation(&mut self) -> Result<Regex<String>> {
        let mut alts = vec![self.concatenation()?];
        while self.peek() == Some(&Token::Bar) {
            self.pos += 1;
            alts.push(self.concatenation()?);
        }
        Ok(Regex::union(alts))
    }

    fn concatenation(&mut self) -> Result<Regex<String>> {
        let mut parts = Vec::new();
        while let Some(t) = self.peek() {
            if matches!(t, Token::Bar | Token::Close) {
                break;
            }
            parts.push(self.postfix()?);
        }
        Ok(Regex::concat(parts))
    }

    fn postfix(&mut self) -> Result<Regex<String>> {
        let mut r = self.atom()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex<String>> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Sym(s)) => {
                self.pos += 1;
                Ok(Regex::Symbol(s))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::MalformedRegex("missing `)`".to_string()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Star) => Err(Error::MalformedRegex("`*` without operand".to_string())),
            other => Err(Error::MalformedRegex(format!("unexpected {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> BTreeSet<String> {
        ["α", "β", "γ", "a", "b", "c", "τ", "σ"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn parses_rational_control() {
        let r = Regex::parse("α*β*γ", &abc()).unwrap();
        assert_eq!(
            r,
            Regex::Concat(vec![
                Regex::star(Regex::sym("α".into())),
                Regex::star(Regex::sym("β".into())),
                Regex::sym("γ".into()),
            ])
        );
        assert_eq!(r.to_string(), "α*β*γ");
    }

    #[test]
    fn empty_word_forms() {
        assert_eq!(Regex::parse("()", &abc()).unwrap(), Regex::Epsilon);
        assert_eq!(Regex::parse("", &abc()).unwrap(), Regex::Epsilon);
        assert_eq!(Regex::Epsilon::<String>.to_string(), "()");
    }

    #[test]
    fn quoted_names() {
        let mut alpha = abc();
        alpha.insert("tau1".into());
        let r = Regex::parse("'tau1'* a", &alpha).unwrap();
        assert_eq!(r.to_string(), "'tau1'*a");
        assert_eq!(Regex::parse(&r.to_string(), &alpha).unwrap(), r);
    }

    #[test]
    fn foreign_symbol_is_malformed() {
        assert!(matches!(
            Regex::parse("ab|z", &abc()),
            Err(Error::MalformedRegex(_))
        ));
        assert!(Regex::parse("(ab", &abc()).is_err());
        assert!(Regex::parse("*a", &abc()).is_err());
    }

    #[test]
    fn substitution_replaces_leaves() {
        let r = Regex::parse("τ*", &abc()).unwrap();
        let img = Regex::parse("αβ", &abc()).unwrap();
        let out = r
            .substitute(&|s: &String| (s == "τ").then(|| img.clone()))
            .unwrap();
        assert_eq!(out.to_string(), "(αβ)*");

        let r = Regex::parse("σ", &abc()).unwrap();
        let out = r
            .substitute(&|_: &String| Some(Regex::<String>::Epsilon))
            .unwrap();
        assert_eq!(out, Regex::Epsilon);
    }

    #[test]
    fn substitution_requires_every_image() {
        let r = Regex::parse("τσ", &abc()).unwrap();
        let err = r
            .substitute(&|s: &String| (s == "τ").then_some(Regex::<String>::Epsilon))
            .unwrap_err();
        assert!(matches!(err, Error::IncompleteSubstitution(_)));
    }

    #[test]
    fn render_round_trips_precedence() {
        let alpha = abc();
        for text in ["(a|b)*c", "a(b|c)", "(ab)*", "a|bc*", "((a*)*|())"] {
            let r = Regex::parse(text, &alpha).unwrap();
            let again = Regex::parse(&r.to_string(), &alpha).unwrap();
            assert_eq!(r, again, "{text}");
        }
    }
}
