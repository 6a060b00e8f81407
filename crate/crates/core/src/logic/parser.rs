//! Parsers for formulas, conditionals, and the `.ckb` file format.
//!
//! Formula grammar, loosest binding first:
//!
//! ```text
//! formula := conj (';' conj)*          disjunction
//! conj    := unary (',' unary)*        conjunction
//! unary   := '!' unary | 'top' | 'bot' | atom | '(' formula ')'
//! atom    := [a-z][a-z0-9_]*
//! ```
//!
//! `|` never occurs inside a formula; it is the conditional separator only.
//! A `.ckb` file is line-oriented: `#` comments and blank lines are skipped,
//! the first significant line is `signature: a, b, ...`, and every further
//! line is `label: (CONSEQUENT | ANTECEDENT)` with the label optional.

use crate::error::{Error, Result};
use crate::logic::{Conditional, Formula, KnowledgeBase, Signature, DEFAULT_ATOM_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bang,
    Comma,
    Semi,
    Bar,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    /// 1-based column within the parsed text.
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    let mut col = 0usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        col += 1;
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '!' | ',' | ';' | '|' | '(' | ')' => {
                chars.next();
                let tok = match c {
                    '!' => Tok::Bang,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '|' => Tok::Bar,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                toks.push(Token { tok, col });
            }
            'a'..='z' => {
                let start = col;
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                col += name.chars().count() - 1;
                toks.push(Token {
                    tok: Tok::Ident(name),
                    col: start,
                });
            }
            _ => {
                return Err(Error::Syntax {
                    line: 0,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    sig: &'a Signature,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.col)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: 0,
            column: self.col(),
            message: message.into(),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.peek() == Some(&Tok::Semi) {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::Comma) {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("unbalanced parentheses: expected `)`"));
                }
                self.bump();
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                let col = self.col();
                self.bump();
                match name.as_str() {
                    "top" => Ok(Formula::Top),
                    "bot" => Ok(Formula::Bottom),
                    _ => match self.sig.atom_index(&name) {
                        Some(k) => Ok(Formula::Atom(k)),
                        None => Err(Error::UnknownAtom {
                            name,
                            line: 0,
                            column: col,
                        }),
                    },
                }
            }
            Some(t) => Err(self.err(format!("unexpected token `{t:?}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse_tokens(toks: &[Token], sig: &Signature, end_col: usize) -> Result<Formula> {
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        end_col,
    };
    let f = p.formula()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input after formula"));
    }
    Ok(f)
}

/// Parses a single formula over `sig`. Columns in errors are 1-based.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let toks = lex(text)?;
    parse_tokens(&toks, sig, text.chars().count() + 1)
}

/// Parses `(B | A)` (outer parentheses optional) into a conditional.
pub fn parse_conditional(text: &str, sig: &Signature) -> Result<Conditional> {
    let toks = lex(text)?;
    let end_col = text.chars().count() + 1;
    let mut slice = &toks[..];
    loop {
        // locate depth-0 bars
        let mut depth = 0usize;
        let mut bars = Vec::new();
        for (i, t) in slice.iter().enumerate() {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => depth = depth.saturating_sub(1),
                Tok::Bar if depth == 0 => bars.push(i),
                _ => {}
            }
        }
        match bars.len() {
            1 => {
                let (cons, ante) = (&slice[..bars[0]], &slice[bars[0] + 1..]);
                let consequent = parse_tokens(cons, sig, end_col)?;
                let antecedent = parse_tokens(ante, sig, end_col)?;
                return Ok(Conditional::new(consequent, antecedent));
            }
            0 => {
                // strip one layer of enclosing parentheses, if it spans everything
                let strippable = slice.len() >= 2
                    && slice.first().map(|t| &t.tok) == Some(&Tok::LParen)
                    && slice.last().map(|t| &t.tok) == Some(&Tok::RParen)
                    && {
                        let mut d = 0i64;
                        let mut closes_at_end = false;
                        for (i, t) in slice.iter().enumerate() {
                            match t.tok {
                                Tok::LParen => d += 1,
                                Tok::RParen => {
                                    d -= 1;
                                    if d == 0 {
                                        closes_at_end = i == slice.len() - 1;
                                        break;
                                    }
                                }
                                _ => {}
                            }
                        }
                        closes_at_end
                    };
                if strippable {
                    slice = &slice[1..slice.len() - 1];
                } else {
                    return Err(Error::Syntax {
                        line: 0,
                        column: end_col,
                        message: "expected `|` separating consequent and antecedent".into(),
                    });
                }
            }
            _ => {
                return Err(Error::Syntax {
                    line: 0,
                    column: slice[bars[1]].col,
                    message: "more than one `|` in conditional".into(),
                });
            }
        }
    }
}

/// Parses a `.ckb` knowledge base with the default atom cap.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase> {
    parse_kb_with_cap(text, DEFAULT_ATOM_CAP)
}

/// Parses a `.ckb` knowledge base with an explicit atom cap.
pub fn parse_kb_with_cap(text: &str, cap: usize) -> Result<KnowledgeBase> {
    let mut sig: Option<Signature> = None;
    let mut conditionals = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at_line = |e: Error| match e {
            Error::Syntax {
                column, message, ..
            } => Error::Syntax {
                line: lineno,
                column,
                message,
            },
            Error::UnknownAtom { name, column, .. } => Error::UnknownAtom {
                name,
                line: lineno,
                column,
            },
            other => other,
        };
        match &sig {
            None => {
                let rest = line
                    .strip_prefix("signature:")
                    .or_else(|| line.strip_prefix("sig:"))
                    .ok_or(Error::MissingSignature)?;
                let atoms: Vec<&str> = rest
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect();
                sig = Some(Signature::with_cap(atoms, cap)?);
            }
            Some(sig) => {
                let (label, body) = match line.find(':') {
                    Some(pos) => {
                        let name = line[..pos].trim();
                        if !is_label(name) {
                            return Err(Error::Syntax {
                                line: lineno,
                                column: 1,
                                message: format!("invalid rule label `{name}`"),
                            });
                        }
                        (Some(name.to_string()), &line[pos + 1..])
                    }
                    None => (None, line),
                };
                let mut c = parse_conditional(body, sig).map_err(at_line)?;
                c.label = label;
                conditionals.push(c);
            }
        }
    }
    let sig = sig.ok_or(Error::MissingSignature)?;
    KnowledgeBase::new(sig, conditionals)
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    }
}
