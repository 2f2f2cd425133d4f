//! Prefix s-expression syntax for formulas.
//!
//! ```text
//! (forall (x y) (=> (and (chair x) (partOf y x)) (or (cushion y) (armRest y))))
//! ```
//!
//! Keywords: `not`, `and`, `or`, `=>` (or `implies`), `forall`, `exists`,
//! and the already-grounded aggregates `forall*` / `exists*`. Numbers are
//! constants, `true`/`false` are 1 and 0, `#k` is proposition `k`, any other
//! bare symbol is a nullary atom.

use super::{Formula, FormulaError, Quantifier};

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Symbol(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Token<'_>)> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c == b';' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'(' {
            out.push((i, Token::Open));
            i += 1;
        } else if c == b')' {
            out.push((i, Token::Close));
            i += 1;
        } else {
            let start = i;
            while i < bytes.len()
                && !bytes[i].is_ascii_whitespace()
                && bytes[i] != b'('
                && bytes[i] != b')'
            {
                i += 1;
            }
            out.push((start, Token::Symbol(&text[start..i])));
        }
    }
    out
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    len: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> FormulaError {
    FormulaError::Parse {
        pos,
        msg: msg.into(),
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "not" | "and" | "or" | "=>" | "implies" | "forall" | "exists" | "forall*" | "exists*"
    )
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn next(&mut self) -> Result<(usize, Token<'a>), FormulaError> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| err(self.len, "unexpected end of input"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect_close(&mut self) -> Result<(), FormulaError> {
        match self.next()? {
            (_, Token::Close) => Ok(()),
            (p, _) => Err(err(p, "expected ')'")),
        }
    }

    fn peek_close(&self) -> bool {
        matches!(self.tokens.get(self.pos), Some((_, Token::Close)))
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        match self.next()? {
            (p, Token::Close) => Err(err(p, "unexpected ')'")),
            (p, Token::Symbol(s)) => leaf(p, s),
            (p, Token::Open) => {
                let head = match self.next()? {
                    (_, Token::Symbol(s)) => s,
                    (q, _) => return Err(err(q, "expected an operator or predicate name")),
                };
                let f = match head {
                    "not" => {
                        let child = self.formula()?;
                        Formula::not(child)
                    }
                    "and" | "or" | "forall*" | "exists*" => {
                        let children = self.rest()?;
                        if children.is_empty() {
                            return Err(err(p, format!("'{head}' needs at least one operand")));
                        }
                        match head {
                            "and" => Formula::And(children),
                            "or" => Formula::Or(children),
                            "forall*" => Formula::Aggregate(Quantifier::Universal, children),
                            _ => Formula::Aggregate(Quantifier::Existential, children),
                        }
                    }
                    "=>" | "implies" => {
                        let a = self.formula()?;
                        let c = self.formula()?;
                        Formula::implies(a, c)
                    }
                    "forall" | "exists" => {
                        let vars = self.variables()?;
                        let body = self.formula()?;
                        if head == "forall" {
                            Formula::Forall(vars, Box::new(body))
                        } else {
                            Formula::Exists(vars, Box::new(body))
                        }
                    }
                    predicate => {
                        let mut args = Vec::new();
                        while !self.peek_close() {
                            match self.next()? {
                                (_, Token::Symbol(s)) if !is_keyword(s) => args.push(s.to_string()),
                                (q, _) => {
                                    return Err(err(q, "atom arguments must be plain symbols"))
                                }
                            }
                        }
                        Formula::Atom {
                            predicate: predicate.to_string(),
                            args,
                        }
                    }
                };
                self.expect_close()?;
                Ok(f)
            }
        }
    }

    fn rest(&mut self) -> Result<Vec<Formula>, FormulaError> {
        let mut out = Vec::new();
        while !self.peek_close() {
            if self.pos >= self.tokens.len() {
                return Err(err(self.len, "unexpected end of input"));
            }
            out.push(self.formula()?);
        }
        Ok(out)
    }

    fn variables(&mut self) -> Result<Vec<String>, FormulaError> {
        let at = self.offset();
        match self.next()? {
            (_, Token::Open) => {}
            (p, _) => return Err(err(p, "expected a variable list")),
        }
        let mut vars = Vec::new();
        loop {
            match self.next()? {
                (_, Token::Close) => break,
                (_, Token::Symbol(s)) if !is_keyword(s) => vars.push(s.to_string()),
                (q, _) => return Err(err(q, "variables must be plain symbols")),
            }
        }
        if vars.is_empty() {
            return Err(err(at, "empty variable list"));
        }
        Ok(vars)
    }
}

fn leaf(pos: usize, s: &str) -> Result<Formula, FormulaError> {
    if is_keyword(s) {
        return Err(err(pos, format!("'{s}' must appear in operator position")));
    }
    match s {
        "true" => return Ok(Formula::Const(1.0)),
        "false" => return Ok(Formula::Const(0.0)),
        _ => {}
    }
    if let Some(id) = s.strip_prefix('#') {
        return id
            .parse()
            .map(Formula::Prop)
            .map_err(|_| err(pos, format!("bad proposition id '{s}'")));
    }
    let first = s.as_bytes()[0];
    if first.is_ascii_digit() || first == b'.' || first == b'-' || first == b'+' {
        let v: f64 = s
            .parse()
            .map_err(|_| err(pos, format!("bad number '{s}'")))?;
        return Formula::constant(v).map_err(|_| err(pos, format!("constant {v} outside [0, 1]")));
    }
    Ok(Formula::Atom {
        predicate: s.to_string(),
        args: Vec::new(),
    })
}

/// Parses one formula in prefix s-expression syntax.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        tokens: tokenize(text),
        pos: 0,
        len: text.len(),
    };
    let f = p.formula()?;
    if p.pos != p.tokens.len() {
        return Err(err(p.offset(), "trailing input after formula"));
    }
    Ok(f)
}
