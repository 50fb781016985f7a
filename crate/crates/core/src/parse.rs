//! Concrete syntax for formulas, sequents, proof terms, forests and
//! finitary terms.
//!
//! ```text
//! formula  F ::= atom | F -> F | ( F )                  (-> is right-associative)
//! sequent  S ::= [x : F (, x : F)*] |- F
//! term     t ::= \x:F. t | x | x<t, ..., t>
//! forest   N ::= \x:F. N | ? | E + ... + E | O
//! finitary T ::= \x:F. T | gfp X{S}. E + ... + E | X{S} | E + ... + E | O
//! ```
//!
//! `⊃` and `→` are accepted for `->`, `⊢` for `|-` and `λ` for `\`.
//! `O` is the empty sum and `?` the truncation marker; `gfp` is a keyword.

use thiserror::Error;

use crate::finitary::{FinAlt, FinTerm};
use crate::forest::{EAlt, Forest};
use crate::lambda_bar::ProofTerm;
use crate::syntax::{Context, Formula, Sequent, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    LParen,
    RParen,
    Comma,
    Colon,
    Turnstile,
    Lambda,
    Dot,
    Lt,
    Gt,
    Plus,
    Question,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Question => "`?`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut name = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    name.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            toks.push((Tok::Ident(name), pos));
            continue;
        }
        chars.next();
        let tok = match c {
            '-' => match chars.next() {
                Some((_, '>')) => Tok::Arrow,
                _ => return Err(err(pos, "expected `->`")),
            },
            '|' => match chars.next() {
                Some((_, '-')) => Tok::Turnstile,
                _ => return Err(err(pos, "expected `|-`")),
            },
            '⊃' | '→' => Tok::Arrow,
            '⊢' => Tok::Turnstile,
            '\\' | 'λ' => Tok::Lambda,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '<' | '⟨' => Tok::Lt,
            '>' | '⟩' => Tok::Gt,
            '+' => Tok::Plus,
            '?' => Tok::Question,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            other => return Err(err(pos, &format!("unexpected character `{other}`"))),
        };
        toks.push((tok, pos));
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

fn err(pos: usize, message: &str) -> ParseError {
    ParseError {
        pos,
        message: message.to_string(),
    }
}

const EMPTY_SUM: &str = "O";
const GFP: &str = "gfp";

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        err(
            self.pos(),
            &format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(&Tok::RParen)?;
                inner
            }
            Tok::Ident(name) => {
                self.bump();
                Formula::atom(&name)
            }
            _ => return Err(self.unexpected("a formula")),
        };
        if self.eat(&Tok::Arrow) {
            Ok(Formula::imp(left, self.formula()?))
        } else {
            Ok(left)
        }
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let mut ctx = Context::new();
        if !self.eat(&Tok::Turnstile) {
            loop {
                let pos = self.pos();
                let name = self.ident()?;
                self.expect(&Tok::Colon)?;
                let f = self.formula()?;
                ctx.push(Var::new(&name), f)
                    .map_err(|e| err(pos, &e.to_string()))?;
                if self.eat(&Tok::Comma) {
                    continue;
                }
                self.expect(&Tok::Turnstile)?;
                break;
            }
        }
        let goal = self.formula()?;
        Ok(Sequent::new(ctx, goal))
    }

    /// `\x:F.` prefix, already past the lambda token.
    fn binder(&mut self) -> Result<(Var, Formula), ParseError> {
        let name = self.ident()?;
        self.expect(&Tok::Colon)?;
        let ann = self.formula()?;
        self.expect(&Tok::Dot)?;
        Ok((Var::new(&name), ann))
    }

    fn tuple<T>(
        &mut self,
        mut item: impl FnMut(&mut Parser) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut items = Vec::new();
        if self.eat(&Tok::Lt) {
            if self.eat(&Tok::Gt) {
                return Ok(items);
            }
            loop {
                items.push(item(self)?);
                if self.eat(&Tok::Comma) {
                    continue;
                }
                self.expect(&Tok::Gt)?;
                break;
            }
        }
        Ok(items)
    }

    fn proof_term(&mut self) -> Result<ProofTerm, ParseError> {
        if self.eat(&Tok::Lambda) {
            let (var, ann) = self.binder()?;
            let body = self.proof_term()?;
            return Ok(ProofTerm::lam(var, ann, body));
        }
        let head = self.ident()?;
        let args = self.tuple(Parser::proof_term)?;
        Ok(ProofTerm::app(Var::new(&head), args))
    }

    fn forest(&mut self) -> Result<Forest, ParseError> {
        if self.eat(&Tok::Lambda) {
            let (var, ann) = self.binder()?;
            let body = self.forest()?;
            return Ok(Forest::lam(var, ann, body));
        }
        if self.eat(&Tok::Question) {
            return Ok(Forest::Cut);
        }
        let mut alts = Vec::new();
        loop {
            if let (Tok::Ident(name), next) = (self.peek().clone(), self.peek2()) {
                if name == EMPTY_SUM && *next != Tok::Lt {
                    self.bump();
                } else {
                    self.bump();
                    let args = self.tuple(Parser::forest)?;
                    alts.push(EAlt::new(Var::new(&name), args));
                }
            } else {
                return Err(self.unexpected("a forest"));
            }
            if !self.eat(&Tok::Plus) {
                break;
            }
        }
        Ok(Forest::Sum(alts))
    }

    fn fin_alts(&mut self) -> Result<Vec<FinAlt>, ParseError> {
        let mut alts = Vec::new();
        loop {
            match (self.peek().clone(), self.peek2().clone()) {
                (Tok::Ident(name), next) if name == EMPTY_SUM && next != Tok::Lt => {
                    self.bump();
                }
                (Tok::Ident(_), Tok::LBrace) => {
                    return Err(self.unexpected("an elimination alternative"));
                }
                (Tok::Ident(name), _) if name != GFP => {
                    self.bump();
                    let args = self.tuple(Parser::fin_term)?;
                    alts.push(FinAlt::new(Var::new(&name), args));
                }
                _ => return Err(self.unexpected("an elimination alternative")),
            }
            if !self.eat(&Tok::Plus) {
                break;
            }
        }
        Ok(alts)
    }

    fn braced_sequent(&mut self) -> Result<Sequent, ParseError> {
        self.expect(&Tok::LBrace)?;
        let s = self.sequent()?;
        self.expect(&Tok::RBrace)?;
        Ok(s)
    }

    fn fin_term(&mut self) -> Result<FinTerm, ParseError> {
        if self.eat(&Tok::Lambda) {
            let (var, ann) = self.binder()?;
            let body = self.fin_term()?;
            return Ok(FinTerm::lam(var, ann, body));
        }
        match (self.peek().clone(), self.peek2().clone()) {
            (Tok::Ident(kw), Tok::Ident(_)) if kw == GFP => {
                self.bump();
                let name = self.ident()?;
                let pos = self.pos();
                let sequent = self.braced_sequent()?;
                if !sequent.is_atomic() {
                    return Err(err(pos, "fixed-point annotations must be atomic sequents"));
                }
                self.expect(&Tok::Dot)?;
                let alts = self.fin_alts()?;
                Ok(FinTerm::Gfp {
                    var: Var::new(&name),
                    sequent,
                    alts,
                })
            }
            (Tok::Ident(name), Tok::LBrace) => {
                self.bump();
                let pos = self.pos();
                let sequent = self.braced_sequent()?;
                if !sequent.is_atomic() {
                    return Err(err(pos, "fixed-point annotations must be atomic sequents"));
                }
                Ok(FinTerm::FpOcc {
                    var: Var::new(&name),
                    sequent,
                })
            }
            _ => Ok(FinTerm::Sum(self.fin_alts()?)),
        }
    }
}

fn whole<T>(
    text: &str,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(text)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    whole(text, Parser::formula)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    whole(text, Parser::sequent)
}

pub fn parse_proof_term(text: &str) -> Result<ProofTerm, ParseError> {
    whole(text, Parser::proof_term)
}

pub fn parse_forest(text: &str) -> Result<Forest, ParseError> {
    whole(text, Parser::forest)
}

pub fn parse_fin_term(text: &str) -> Result<FinTerm, ParseError> {
    whole(text, Parser::fin_term)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_associative_arrow() {
        let f = parse_formula("p -> p -> p").unwrap();
        let p = Formula::atom("p");
        assert_eq!(f, Formula::imp(p.clone(), Formula::imp(p.clone(), p)));
    }

    #[test]
    fn parenthesized_left() {
        let f = parse_formula("(p -> q) -> p").unwrap();
        let (p, q) = (Formula::atom("p"), Formula::atom("q"));
        assert_eq!(f, Formula::imp(Formula::imp(p.clone(), q), p));
    }

    #[test]
    fn unicode_synonyms() {
        assert_eq!(parse_formula("(p ⊃ q) → p").unwrap(), parse_formula("(p -> q) -> p").unwrap());
        assert_eq!(parse_sequent("x: p ⊢ p").unwrap(), parse_sequent("x: p |- p").unwrap());
    }

    #[test]
    fn sequent_grammar() {
        let s = parse_sequent("f: p -> p, x: p |- p").unwrap();
        assert_eq!(s.ctx.len(), 2);
        assert_eq!(s.ctx.get("f"), Some(&parse_formula("p -> p").unwrap()));
        assert_eq!(s.goal, Formula::atom("p"));
        assert_eq!(s.to_string(), "f: p -> p, x: p |- p");
        assert!(parse_sequent("|- p").unwrap().ctx.is_empty());
    }

    #[test]
    fn print_parse_round_trip() {
        for text in ["p", "p -> q", "(p -> q) -> p", "((p -> q) -> p) -> p", "(p -> p) -> p -> p"] {
            assert_eq!(parse_formula(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("p -> ").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_sequent("x: p, x: q |- p").unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(parse_formula("p - q").is_err());
        assert!(parse_formula("(p -> q").is_err());
        assert!(parse_formula("p q").is_err());
        assert!(parse_sequent("x p |- p").is_err());
    }

    #[test]
    fn terms_and_forests() {
        let t = parse_proof_term("\\x:p. \\y:p. x").unwrap();
        assert_eq!(t.to_string(), "\\x:p. \\y:p. x");
        let t = parse_proof_term("f<x, x<>>").unwrap();
        assert_eq!(t.to_string(), "f<x, x>");
        let f = parse_forest("f<x + y, ?> + O").unwrap();
        assert_eq!(f.to_string(), "f<x + y, ?>");
        assert_eq!(parse_forest("O").unwrap(), Forest::Sum(vec![]));
    }

    #[test]
    fn finitary_terms() {
        let t = parse_fin_term("\\f:p -> p. gfp X{f: p -> p |- p}. f<X{f: p -> p |- p}>").unwrap();
        assert_eq!(t.to_string(), "\\f:p -> p. gfp X{f: p -> p |- p}. f<X{f: p -> p |- p}>");
        assert!(parse_fin_term("gfp X{|- p -> p}. O").is_err());
        assert!(parse_fin_term("X{|- p} + y").is_err());
    }
}
