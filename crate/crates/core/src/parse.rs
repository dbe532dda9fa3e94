//! Text syntax for formulas, proof terms and signature files.
//!
//! Keywords: `fun` (implication introduction), `ifun` (individual
//! abstraction), `Fun` (predicate abstraction), `par`, `wit`, `case`,
//! `excase`, `efq`, `abort`, `inj0`, `inj1`, `pi0`, `pi1`, `bot`,
//! `forall`, `exists`, `Forall`, `Exists`. `~A` is shorthand for
//! `A -> bot` and `Exists X. A` for its second-order expansion; both are
//! expanded while parsing. Comments run from `--` to end of line.

use thiserror::Error;

use crate::formula::{fresh_name, Formula, IndTerm, PredAbs};
use crate::sig::Signature;
use crate::term::{CaseArm, ExClause, Frame, ProofTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Comma,
    Dot,
    Colon,
    Slash,
    At,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    FatArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Slash => "`/`".into(),
            Tok::At => "`@`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "fun", "ifun", "Fun", "par", "wit", "case", "excase", "efq", "abort", "inj0", "inj1", "pi0",
    "pi1", "bot", "forall", "exists", "Forall", "Exists",
];

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            // Skip whitespace and comments.
            loop {
                match self.peek() {
                    Some(c) if c.is_ascii_whitespace() => {
                        self.bump();
                    }
                    Some(b'-') if self.peek2() == Some(b'-') => {
                        while let Some(c) = self.peek() {
                            if c == b'\n' {
                                break;
                            }
                            self.bump();
                        }
                    }
                    _ => break,
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push(Spanned {
                    tok: Tok::Eof,
                    line,
                    col,
                });
                return Ok(out);
            };
            let tok = match c {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b'{' => {
                    self.bump();
                    Tok::LBrace
                }
                b'}' => {
                    self.bump();
                    Tok::RBrace
                }
                b'<' => {
                    self.bump();
                    Tok::LAngle
                }
                b'>' => {
                    self.bump();
                    Tok::RAngle
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b':' => {
                    self.bump();
                    Tok::Colon
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'@' => {
                    self.bump();
                    Tok::At
                }
                b'~' => {
                    self.bump();
                    Tok::Tilde
                }
                b'&' => {
                    self.bump();
                    Tok::Amp
                }
                b'|' => {
                    self.bump();
                    Tok::Pipe
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        return Err(self.error("expected `->`"));
                    }
                }
                b'=' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::FatArrow
                    } else {
                        return Err(self.error("expected `=>`"));
                    }
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos])
                        .expect("ascii identifier")
                        .to_owned();
                    Tok::Ident(word)
                }
                other => {
                    return Err(self.error(format!("unexpected character `{}`", other as char)))
                }
            };
            out.push(Spanned { tok, line, col });
        }
    }
}

pub struct Parser<'a> {
    tokens: Vec<Spanned>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, sig: &'a Signature) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: Lexer::new(src).tokens()?,
            pos: 0,
            sig,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let s = &self.tokens[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.advance();
                Ok(name)
            }
            other => Err(self.error_here(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    // ---- individual terms ----

    pub fn parse_ind_term(&mut self) -> Result<IndTerm, ParseError> {
        let name = self.expect_ident("an individual term")?;
        // A parenthesis after a non-function name belongs to the caller
        // (e.g. the proof argument of `wit c0 (...)`).
        if *self.peek() == Tok::LParen && self.sig.function_arity(&name).is_some() {
            let arity = self.sig.function_arity(&name).unwrap();
            self.advance();
            let mut args = vec![self.parse_ind_term()?];
            while *self.peek() == Tok::Comma {
                self.advance();
                args.push(self.parse_ind_term()?);
            }
            self.expect(Tok::RParen)?;
            if args.len() != arity {
                return Err(self.error_here(format!(
                    "function `{name}` has arity {arity}, got {} arguments",
                    args.len()
                )));
            }
            Ok(IndTerm::App(name, args))
        } else if self.sig.is_constant(&name) {
            Ok(IndTerm::Const(name))
        } else if self.sig.function_arity(&name).is_some() {
            Err(self.error_here(format!("function `{name}` requires arguments")))
        } else {
            Ok(IndTerm::Var(name))
        }
    }

    // ---- formulas ----

    pub fn parse_formula(&mut self) -> Result<Formula, ParseError> {
        if self.eat_keyword("forall") {
            let v = self.expect_ident("a bound individual variable")?;
            self.expect(Tok::Dot)?;
            return Ok(Formula::forall(v, self.parse_formula()?));
        }
        if self.eat_keyword("exists") {
            let v = self.expect_ident("a bound individual variable")?;
            self.expect(Tok::Dot)?;
            return Ok(Formula::exists(v, self.parse_formula()?));
        }
        if self.eat_keyword("Forall") {
            let v = self.expect_ident("a bound predicate variable")?;
            self.expect(Tok::Dot)?;
            return Ok(Formula::forall_pred(v, self.parse_formula()?));
        }
        if self.eat_keyword("Exists") {
            let v = self.expect_ident("a bound predicate variable")?;
            self.expect(Tok::Dot)?;
            let body = self.parse_formula()?;
            return self.expand_second_order_exists(v, body);
        }
        let lhs = self.parse_or()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.parse_formula()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    /// Exists X. A  :=  Forall Y. (Forall X. A -> Y(c)) -> Y(c)
    /// with Y fresh and c the first constant of the signature.
    fn expand_second_order_exists(
        &mut self,
        var: String,
        body: Formula,
    ) -> Result<Formula, ParseError> {
        let Some(c) = self.sig.first_constant() else {
            return Err(self.error_here(
                "`Exists` needs at least one individual constant in the signature",
            ));
        };
        let mut avoid = body.free_pred_vars();
        avoid.insert(var.clone());
        let y = fresh_name("Y", &avoid);
        let y_atom = Formula::PredVarAtom(y.clone(), IndTerm::Const(c.to_owned()));
        Ok(Formula::forall_pred(
            y.clone(),
            Formula::imp(
                Formula::forall_pred(var, Formula::imp(body, y_atom.clone())),
                y_atom,
            ),
        ))
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_and()?;
        if *self.peek() == Tok::Pipe {
            self.advance();
            let rhs = self.parse_or()?;
            Ok(Formula::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_formula_unary()?;
        if *self.peek() == Tok::Amp {
            self.advance();
            let rhs = self.parse_and()?;
            Ok(Formula::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_formula_unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.advance();
            let inner = self.parse_formula_unary()?;
            return Ok(Formula::neg(inner));
        }
        self.parse_formula_atom()
    }

    fn parse_formula_atom(&mut self) -> Result<Formula, ParseError> {
        if self.eat_keyword("bot") {
            return Ok(Formula::Falsum);
        }
        if *self.peek() == Tok::LParen {
            self.advance();
            let f = self.parse_formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        let name = self.expect_ident("a formula")?;
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.advance();
            args.push(self.parse_ind_term()?);
            while *self.peek() == Tok::Comma {
                self.advance();
                args.push(self.parse_ind_term()?);
            }
            self.expect(Tok::RParen)?;
        }
        match self.sig.predicate_arity(&name) {
            Some(arity) => {
                if args.len() != arity {
                    return Err(self.error_here(format!(
                        "predicate `{name}` has arity {arity}, got {} arguments",
                        args.len()
                    )));
                }
                Ok(Formula::Atom(name, args))
            }
            None => {
                // Undeclared head: a predicate variable, which takes exactly
                // one argument.
                if args.len() == 1 {
                    Ok(Formula::PredVarAtom(name, args.pop().unwrap()))
                } else {
                    Err(self.error_here(format!(
                        "`{name}` is not a declared predicate; a predicate variable takes exactly one argument"
                    )))
                }
            }
        }
    }

    // ---- proof terms ----

    pub fn parse_term(&mut self) -> Result<ProofTerm, ParseError> {
        if self.is_keyword("fun") || self.is_keyword("ifun") || self.is_keyword("Fun") {
            return self.parse_binder_form();
        }
        let head = self.parse_app_chain()?;
        if self.is_keyword("par") {
            self.advance();
            let (comm, hyps) = self.parse_par_binder()?;
            let right = self.parse_term()?;
            Ok(ProofTerm::Par {
                comm,
                hyps: hyps.map(Box::new),
                left: Box::new(head),
                right: Box::new(right),
            })
        } else {
            Ok(head)
        }
    }

    fn parse_par_binder(&mut self) -> Result<(String, Option<(Formula, Formula)>), ParseError> {
        if *self.peek() == Tok::LBracket {
            self.advance();
            let comm = self.expect_ident("the communication variable")?;
            self.expect(Tok::Colon)?;
            let left = self.parse_formula()?;
            let right = if *self.peek() == Tok::Slash {
                self.advance();
                self.parse_formula()?
            } else {
                match &left {
                    Formula::Imp(a, b) => Formula::imp((**b).clone(), (**a).clone()),
                    _ => {
                        return Err(self.error_here(
                            "the par hypothesis must be an implication A -> B",
                        ))
                    }
                }
            };
            self.expect(Tok::RBracket)?;
            Ok((comm, Some((left, right))))
        } else {
            let comm = self.expect_ident("the communication variable")?;
            Ok((comm, None))
        }
    }

    fn parse_binder_form(&mut self) -> Result<ProofTerm, ParseError> {
        if self.eat_keyword("fun") {
            let var = self.expect_ident("a proof variable")?;
            let ann = if *self.peek() == Tok::Colon {
                self.advance();
                Some(self.parse_formula()?)
            } else {
                None
            };
            self.expect(Tok::FatArrow)?;
            let body = self.parse_term()?;
            return Ok(ProofTerm::lam(var, ann, body));
        }
        if self.eat_keyword("ifun") {
            let var = self.expect_ident("an individual variable")?;
            self.expect(Tok::FatArrow)?;
            let body = self.parse_term()?;
            return Ok(ProofTerm::IndLam {
                var,
                body: Box::new(body),
            });
        }
        if self.eat_keyword("Fun") {
            let var = self.expect_ident("a predicate variable")?;
            self.expect(Tok::FatArrow)?;
            let body = self.parse_term()?;
            return Ok(ProofTerm::PredLam {
                var,
                body: Box::new(body),
            });
        }
        unreachable!("parse_binder_form called without binder keyword")
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::LAngle => true,
            Tok::Ident(w) => {
                !KEYWORDS.contains(&w.as_str())
                    || ["inj0", "inj1", "efq", "abort", "wit"].contains(&w.as_str())
            }
            _ => false,
        }
    }

    fn parse_app_chain(&mut self) -> Result<ProofTerm, ParseError> {
        let mut t = self.parse_atom_term()?;
        loop {
            if self.starts_atom() {
                let arg = self.parse_atom_term()?;
                t = ProofTerm::app(t, arg);
            } else if *self.peek() == Tok::At {
                self.advance();
                if *self.peek() == Tok::LBrace {
                    self.advance();
                    let binder = self.expect_ident("the abstraction binder")?;
                    self.expect(Tok::Dot)?;
                    let body = self.parse_formula()?;
                    self.expect(Tok::RBrace)?;
                    t = t.apply_frame(Frame::Pred(PredAbs { binder, body }));
                } else {
                    let m = self.parse_ind_term()?;
                    t = t.apply_frame(Frame::IndArg(m));
                }
            } else if self.is_keyword("pi0") {
                self.advance();
                t = ProofTerm::Proj(Box::new(t), 0);
            } else if self.is_keyword("pi1") {
                self.advance();
                t = ProofTerm::Proj(Box::new(t), 1);
            } else if *self.peek() == Tok::LBracket {
                self.advance();
                if self.eat_keyword("case") {
                    let first = self.parse_case_arm()?;
                    self.expect(Tok::Comma)?;
                    let second = self.parse_case_arm()?;
                    self.expect(Tok::RBracket)?;
                    t = ProofTerm::Case {
                        scrut: Box::new(t),
                        arms: Box::new((first, second)),
                    };
                } else if self.eat_keyword("excase") {
                    self.expect(Tok::LParen)?;
                    let ind_var = self.expect_ident("an individual variable")?;
                    self.expect(Tok::Comma)?;
                    let var = self.expect_ident("a proof variable")?;
                    let ann = if *self.peek() == Tok::Colon {
                        self.advance();
                        Some(self.parse_formula()?)
                    } else {
                        None
                    };
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::FatArrow)?;
                    let body = self.parse_term()?;
                    self.expect(Tok::RBracket)?;
                    t = ProofTerm::ExCase {
                        scrut: Box::new(t),
                        clause: Box::new(ExClause {
                            ind_var,
                            var,
                            ann,
                            body,
                        }),
                    };
                } else {
                    return Err(self.error_here("expected `case` or `excase` after `[`"));
                }
            } else {
                return Ok(t);
            }
        }
    }

    fn parse_case_arm(&mut self) -> Result<CaseArm, ParseError> {
        let var = self.expect_ident("a proof variable")?;
        let ann = if *self.peek() == Tok::Colon {
            self.advance();
            Some(self.parse_formula()?)
        } else {
            None
        };
        self.expect(Tok::FatArrow)?;
        let body = self.parse_term()?;
        Ok(CaseArm { var, ann, body })
    }

    fn parse_bracket_formula(&mut self) -> Result<Formula, ParseError> {
        self.expect(Tok::LBracket)?;
        let f = self.parse_formula()?;
        self.expect(Tok::RBracket)?;
        Ok(f)
    }

    fn parse_atom_term(&mut self) -> Result<ProofTerm, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let t = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LAngle => {
                self.advance();
                let a = self.parse_term()?;
                self.expect(Tok::Comma)?;
                let b = self.parse_term()?;
                self.expect(Tok::RAngle)?;
                Ok(ProofTerm::Pair(Box::new(a), Box::new(b)))
            }
            Tok::Ident(w) if w == "inj0" || w == "inj1" => {
                self.advance();
                let side = if w == "inj0" { 0 } else { 1 };
                let ann = if *self.peek() == Tok::LBracket {
                    Some(self.parse_bracket_formula()?)
                } else {
                    None
                };
                self.expect(Tok::LParen)?;
                let body = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(ProofTerm::Inj {
                    side,
                    ann,
                    body: Box::new(body),
                })
            }
            Tok::Ident(w) if w == "efq" => {
                self.advance();
                let target = self.parse_bracket_formula()?;
                self.expect(Tok::LParen)?;
                let body = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(ProofTerm::Efq {
                    target,
                    body: Box::new(body),
                })
            }
            Tok::Ident(w) if w == "abort" => {
                self.advance();
                let ann = self.parse_bracket_formula()?;
                Ok(ProofTerm::Abort { ann })
            }
            Tok::Ident(w) if w == "wit" => {
                self.advance();
                let ann = if *self.peek() == Tok::LBracket {
                    Some(self.parse_bracket_formula()?)
                } else {
                    None
                };
                let witness = self.parse_ind_term()?;
                let body = self.parse_atom_term()?;
                Ok(ProofTerm::Witness {
                    witness,
                    ann,
                    body: Box::new(body),
                })
            }
            Tok::Ident(_) => {
                let name = self.expect_ident("a proof term")?;
                Ok(ProofTerm::var(name))
            }
            other => Err(self.error_here(format!(
                "expected a proof term, found {}",
                other.describe()
            ))),
        }
    }
}

/// Parses a complete proof term; the whole input must be consumed.
pub fn parse_term(src: &str, sig: &Signature) -> Result<ProofTerm, ParseError> {
    let mut p = Parser::new(src, sig)?;
    let t = p.parse_term()?;
    if !p.at_eof() {
        return Err(p.error_here(format!("unexpected {}", p.peek().describe())));
    }
    Ok(t)
}

/// Parses a complete formula; the whole input must be consumed.
pub fn parse_formula(src: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src, sig)?;
    let f = p.parse_formula()?;
    if !p.at_eof() {
        return Err(p.error_here(format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}

/// Parses a signature file: one declaration per line, `constant NAME`,
/// `function NAME ARITY` or `predicate NAME ARITY`. Declarations extend
/// `base`.
pub fn parse_signature(src: &str, mut base: Signature) -> Result<Signature, ParseError> {
    for (lineno, raw) in src.lines().enumerate() {
        let line = match raw.find("--") {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut words = line.split_whitespace();
        let Some(kind) = words.next() else { continue };
        let err = |message: String| ParseError {
            line: lineno + 1,
            col: 1,
            message,
        };
        let name = words
            .next()
            .ok_or_else(|| err(format!("`{kind}` needs a name")))?;
        let result = match kind {
            "constant" => base.add_constant(name),
            "function" | "predicate" => {
                let arity: usize = words
                    .next()
                    .ok_or_else(|| err(format!("`{kind} {name}` needs an arity")))?
                    .parse()
                    .map_err(|_| err(format!("bad arity for `{name}`")))?;
                if kind == "function" {
                    base.add_function(name, arity)
                } else {
                    base.add_predicate(name, arity)
                }
            }
            other => return Err(err(format!("unknown declaration `{other}`"))),
        };
        result.map_err(|e| err(e.to_string()))?;
        if let Some(extra) = words.next() {
            return Err(err(format!("unexpected `{extra}`")));
        }
    }
    Ok(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::alpha_eq_term;

    fn sig() -> Signature {
        Signature::standard()
    }

    fn roundtrip_term(src: &str) {
        let s = sig();
        let t = parse_term(src, &s).unwrap();
        let printed = t.to_string();
        let back = parse_term(&printed, &s).unwrap();
        assert!(
            alpha_eq_term(&t, &back),
            "round trip failed:\n  input: {src}\n  print: {printed}"
        );
        // Printing is canonical: a second round trip is the identity.
        assert_eq!(printed, back.to_string());
    }

    #[test]
    fn parses_spec_examples() {
        let s = sig();
        let id = parse_term("fun x : P(c0) => x", &s).unwrap();
        assert_eq!(id.to_string(), "fun x : P(c0) => x");

        let herb = parse_term(
            "(wit c1 a) par a ((wit c0 (fun x : P(c0) => x)))",
            &s,
        )
        .unwrap();
        match &herb {
            ProofTerm::Par { comm, left, right, .. } => {
                assert_eq!(comm, "a");
                assert!(matches!(**left, ProofTerm::Witness { .. }));
                assert!(matches!(**right, ProofTerm::Witness { .. }));
            }
            other => panic!("expected par, got {other:?}"),
        }

        let f = parse_formula("forall a. exists b. R(a, b)", &s).unwrap();
        assert_eq!(f.to_string(), "forall a. exists b. R(a, b)");
    }

    #[test]
    fn negation_expands_at_parse_time() {
        let s = sig();
        let f = parse_formula("~P(c0)", &s).unwrap();
        assert_eq!(f, Formula::neg(Formula::Atom("P".into(), vec![IndTerm::Const("c0".into())])));
        assert_eq!(f.to_string(), "P(c0) -> bot");
    }

    #[test]
    fn second_order_exists_expands() {
        let s = sig();
        let f = parse_formula("Exists X. X(c0)", &s).unwrap();
        let expected = parse_formula("Forall Y. (Forall X. X(c0) -> Y(c0)) -> Y(c0)", &s).unwrap();
        assert!(f.alpha_eq(&expected));
    }

    #[test]
    fn arity_errors_carry_location() {
        let s = sig();
        let err = parse_formula("P(c0, c1)", &s).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("arity"));
    }

    #[test]
    fn term_round_trips() {
        for src in [
            "fun x => x",
            "fun x : P(c0) => x",
            "(fun x => x) z0",
            "f x y",
            "f (x y)",
            "x u pi0",
            "<u, v> pi1",
            "inj0(x) [case x0 => x0, x1 => w]",
            "inj1[P(c0) | Q(c0)](q)",
            "wit c1 a par a wit c0 (fun x : P(c0) => x)",
            "a ((fun x => x) z0) par a (a z1)",
            "u par[a : P(c0) -> Q(c0)] w",
            "efq[P(c0)](x)",
            "abort[(P(c0) -> P(c0)) -> Q(c0) -> Q(c0)] (fun x : P(c0) => x)",
            "ifun b => wit[exists b2. P(b2)] b x",
            "u @ c0 @ f(c1)",
            "Fun X => fun x : X(c0) => x",
            "t @ {b. P(b) -> Q(b)}",
            "u [excase (b, x : P(b)) => fun y : Q(c0) => y]",
            "x [case y => y par b z, w => w]",
        ] {
            roundtrip_term(src);
        }
    }

    #[test]
    fn formula_round_trips() {
        let s = sig();
        for src in [
            "P(c0) -> Q(c0) -> P(c0)",
            "(P(c0) -> Q(c0)) | (Q(c0) -> P(c0))",
            "P(c0) & Q(c0) | R(c0, c1)",
            "forall a. P(a) -> exists b. R(a, b)",
            "(forall a. P(a)) -> bot",
            "Forall X. X(c0) -> X(f(c0))",
        ] {
            let f = parse_formula(src, &s).unwrap();
            let printed = f.to_string();
            let back = parse_formula(&printed, &s).unwrap();
            assert!(f.alpha_eq(&back), "round trip failed for {src}");
            assert_eq!(printed, back.to_string());
        }
    }

    #[test]
    fn signature_file_extends_base() {
        let src = "-- extra symbols\nconstant c3\nfunction g 2\npredicate S 0\n";
        let s = parse_signature(src, Signature::standard()).unwrap();
        assert!(s.is_constant("c3"));
        assert_eq!(s.function_arity("g"), Some(2));
        assert_eq!(s.predicate_arity("S"), Some(0));
        assert!(s.is_constant("c0"));
    }

    #[test]
    fn unconsumed_input_is_an_error() {
        let s = sig();
        assert!(parse_term("x )", &s).is_err());
    }
}
