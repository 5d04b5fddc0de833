//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula    ::= disj ( "->" formula )?
//! disj       ::= conj ( "|" conj )*
//! conj       ::= unary ( "&" unary )*
//! unary      ::= "!" unary | binder | primary
//! binder     ::= ("all" | "ex") ident ( ","? ident )* "." formula
//!              | ("EX2" | "ALL2") ident "/" number ( "inj" | "fun" )? "." formula
//!              | ("EXINJ" | "EXFUN") ident "." formula
//! primary    ::= "true" | "false" | "(" formula ")" | atom
//! atom       ::= ("BIT" | "suc") "(" term "," term ")"
//!              | ident "(" term ( "," term )* ")"
//!              | term ( "=" | "!=" | "<=" | "<" ) term
//! term       ::= "0" | "max" | ident | ident "(" term ")"
//! ```
//!
//! `!` binds tighter than `&`, which binds tighter than `|`; `->` is
//! right-associative and binders extend as far right as possible. `#` starts
//! a comment running to the end of the line.

use alloc::{
    boxed::Box,
    string::{String, ToString},
    sync::Arc,
    vec,
    vec::Vec,
};
use core::fmt;

use super::{Connective, Formula, FunctionKind, NumericOp, Quantifier, SoRange, Term};
use crate::model::{Vocabulary, KEYWORDS};

/// Byte offset plus 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: Position,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { name: String, pos: Position },
    #[error("`{name}` at {pos} has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        pos: Position,
    },
    #[error("unbound variable `{name}` at {pos}")]
    UnboundVariable { name: String, pos: Position },
    #[error("`{name}` at {pos} is reserved for generated variables")]
    ReservedName { name: String, pos: Position },
    #[error("binder at {pos} reuses the vocabulary symbol `{name}`")]
    ShadowedSymbol { name: String, pos: Position },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::ArityMismatch { pos, .. }
            | ParseError::UnboundVariable { pos, .. }
            | ParseError::ReservedName { pos, .. }
            | ParseError::ShadowedSymbol { pos, .. } => *pos,
        }
    }

    /// Shifts the reported position by the location of an embedded formula.
    pub fn shifted(mut self, base: Position) -> Self {
        let pos = match &mut self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::ArityMismatch { pos, .. }
            | ParseError::UnboundVariable { pos, .. }
            | ParseError::ReservedName { pos, .. }
            | ParseError::ShadowedSymbol { pos, .. } => pos,
        };
        if pos.line == 1 {
            pos.column += base.column - 1;
        }
        pos.line += base.line - 1;
        pos.offset += base.offset;
        self
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Reject free first-order variables.
    pub closed: bool,
    /// Accept names in the generated-variable namespace (`_v0`, ...), e.g.
    /// when reading back printed output of the toolkit itself.
    pub allow_reserved: bool,
}

/// Parses a formula over `vocab`; free variables are allowed.
pub fn parse_formula(text: &str, vocab: &Arc<Vocabulary>) -> Result<Formula, ParseError> {
    parse_with(text, vocab, ParseOptions::default())
}

/// Parses a sentence over `vocab`; free variables are rejected.
pub fn parse_sentence(text: &str, vocab: &Arc<Vocabulary>) -> Result<Formula, ParseError> {
    parse_with(
        text,
        vocab,
        ParseOptions {
            closed: true,
            ..ParseOptions::default()
        },
    )
}

pub fn parse_with(
    text: &str,
    vocab: &Arc<Vocabulary>,
    options: ParseOptions,
) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        text,
        tokens,
        at: 0,
        vocab,
        options,
        scope: Vec::new(),
    };
    let f = p.formula()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(f)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Slash,
    Not,
    And,
    Or,
    Arrow,
    Eq,
    Neq,
    Le,
    Lt,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Not => f.write_str("`!`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Neq => f.write_str("`!=`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn position(text: &str, offset: usize) -> Position {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.chars().count(), |i| before[i + 1..].chars().count())
        + 1;
    Position {
        offset,
        line,
        column,
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let single = |t: Tok| (t, i);
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    chars.next();
                }
            }
            '(' | ')' | ',' | '.' | '/' | '&' | '|' | '~' | '=' | '¬' | '∧' | '∨' | '→' | '≤'
            | '≠' => {
                chars.next();
                out.push(single(match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '/' => Tok::Slash,
                    '&' | '∧' => Tok::And,
                    '|' | '∨' => Tok::Or,
                    '~' | '¬' => Tok::Not,
                    '=' => Tok::Eq,
                    '→' => Tok::Arrow,
                    '≤' => Tok::Le,
                    _ => Tok::Neq,
                }));
            }
            '!' => {
                chars.next();
                if chars.peek().is_some_and(|&(_, c)| c == '=') {
                    chars.next();
                    out.push(single(Tok::Neq));
                } else {
                    out.push(single(Tok::Not));
                }
            }
            '<' => {
                chars.next();
                if chars.peek().is_some_and(|&(_, c)| c == '=') {
                    chars.next();
                    out.push(single(Tok::Le));
                } else {
                    out.push(single(Tok::Lt));
                }
            }
            '-' => {
                chars.next();
                if chars.peek().is_some_and(|&(_, c)| c == '>') {
                    chars.next();
                    out.push(single(Tok::Arrow));
                } else {
                    return Err(ParseError::Syntax {
                        pos: position(text, i),
                        expected: vec!["`->`".into()],
                        found: "`-`".into(),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    chars.next();
                }
                let n = text[i..end].parse().map_err(|_| ParseError::Syntax {
                    pos: position(text, i),
                    expected: vec!["a number".into()],
                    found: text[i..end].to_string(),
                })?;
                out.push((Tok::Number(n), i));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_' || d == '\'') {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                out.push((Tok::Ident(text[i..end].to_string()), i));
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: position(text, i),
                    expected: vec!["a formula".into()],
                    found: alloc::format!("{other:?}"),
                })
            }
        }
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

#[derive(Debug, Clone)]
enum Binding {
    Fo(String),
    So(String, usize),
    Fun(String),
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<(Tok, usize)>,
    at: usize,
    vocab: &'a Arc<Vocabulary>,
    options: ParseOptions,
    scope: Vec<Binding>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.at + ahead).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn pos(&self) -> Position {
        position(self.text, self.tokens[self.at].1)
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[what])
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn lookup(&self, name: &str) -> Option<&Binding> {
        self.scope.iter().rev().find(|b| match b {
            Binding::Fo(v) | Binding::So(v, _) | Binding::Fun(v) => v == name,
        })
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                if name.starts_with('_') && !self.options.allow_reserved {
                    return Err(ParseError::ReservedName { name, pos });
                }
                if self.vocab.has_symbol(&name) {
                    return Err(ParseError::ShadowedSymbol { name, pos });
                }
                self.bump();
                Ok(name)
            }
            _ => self.error(&["a variable name"]),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::Binary(
                Connective::Implies,
                Box::new(lhs),
                Box::new(rhs),
            ));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if let Tok::Ident(word) = self.peek() {
            match word.as_str() {
                "all" | "ex" => return self.fo_binder(),
                "EX2" | "ALL2" => return self.so_binder(),
                "EXINJ" | "EXFUN" => return self.function_binder(),
                _ => {}
            }
        }
        self.primary()
    }

    fn fo_binder(&mut self) -> Result<Formula, ParseError> {
        let quantifier = match self.bump() {
            Tok::Ident(w) if w == "all" => Quantifier::Forall,
            _ => Quantifier::Exists,
        };
        let mut vars = vec![self.binder_name()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                    vars.push(self.binder_name()?);
                }
                Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => vars.push(self.binder_name()?),
                _ => break,
            }
        }
        self.expect(Tok::Dot, "`.`")?;
        let depth = self.scope.len();
        self.scope.extend(vars.iter().cloned().map(Binding::Fo));
        let body = self.formula();
        self.scope.truncate(depth);
        let mut body = body?;
        for v in vars.into_iter().rev() {
            body = Formula::Quant(quantifier, v, Box::new(body));
        }
        Ok(body)
    }

    fn so_binder(&mut self) -> Result<Formula, ParseError> {
        let quantifier = match self.bump() {
            Tok::Ident(w) if w == "ALL2" => Quantifier::Forall,
            _ => Quantifier::Exists,
        };
        let var = self.binder_name()?;
        self.expect(Tok::Slash, "`/`")?;
        let arity_pos = self.pos();
        let arity = match self.bump() {
            Tok::Number(n) if n > 0 => n,
            _ => {
                self.at -= 1;
                return self.error(&["a positive arity"]);
            }
        };
        let range = if self.is_keyword("inj") {
            self.bump();
            SoRange::Injections
        } else if self.is_keyword("fun") {
            self.bump();
            SoRange::Functions
        } else {
            SoRange::Relations
        };
        if range != SoRange::Relations && arity != 2 {
            return Err(ParseError::ArityMismatch {
                name: var,
                expected: 2,
                found: arity,
                pos: arity_pos,
            });
        }
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push(Binding::So(var.clone(), arity));
        let body = self.formula();
        self.scope.pop();
        Ok(Formula::SoQuant {
            quantifier,
            var,
            arity,
            range,
            body: Box::new(body?),
        })
    }

    fn function_binder(&mut self) -> Result<Formula, ParseError> {
        let kind = match self.bump() {
            Tok::Ident(w) if w == "EXINJ" => FunctionKind::Injective,
            _ => FunctionKind::Total,
        };
        let var = self.binder_name()?;
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push(Binding::Fun(var.clone()));
        let body = self.formula();
        self.scope.pop();
        Ok(Formula::FunctionBinder {
            kind,
            var,
            body: Box::new(body?),
        })
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(w) if w == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(w) if w == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(w) if (w == "BIT" || w == "suc") && *self.peek_at(1) == Tok::LParen => {
                let op = if w == "BIT" {
                    NumericOp::Bit
                } else {
                    NumericOp::Suc
                };
                let pos = self.pos();
                self.bump();
                let args = self.arguments()?;
                if args.len() != 2 {
                    return Err(ParseError::ArityMismatch {
                        name: w,
                        expected: 2,
                        found: args.len(),
                        pos,
                    });
                }
                let mut it = args.into_iter();
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                Ok(Formula::Numeric(op, a, b))
            }
            Tok::Ident(name)
                if *self.peek_at(1) == Tok::LParen && !KEYWORDS.contains(&name.as_str()) =>
            {
                let pos = self.pos();
                match self.lookup(&name).cloned() {
                    Some(Binding::So(_, arity)) => {
                        self.bump();
                        let args = self.arguments()?;
                        check_arity(&name, arity, args.len(), pos)?;
                        Ok(Formula::SoAtom(name, args))
                    }
                    Some(Binding::Fun(_)) => self.comparison(),
                    Some(Binding::Fo(_)) => Err(ParseError::UnknownSymbol { name, pos }),
                    None => match self.vocab.arity(&name) {
                        Some(arity) => {
                            self.bump();
                            let args = self.arguments()?;
                            check_arity(&name, arity, args.len(), pos)?;
                            Ok(Formula::Rel(name, args))
                        }
                        None if self.vocab.constant_index(&name).is_some() => {
                            Err(ParseError::ArityMismatch {
                                name,
                                expected: 0,
                                found: 1,
                                pos,
                            })
                        }
                        None => Err(ParseError::UnknownSymbol { name, pos }),
                    },
                }
            }
            Tok::Ident(_) | Tok::Number(_) => self.comparison(),
            _ => self.error(&["a formula"]),
        }
    }

    fn comparison(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        let op = self.bump();
        let rhs = |p: &mut Self| p.term();
        match op {
            Tok::Eq => Ok(Formula::Numeric(NumericOp::Eq, lhs, rhs(self)?)),
            Tok::Neq => Ok(Formula::not(Formula::Numeric(
                NumericOp::Eq,
                lhs,
                rhs(self)?,
            ))),
            Tok::Le => Ok(Formula::Numeric(NumericOp::Le, lhs, rhs(self)?)),
            Tok::Lt => Ok(Formula::Numeric(NumericOp::Lt, lhs, rhs(self)?)),
            _ => {
                self.at -= 1;
                self.error(&["`=`", "`!=`", "`<=`", "`<`"])
            }
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(0) => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::Ident(w) if w == "max" => {
                self.bump();
                Ok(Term::Max)
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                if name.starts_with('_') && !self.options.allow_reserved {
                    return Err(ParseError::ReservedName { name, pos });
                }
                self.bump();
                if *self.peek() == Tok::LParen {
                    return match self.lookup(&name) {
                        Some(Binding::Fun(_)) => {
                            let args = self.arguments()?;
                            check_arity(&name, 1, args.len(), pos)?;
                            Ok(Term::Apply(
                                name,
                                Box::new(args.into_iter().next().unwrap()),
                            ))
                        }
                        _ => Err(ParseError::UnknownSymbol { name, pos }),
                    };
                }
                match self.lookup(&name) {
                    Some(Binding::Fo(_)) => Ok(Term::Var(name)),
                    Some(Binding::So(_, arity)) => Err(ParseError::ArityMismatch {
                        name: name.clone(),
                        expected: *arity,
                        found: 0,
                        pos,
                    }),
                    Some(Binding::Fun(_)) => Err(ParseError::ArityMismatch {
                        name,
                        expected: 1,
                        found: 0,
                        pos,
                    }),
                    None if self.vocab.constant_index(&name).is_some() => Ok(Term::Const(name)),
                    None if self.vocab.relation_index(&name).is_some() => {
                        Err(ParseError::ArityMismatch {
                            expected: self.vocab.arity(&name).unwrap_or(0),
                            name,
                            found: 0,
                            pos,
                        })
                    }
                    None if self.options.closed => Err(ParseError::UnboundVariable { name, pos }),
                    None => Ok(Term::Var(name)),
                }
            }
            _ => self.error(&["a term"]),
        }
    }
}

fn check_arity(name: &str, expected: usize, found: usize, pos: Position) -> Result<(), ParseError> {
    if expected == found {
        Ok(())
    } else {
        Err(ParseError::ArityMismatch {
            name: name.to_string(),
            expected,
            found,
            pos,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph() -> Arc<Vocabulary> {
        Vocabulary::graph()
    }

    #[test]
    fn quantifier_syntax() {
        let f = parse_formula("all x. ex y. suc(x,y) | x = max", &graph()).unwrap();
        let Formula::Quant(Quantifier::Forall, x, body) = f else {
            panic!()
        };
        assert_eq!(x, "x");
        let Formula::Quant(Quantifier::Exists, y, body) = *body else {
            panic!()
        };
        assert_eq!(y, "y");
        assert!(matches!(*body, Formula::Binary(Connective::Or, ..)));
    }

    #[test]
    fn independent_set_sentence() {
        let text = "EXINJ f. all x y. (x != y & f(x) <= k & f(y) <= k -> !E(x,y))";
        let f = parse_sentence(text, &graph()).unwrap();
        let Formula::FunctionBinder { kind, var, .. } = &f else {
            panic!()
        };
        assert_eq!(*kind, FunctionKind::Injective);
        assert_eq!(var, "f");
        assert!(f.has_sugar());
    }

    #[test]
    fn arity_errors() {
        let err = parse_formula("E(x)", &graph()).unwrap_err();
        assert!(matches!(
            err,
            ParseError::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
        let err = parse_formula("EX2 R/2. R(x)", &graph()).unwrap_err();
        assert!(matches!(
            err,
            ParseError::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
        let err = parse_formula("BIT(x)", &graph()).unwrap_err();
        assert!(matches!(err, ParseError::ArityMismatch { .. }));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_formula("all x. E(x,x) &", &graph()).unwrap_err();
        let ParseError::Syntax { pos, .. } = err else {
            panic!("{err:?}")
        };
        assert_eq!(pos.offset, 15);
        assert_eq!((pos.line, pos.column), (1, 16));
        let err = parse_formula("x =\n  & y", &graph()).unwrap_err();
        assert_eq!(err.position().line, 2);
        assert_eq!(err.position().column, 3);
    }

    #[test]
    fn unknown_and_unbound() {
        assert!(matches!(
            parse_formula("R(x)", &graph()),
            Err(ParseError::UnknownSymbol { .. })
        ));
        assert!(matches!(
            parse_sentence("ex x. x = y", &graph()),
            Err(ParseError::UnboundVariable { .. })
        ));
        assert!(parse_formula("ex x. x = y", &graph()).is_ok());
    }

    #[test]
    fn reserved_and_shadowing() {
        assert!(matches!(
            parse_formula("_v0 = 0", &graph()),
            Err(ParseError::ReservedName { .. })
        ));
        let opts = ParseOptions {
            allow_reserved: true,
            ..Default::default()
        };
        assert!(parse_with("_v0 = 0", &graph(), opts).is_ok());
        assert!(matches!(
            parse_formula("ex k. k = 0", &graph()),
            Err(ParseError::ShadowedSymbol { .. })
        ));
    }

    #[test]
    fn precedence() {
        let f = parse_formula("a = 0 | b = 0 & c = 0 -> d = 0 -> e = 0", &graph()).unwrap();
        let Formula::Binary(Connective::Implies, lhs, rhs) = f else {
            panic!()
        };
        assert!(
            matches!(*lhs, Formula::Binary(Connective::Or, _, ref r) if matches!(**r, Formula::Binary(Connective::And, ..)))
        );
        assert!(matches!(*rhs, Formula::Binary(Connective::Implies, ..)));
        let f = parse_formula("!x = 0 & y = 0", &graph()).unwrap();
        assert!(
            matches!(f, Formula::Binary(Connective::And, ref l, _) if matches!(**l, Formula::Not(_)))
        );
        let f = parse_formula("x = 0 & ex y. y = 0 | y = max", &graph()).unwrap();
        let Formula::Binary(Connective::And, _, r) = f else {
            panic!()
        };
        assert!(
            matches!(*r, Formula::Quant(_, _, ref b) if matches!(**b, Formula::Binary(Connective::Or, ..)))
        );
    }

    #[test]
    fn range_hints() {
        let f = parse_sentence("EX2 f/2 inj. f(0,0)", &graph()).unwrap();
        assert!(matches!(
            f,
            Formula::SoQuant {
                range: SoRange::Injections,
                ..
            }
        ));
        assert!(parse_sentence("EX2 f/1 inj. f(0)", &graph()).is_err());
    }

    #[test]
    fn unicode_connectives() {
        let a = parse_formula("¬E(x,y) ∧ x ≤ y ∨ x ≠ y → true", &graph()).unwrap();
        let b = parse_formula("!E(x,y) & x <= y | x != y -> true", &graph()).unwrap();
        assert_eq!(a, b);
    }
}
