//! Text formats for vocabularies, structures and queries.
//!
//! ```text
//! document   ::= item*
//! item       ::= vocab | struct | query
//! vocab      ::= "vocab" ident "{" ( "rel" ident "/" number ";" | "const" ident ";" )* "}"
//! struct     ::= "struct" ident ":" ident "{" "size" "=" number ";" ( ident "=" value ";" )* "}"
//! value      ::= number | "{" ( tuple ( "," tuple )* )? "}"
//! tuple      ::= "(" number ( "," number )* ")"
//! query      ::= "query" ident ":" ident "->" ident "arity" number "{" component* "}"
//! component  ::= head ":" formula ";"
//! head       ::= ( "universe" | ident ) ( "(" ident ( "," ident )* ")" )?
//! ```
//!
//! `#` starts a comment running to the end of the line. Vocabulary names
//! resolve against earlier declarations and the built-ins `graph`, `sgi` and
//! `string`. Component formulas use the formula grammar over the source
//! vocabulary. Omitted heads default to `x1..xk` for the universe and
//! constants and to `x1..xk, y1..yk, ...` for relations.

use std::collections::BTreeMap;
use std::sync::Arc;

use fopkit_core::canonical;
use fopkit_core::logic::{parse_formula, ParseError, Position};
use fopkit_core::model::{make_structure, ModelError};
use fopkit_core::query::{Component, QueryError};
use fopkit_core::{Query, Structure, Vocabulary};

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Position,
        expected: String,
        found: String,
    },
    #[error("{pos}: unknown vocabulary `{name}`")]
    UnknownVocabulary { pos: Position, name: String },
    #[error("{pos}: vocabulary `{name}` redeclared differently")]
    Redeclared { pos: Position, name: String },
    #[error(transparent)]
    Formula(#[from] ParseError),
    #[error("{pos}: {source}")]
    Model { pos: Position, source: ModelError },
    #[error("{pos}: {source}")]
    Query { pos: Position, source: QueryError },
}

/// Known vocabularies by name.
#[derive(Debug, Clone)]
pub struct Vocabularies(BTreeMap<String, Arc<Vocabulary>>);

impl Default for Vocabularies {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for name in ["graph", "sgi", "string"] {
            map.insert(
                name.to_string(),
                canonical::vocabulary(name).expect("built-in vocabulary"),
            );
        }
        Vocabularies(map)
    }
}

impl Vocabularies {
    pub fn get(&self, name: &str) -> Option<&Arc<Vocabulary>> {
        self.0.get(name)
    }

    /// Adds a vocabulary; an identical redeclaration is accepted.
    pub fn insert(&mut self, vocab: Arc<Vocabulary>) -> Result<(), Arc<Vocabulary>> {
        match self.0.get(vocab.name()) {
            Some(old) if **old != *vocab => Err(old.clone()),
            _ => {
                self.0.insert(vocab.name().to_string(), vocab);
                Ok(())
            }
        }
    }
}

/// Everything declared in one file, in order of appearance.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub vocabularies: Vec<Arc<Vocabulary>>,
    pub structures: Vec<(String, Structure)>,
    pub queries: Vec<Query>,
}

/// Parses a document. Vocabulary declarations are added to `known`.
pub fn parse_document(text: &str, known: &mut Vocabularies) -> Result<Document, TextError> {
    let mut c = Cursor::new(text);
    let mut doc = Document::default();
    loop {
        c.skip_space();
        if c.at_end() {
            return Ok(doc);
        }
        let pos = c.position();
        match c.ident()?.as_str() {
            "vocab" => {
                let v = vocab_body(&mut c, pos)?;
                known.insert(v.clone()).map_err(|_| TextError::Redeclared {
                    pos,
                    name: v.name().to_string(),
                })?;
                doc.vocabularies.push(v);
            }
            "struct" => doc.structures.push(struct_body(&mut c, known)?),
            "query" => doc.queries.push(query_body(&mut c, known)?),
            other => {
                return Err(TextError::Syntax {
                    pos,
                    expected: "`vocab`, `struct` or `query`".into(),
                    found: format!("`{other}`"),
                })
            }
        }
    }
}

fn vocab_body(c: &mut Cursor, pos: Position) -> Result<Arc<Vocabulary>, TextError> {
    let name = c.ident()?;
    c.expect("{")?;
    let (mut rels, mut consts) = (Vec::new(), Vec::new());
    while !c.eat("}") {
        match c.ident()?.as_str() {
            "rel" => {
                let sym = c.ident()?;
                c.expect("/")?;
                rels.push((sym, c.number()?));
            }
            "const" => consts.push(c.ident()?),
            other => {
                return Err(c.error_at(c.last, "`rel`, `const` or `}`", &format!("`{other}`")))
            }
        }
        c.expect(";")?;
    }
    Vocabulary::new(&name, rels, consts).map_err(|source| TextError::Model { pos, source })
}

fn resolve(c: &mut Cursor, known: &Vocabularies) -> Result<Arc<Vocabulary>, TextError> {
    let pos = c.position();
    let name = c.ident()?;
    known
        .get(&name)
        .cloned()
        .ok_or(TextError::UnknownVocabulary { pos, name })
}

enum Value {
    Number(usize),
    Set(Vec<Vec<usize>>),
}

fn struct_body(c: &mut Cursor, known: &Vocabularies) -> Result<(String, Structure), TextError> {
    let pos = c.position();
    let name = c.ident()?;
    c.expect(":")?;
    let vocab = resolve(c, known)?;
    c.expect("{")?;
    let size_pos = c.position();
    if c.ident()? != "size" {
        return Err(c.error_at(size_pos, "`size`", "another symbol"));
    }
    c.expect("=")?;
    let size = c.number()?;
    c.expect(";")?;
    let mut values = Vec::new();
    while !c.eat("}") {
        let sym = c.ident()?;
        c.expect("=")?;
        let value = if c.eat("{") {
            let mut tuples = Vec::new();
            if !c.eat("}") {
                loop {
                    c.expect("(")?;
                    let mut t = vec![c.number()?];
                    while c.eat(",") {
                        t.push(c.number()?);
                    }
                    c.expect(")")?;
                    tuples.push(t);
                    if c.eat("}") {
                        break;
                    }
                    c.expect(",")?;
                }
            }
            Value::Set(tuples)
        } else {
            Value::Number(c.number()?)
        };
        c.expect(";")?;
        values.push((sym, value));
    }
    let mut rels = Vec::new();
    let mut consts = Vec::new();
    for (sym, v) in values {
        match v {
            Value::Set(t) => rels.push((sym, t)),
            Value::Number(n) => consts.push((sym, n)),
        }
    }
    let rels: Vec<(&str, Vec<Vec<usize>>)> =
        rels.iter().map(|(s, t)| (s.as_str(), t.clone())).collect();
    let consts: Vec<(&str, usize)> = consts.iter().map(|(s, n)| (s.as_str(), *n)).collect();
    let s = make_structure(&vocab, size, rels, consts)
        .map_err(|source| TextError::Model { pos, source })?;
    Ok((name, s))
}

/// Parameters used when a component head omits them.
pub fn default_head(symbol_arity: usize, query_arity: usize) -> Vec<String> {
    const LETTERS: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
    (0..symbol_arity)
        .flat_map(|i| {
            (1..=query_arity).map(move |j| match LETTERS.get(i) {
                Some(l) => format!("{l}{j}"),
                None => format!("p{i}_{j}"),
            })
        })
        .collect()
}

fn query_body(c: &mut Cursor, known: &Vocabularies) -> Result<Query, TextError> {
    let pos = c.position();
    let name = c.ident()?;
    c.expect(":")?;
    let source = resolve(c, known)?;
    c.expect("->")?;
    let target = resolve(c, known)?;
    let arity_pos = c.position();
    if c.ident()? != "arity" {
        return Err(c.error_at(arity_pos, "`arity`", "another word"));
    }
    let k = c.number()?;
    c.expect("{")?;
    let (mut universe, mut rels, mut consts) = (None, Vec::new(), Vec::new());
    while !c.eat("}") {
        let head_pos = c.position();
        let sym = c.ident()?;
        let params = if c.eat("(") {
            let mut ps = vec![c.ident()?];
            while c.eat(",") {
                ps.push(c.ident()?);
            }
            c.expect(")")?;
            Some(ps)
        } else {
            None
        };
        c.expect(":")?;
        let (base, text) = c.until_semicolon()?;
        let formula = parse_formula(text, &source).map_err(|e| e.shifted(base))?;
        if sym == "universe" {
            let params = params.unwrap_or_else(|| default_head(1, k));
            if universe.replace(Component::new(&params, formula)).is_some() {
                return Err(TextError::Query {
                    pos: head_pos,
                    source: QueryError::DuplicateComponent(sym),
                });
            }
        } else if let Some(a) = target.arity(&sym) {
            let params = params.unwrap_or_else(|| default_head(a, k));
            rels.push((sym, Component::new(&params, formula)));
        } else {
            let params = params.unwrap_or_else(|| default_head(1, k));
            consts.push((sym, Component::new(&params, formula)));
        }
    }
    let universe = universe.ok_or(TextError::Query {
        pos,
        source: QueryError::MissingComponent("universe".into()),
    })?;
    Query::new(&name, &source, &target, k, universe, rels, consts)
        .map_err(|source| TextError::Query { pos, source })
}

struct Cursor<'a> {
    text: &'a str,
    at: usize,
    /// Start of the most recent token.
    last: Position,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text,
            at: 0,
            last: Position {
                offset: 0,
                line: 1,
                column: 1,
            },
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.at..]
    }

    fn at_end(&self) -> bool {
        self.at == self.text.len()
    }

    fn position_of(&self, offset: usize) -> Position {
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
        Position {
            offset,
            line,
            column,
        }
    }

    fn position(&mut self) -> Position {
        self.skip_space();
        self.position_of(self.at)
    }

    fn skip_space(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.at += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.at += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn found(&self) -> String {
        match self.rest().chars().next() {
            None => "end of input".into(),
            Some(ch) => format!("`{ch}`"),
        }
    }

    fn error_at(&self, pos: Position, expected: &str, found: &str) -> TextError {
        TextError::Syntax {
            pos,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn error(&mut self, expected: &str) -> TextError {
        let pos = self.position();
        let found = self.found();
        self.error_at(pos, expected, &found)
    }

    fn eat(&mut self, token: &str) -> bool {
        self.last = self.position();
        if self.rest().starts_with(token) {
            self.at += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), TextError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("`{token}`")))
        }
    }

    fn ident(&mut self) -> Result<String, TextError> {
        self.last = self.position();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, ch)| {
                !(ch.is_ascii_alphabetic()
                    || i > 0 && (ch.is_ascii_digit() || ch == '_' || ch == '\''))
            })
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("a name"));
        }
        self.at += len;
        Ok(rest[..len].to_string())
    }

    fn number(&mut self) -> Result<usize, TextError> {
        self.last = self.position();
        let rest = self.rest();
        let len = rest
            .find(|ch: char| !ch.is_ascii_digit())
            .unwrap_or(rest.len());
        match rest[..len].parse() {
            Ok(n) => {
                self.at += len;
                Ok(n)
            }
            Err(_) => Err(self.error("a number")),
        }
    }

    /// Raw text up to the next `;` outside comments, with its start position.
    fn until_semicolon(&mut self) -> Result<(Position, &'a str), TextError> {
        let start = self.position();
        let rest = self.rest();
        let mut in_comment = false;
        for (i, ch) in rest.char_indices() {
            match ch {
                '#' => in_comment = true,
                '\n' => in_comment = false,
                ';' if !in_comment => {
                    self.at += i + 1;
                    return Ok((start, &rest[..i]));
                }
                _ => {}
            }
        }
        self.at = self.text.len();
        Err(self.error("`;`"))
    }
}

/// `struct NAME : vocab { ... }` on one line.
pub fn print_structure(name: &str, s: &Structure) -> String {
    format!("struct {name} : {} {{ {s} }}", s.vocab().name())
}

/// The declaration of a vocabulary that is not built in, followed by a
/// newline; empty for built-ins.
pub fn vocabulary_preamble(vocab: &Vocabulary) -> String {
    match canonical::vocabulary(vocab.name()) {
        Some(v) if *v == *vocab => String::new(),
        _ => format!("{vocab}\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Document, TextError> {
        parse_document(text, &mut Vocabularies::default())
    }

    #[test]
    fn structure_round_trip() {
        let doc = parse("struct A : graph { size = 3; E = {(0,1),(1,0)}; k = 2; }").unwrap();
        let (name, s) = &doc.structures[0];
        assert_eq!(name, "A");
        assert_eq!(s.relation("E").unwrap().len(), 2);
        let printed = print_structure(name, s);
        assert_eq!(
            printed,
            "struct A : graph { size = 3; E = {(0,1),(1,0)}; k = 2; }"
        );
        assert_eq!(parse(&printed).unwrap().structures[0].1, *s);
    }

    #[test]
    fn declared_vocabularies_and_comments() {
        let text = "# a path\nvocab p { rel R/1; rel S/2; const c; }\nstruct B : p { size = 2; R = {(1)}; S = {}; c = 0; }";
        let mut known = Vocabularies::default();
        let doc = parse_document(text, &mut known).unwrap();
        assert_eq!(doc.vocabularies[0].name(), "p");
        assert!(known.get("p").is_some());
        assert_eq!(
            vocabulary_preamble(&doc.vocabularies[0]),
            "vocab p { rel R/1; rel S/2; const c; }\n"
        );
        assert!(matches!(
            parse("vocab graph { rel E/1; }"),
            Err(TextError::Redeclared { .. })
        ));
    }

    #[test]
    fn queries_with_and_without_heads() {
        let text = "query comp : graph -> graph arity 1 {\n  universe: true;\n  E(x1,y1): !E(x1,y1);\n  k: x1 = k;\n}";
        let q = parse(text).unwrap().queries.remove(0);
        let lib = canonical::Library::default()
            .query("fop_complement")
            .unwrap();
        assert_eq!(q.name(), "comp");
        assert_eq!(
            (q.universe(), q.relations(), q.constants()),
            (lib.universe(), lib.relations(), lib.constants())
        );
        let reparsed = parse(&q.to_string()).unwrap().queries.remove(0);
        assert_eq!(reparsed, q);
        let bare =
            parse("query c : graph -> graph arity 1 { universe: true; E: !E(x1,y1); k: x1 = k; }")
                .unwrap();
        assert_eq!(bare.queries[0].relation("E"), q.relation("E"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("struct A : graph { size = 3; E = {(0,1)} k = 2; }").unwrap_err();
        assert_eq!(e.to_string(), "1:42: expected `;`, found `k`");
        let e = parse("struct A : nope { size = 1; }").unwrap_err();
        assert!(matches!(e, TextError::UnknownVocabulary { .. }));
        let e = parse("query q : graph -> graph arity 1 {\n  universe: true;\n  E(x1,y1): E(x1);\n  k: x1 = k;\n}").unwrap_err();
        assert_eq!(e.to_string(), "`E` at 3:13 has arity 2, used with 1 arguments");
        let e = parse("struct A : graph { size = 2; E = {(0,5)}; k = 0; }").unwrap_err();
        assert!(matches!(e, TextError::Model { .. }));
    }
}
