//! The `.cmt` source format.
//!
//! ```text
//! obj X A B
//! gen alpha : X A -> A X
//! gen eta   : 1 -> B A          # the empty word is written 1
//! dia g     = (alpha ; id A X)
//! rule unit : (eta * id X) = (id X * eta)   # hypothetical, for shape only
//! ```
//!
//! Terms are `id <word>`, a generator or diagram name, `(t ; t)` for
//! sequential composition in diagram order and `(t * t)` for the tensor.
//! Binary operators always sit inside parentheses. Keywords (`obj gen dia
//! rule id`) are reserved; newlines carry no meaning.

use std::collections::HashMap;
use std::fmt;

use crate::moncat::{Diagram, ObjectWord, Signature, Slice};
use crate::rewrite::RewriteRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Typing,
    Duplicate,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Lexical => "lexical",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Typing => "typing",
            ErrorKind::Duplicate => "duplicate",
        }
    }
}

/// A located parse failure. Lines and columns start at 1; `expected` is
/// non-empty for syntax errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} error: {}",
            self.line,
            self.column,
            self.kind.as_str(),
            self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A parsed file: the signature (with its rules as equations) and the named
/// diagrams in declaration order.
#[derive(Clone, Debug)]
pub struct Document {
    pub signature: Signature,
    pub diagrams: Vec<(String, Diagram)>,
}

impl Document {
    pub fn diagram(&self, name: &str) -> Option<&Diagram> {
        self.diagrams.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// A named diagram, or the one-slice diagram of a generator.
    pub fn resolve(&self, name: &str) -> Option<Diagram> {
        self.diagram(name)
            .cloned()
            .or_else(|| self.signature.generator_named(name).ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Obj,
    Gen,
    Dia,
    Rule,
    Id,
    One,
    Colon,
    Arrow,
    Equals,
    LParen,
    RParen,
    Semi,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Obj => "`obj`".into(),
            Tok::Gen => "`gen`".into(),
            Tok::Dia => "`dia`".into(),
            Tok::Rule => "`rule`".into(),
            Tok::Id => "`id`".into(),
            Tok::One => "`1`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    word.push(c);
                    bump(&mut chars);
                }
                let tok = match word.as_str() {
                    "obj" => Tok::Obj,
                    "gen" => Tok::Gen,
                    "dia" => Tok::Dia,
                    "rule" => Tok::Rule,
                    "id" => Tok::Id,
                    _ => Tok::Ident(word),
                };
                out.push(Token {
                    tok,
                    line: l,
                    column: col,
                });
                continue;
            }
            '1' => Tok::One,
            ':' => Tok::Colon,
            '=' => Tok::Equals,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ';' => Tok::Semi,
            '*' => Tok::Star,
            '-' => {
                bump(&mut chars);
                if chars.peek() != Some(&'>') {
                    return Err(ParseError {
                        kind: ErrorKind::Lexical,
                        line: l,
                        column: col,
                        message: "`-` must be followed by `>`".into(),
                        expected: vec![],
                    });
                }
                bump(&mut chars);
                out.push(Token {
                    tok: Tok::Arrow,
                    line: l,
                    column: col,
                });
                continue;
            }
            other => {
                return Err(ParseError {
                    kind: ErrorKind::Lexical,
                    line: l,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                    expected: vec![],
                })
            }
        };
        bump(&mut chars);
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    sig: Signature,
    diagrams: Vec<(String, Diagram)>,
    dia_index: HashMap<String, usize>,
}

const TERM_START: &[&str] = &["`id`", "`(`", "a generator or diagram name"];
const STATEMENT_START: &[&str] = &["`obj`", "`gen`", "`dia`", "`rule`"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, kind: ErrorKind, message: String) -> ParseError {
        ParseError {
            kind,
            line: t.line,
            column: t.column,
            message,
            expected: vec![],
        }
    }

    fn unexpected(&self, t: &Token, expected: &[&str]) -> ParseError {
        ParseError {
            kind: ErrorKind::Syntax,
            line: t.line,
            column: t.column,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.unexpected(&t, &[&tok.describe()]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(self.unexpected(&t, &[what])),
        }
    }

    fn document(mut self) -> Result<Document, ParseError> {
        loop {
            let t = self.next();
            match t.tok {
                Tok::Eof => break,
                Tok::Obj => self.obj_statement()?,
                Tok::Gen => self.gen_statement()?,
                Tok::Dia => self.dia_statement()?,
                Tok::Rule => self.rule_statement()?,
                _ => return Err(self.unexpected(&t, STATEMENT_START)),
            }
        }
        Ok(Document {
            signature: self.sig,
            diagrams: self.diagrams,
        })
    }

    fn obj_statement(&mut self) -> Result<(), ParseError> {
        let mut any = false;
        while let Tok::Ident(name) = self.peek().tok.clone() {
            let t = self.next();
            if self.sig.add_object(&name).is_err() {
                return Err(self.error_at(&t, ErrorKind::Duplicate, format!("object `{name}` is already declared")));
            }
            any = true;
        }
        if !any {
            let t = self.peek().clone();
            return Err(self.unexpected(&t, &["an object name"]));
        }
        Ok(())
    }

    /// `1` or one or more object names.
    fn word(&mut self) -> Result<ObjectWord, ParseError> {
        if self.peek().tok == Tok::One {
            self.next();
            return Ok(ObjectWord::unit());
        }
        let mut ids = Vec::new();
        while let Tok::Ident(name) = self.peek().tok.clone() {
            let t = self.next();
            match self.sig.object(&name) {
                Some(id) => ids.push(id),
                None => return Err(self.error_at(&t, ErrorKind::Typing, format!("unknown object `{name}`"))),
            }
        }
        if ids.is_empty() {
            let t = self.peek().clone();
            return Err(self.unexpected(&t, &["`1`", "an object name"]));
        }
        Ok(ObjectWord::new(ids))
    }

    fn declared(&self, name: &str) -> bool {
        self.sig.gen(name).is_some() || self.dia_index.contains_key(name)
    }

    fn gen_statement(&mut self) -> Result<(), ParseError> {
        let (name, at) = self.ident("a generator name")?;
        if self.declared(&name) {
            return Err(self.error_at(&at, ErrorKind::Duplicate, format!("`{name}` is already declared")));
        }
        self.expect(Tok::Colon)?;
        let dom = self.word()?;
        self.expect(Tok::Arrow)?;
        let cod = self.word()?;
        self.sig
            .add_morphism(&name, dom, cod)
            .map_err(|e| self.error_at(&at, ErrorKind::Typing, self.sig.describe_error(&e)))?;
        Ok(())
    }

    fn dia_statement(&mut self) -> Result<(), ParseError> {
        let (name, at) = self.ident("a diagram name")?;
        if self.declared(&name) {
            return Err(self.error_at(&at, ErrorKind::Duplicate, format!("`{name}` is already declared")));
        }
        self.expect(Tok::Equals)?;
        let d = self.term()?;
        self.dia_index.insert(name.clone(), self.diagrams.len());
        self.diagrams.push((name, d));
        Ok(())
    }

    fn rule_statement(&mut self) -> Result<(), ParseError> {
        let (name, at) = self.ident("a rule name")?;
        if self.sig.equation(&name).is_some() {
            return Err(self.error_at(&at, ErrorKind::Duplicate, format!("rule `{name}` is already declared")));
        }
        self.expect(Tok::Colon)?;
        let lhs = self.term()?;
        self.expect(Tok::Equals)?;
        let rhs = self.term()?;
        let rule = RewriteRule::new(name, lhs, rhs)
            .map_err(|e| self.error_at(&at, ErrorKind::Typing, self.sig.describe_error(&e)))?;
        self.sig
            .add_equation(rule)
            .map_err(|e| self.error_at(&at, ErrorKind::Typing, self.sig.describe_error(&e)))?;
        Ok(())
    }

    fn term(&mut self) -> Result<Diagram, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Id => Ok(Diagram::identity(self.word()?)),
            Tok::Ident(name) => {
                if let Some(g) = self.sig.gen(name) {
                    Ok(self.sig.generator(g))
                } else if let Some(&i) = self.dia_index.get(name) {
                    Ok(self.diagrams[i].1.clone())
                } else {
                    Err(self.error_at(&t, ErrorKind::Typing, format!("unknown generator or diagram `{name}`")))
                }
            }
            Tok::LParen => {
                let left = self.term()?;
                let op = self.next();
                let d = match op.tok {
                    Tok::Semi => {
                        let right = self.term()?;
                        left.compose(&right).map_err(|_| {
                            self.error_at(
                                &op,
                                ErrorKind::Typing,
                                format!(
                                    "cannot compose: left side ends at [{}], right side starts at [{}] (slice {})",
                                    self.sig.render_word(left.output()),
                                    self.sig.render_word(right.input()),
                                    left.len()
                                ),
                            )
                        })?
                    }
                    Tok::Star => left.tensor(&self.term()?),
                    _ => return Err(self.unexpected(&op, &["`;`", "`*`"])),
                };
                self.expect(Tok::RParen)?;
                Ok(d)
            }
            _ => Err(self.unexpected(&t, TERM_START)),
        }
    }
}

/// Parse a `.cmt` source text.
pub fn parse(src: &str) -> Result<Document, ParseError> {
    let parser = Parser {
        toks: lex(src)?,
        pos: 0,
        sig: Signature::new(),
        diagrams: Vec::new(),
        dia_index: HashMap::new(),
    };
    parser.document()
}

fn print_slice(sig: &Signature, word: &ObjectWord, s: &Slice) -> String {
    let g = sig.morphism(s.gen);
    let left = word.range(0, s.offset);
    let right = word.range(s.offset + g.dom.len(), word.len());
    let mut t = g.name.clone();
    if !left.is_empty() {
        t = format!("(id {} * {t})", sig.render_word(&left));
    }
    if !right.is_empty() {
        t = format!("({t} * id {})", sig.render_word(&right));
    }
    t
}

/// A term denoting exactly `d`: whiskered slices composed left to right.
pub fn print_term(sig: &Signature, d: &Diagram) -> String {
    let words = d.words(sig);
    let mut parts = d.slices().iter().zip(&words).map(|(s, w)| print_slice(sig, w, s));
    match parts.next() {
        None => format!("id {}", sig.render_word(d.input())),
        Some(first) => parts.fold(first, |acc, p| format!("({acc} ; {p})")),
    }
}

/// Source text that parses back to the same signature, diagrams and rules.
pub fn pretty_print(doc: &Document) -> String {
    let sig = &doc.signature;
    let mut out = String::new();
    if !sig.objects().is_empty() {
        out.push_str(&format!("obj {}\n", sig.objects().join(" ")));
    }
    for g in sig.morphisms() {
        out.push_str(&format!(
            "gen {} : {} -> {}\n",
            g.name,
            sig.render_word(&g.dom),
            sig.render_word(&g.cod)
        ));
    }
    for (name, d) in &doc.diagrams {
        out.push_str(&format!("dia {name} = {}\n", print_term(sig, d)));
    }
    for r in sig.equations() {
        out.push_str(&format!(
            "rule {} : {} = {}\n",
            r.name,
            print_term(sig, &r.lhs),
            print_term(sig, &r.rhs)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURES: &[&str] = &[
        include_str!("../fixtures/theorem1.cmt"),
        include_str!("../fixtures/theorem3.cmt"),
    ];

    #[test]
    fn one_generator() {
        let doc = parse("obj X A\ngen alpha : X A -> A X").unwrap();
        assert_eq!(doc.signature.morphisms().len(), 1);
        assert_eq!(doc.signature.render_word(&doc.signature.morphisms()[0].cod), "A X");
    }

    #[test]
    fn unit_law_in_terms() {
        let doc = parse("obj X A\ngen alpha : X A -> A X\ndia g = (alpha ; id A X)\ndia h = (id 1 * alpha)").unwrap();
        let alpha = doc.signature.generator_named("alpha").unwrap();
        assert_eq!(doc.diagram("g").unwrap(), &alpha);
        assert_eq!(doc.diagram("h").unwrap(), &alpha);
    }

    #[test]
    fn unit_word_and_comments() {
        let doc = parse("# duals\nobj A B\ngen eta : 1 -> B A   # unit\ngen eps : A B -> 1\n").unwrap();
        assert!(doc.signature.morphisms()[0].dom.is_empty());
        assert!(doc.signature.morphisms()[1].cod.is_empty());
    }

    fn err(src: &str) -> ParseError {
        parse(src).unwrap_err()
    }

    #[test]
    fn located_errors() {
        let e = err("obj X\ngen f : X -> X\ndia d = (f X)");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Syntax, 3, 12));
        assert_eq!(e.expected, vec!["`;`", "`*`"]);

        let e = err("obj X\n  gen f : X => X");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Lexical, 2, 14));

        let e = err("obj X\ngen f : X -> Y");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Typing, 2, 14));

        let e = err("obj X A\ngen f : X -> A\ndia d = (f ; f)");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Typing, 3, 12));
        assert!(e.message.contains("[A]") && e.message.contains("[X]"), "{}", e.message);

        let e = err("obj X X");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Duplicate, 1, 7));

        let e = err("obj X\ngen f : X -> X\ndia f = id X");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Duplicate, 3, 5));

        let e = err("obj X\ngen id : X -> X");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Syntax, 2, 5));

        let e = err("obj X\ngen f : X -> X\nrule r : f = id 1");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Typing, 3, 6));

        let e = err("obj X\ndia d = ");
        assert_eq!((e.kind, e.line, e.column), (ErrorKind::Syntax, 2, 9));
        assert_eq!(e.expected.len(), 3);

        let e = err("X");
        assert_eq!(e.expected.len(), 4);
    }

    #[test]
    fn fixtures_parse_and_round_trip() {
        for src in FIXTURES {
            let doc = parse(src).unwrap();
            assert!(!doc.signature.equations().is_empty());
            let printed = pretty_print(&doc);
            let again = parse(&printed).unwrap();
            assert_eq!(pretty_print(&again), printed);
            assert_eq!(again.diagrams, doc.diagrams);
            for (r, s) in again.signature.equations().iter().zip(doc.signature.equations()) {
                assert_eq!((&r.name, &r.lhs, &r.rhs), (&s.name, &s.lhs, &s.rhs));
            }
        }
    }

    #[test]
    fn theorem1_fixture_matches_the_built_in_setup() {
        let doc = parse(FIXTURES[0]).unwrap();
        let setup = crate::duality::Theorem1Setup::new().unwrap();
        assert_eq!(doc.diagram("gamma").unwrap(), &setup.gamma());
        for r in setup.rules() {
            let q = doc.signature.equation(&r.name).unwrap();
            assert_eq!((&q.lhs, &q.rhs), (&r.lhs, &r.rhs), "{}", r.name);
        }
    }

    #[test]
    fn theorem3_fixture_matches_the_built_in_setup() {
        let doc = parse(FIXTURES[1]).unwrap();
        let setup = crate::duality::Theorem3Setup::new().unwrap();
        assert_eq!(doc.diagram("expr").unwrap(), &setup.expression());
        for r in setup.rules() {
            let q = doc.signature.equation(&r.name).unwrap();
            assert_eq!((&q.lhs, &q.rhs), (&r.lhs, &r.rhs), "{}", r.name);
        }
    }
}
