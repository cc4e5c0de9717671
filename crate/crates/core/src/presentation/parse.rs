//! Text format for presentations.
//!
//! ```text
//! # comments run to the end of the line
//! algebra q1e_2
//! vertices: e
//! arrows: a:e->e, b:e->e
//! relations:
//!   a*a - b*a*b;
//!   b*b - a*b*a;
//!   (a*b)^2 - (b*a)^2;
//!   (a*b)^2*a;
//! field: Q
//! ```
//!
//! The header and the `vertices:` line may be omitted; vertices are then
//! taken from the arrows in order of first appearance. Sections may be
//! separated by newlines or `;`, and the final relation's `;` is optional.

use std::collections::BTreeMap;
use std::fmt;

use super::{Element, Path, Presentation, PresentationError, Quiver, QuiverError};
use crate::field::FieldKind;

const KEYWORDS: [&str; 5] = ["algebra", "vertices", "arrows", "relations", "field"];
const MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("`{0}` is a reserved word")]
    ReservedName(String),
    #[error("unknown arrow or vertex `{0}`")]
    UnknownName(String),
    #[error("non-composable path: `{left}` cannot be followed by `{right}`")]
    NonComposable { left: String, right: String },
    #[error("exponent must be a positive integer")]
    BadExponent,
    #[error("integer literal out of range")]
    IntegerOverflow,
    #[error("expression expands to more than {MAX_TERMS} terms")]
    TooLarge,
    #[error(transparent)]
    Field(#[from] crate::field::UnknownField),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i128),
    Colon,
    Comma,
    Semi,
    Arrow,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned { tok, line: start_line, column: start_col });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            ':' => push(Tok::Colon, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            ';' => push(Tok::Semi, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '^' => push(Tok::Caret, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let value = digits.parse::<i128>().ok().filter(|v| *v <= i64::MAX as i128).ok_or(
                    ParseError { line, column: col, kind: ParseErrorKind::IntegerOverflow },
                )?;
                out.push(Spanned { tok: Tok::Int(value), line, column: col });
                col += i - start;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Name(name), line, column: col });
                col += i - start;
            }
            other => {
                return Err(ParseError {
                    line,
                    column: col,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

/// Sums of paths with wide integer coefficients during expansion.
type Poly = BTreeMap<Path, i128>;

struct Parser<'q> {
    toks: Vec<Spanned>,
    pos: usize,
    quiver: Option<&'q Quiver>,
}

impl<'q> Parser<'q> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        let (line, column) = self.here();
        ParseError { line, column, kind }
    }

    fn expected(&self, what: &str) -> ParseError {
        self.err_here(ParseErrorKind::Syntax {
            expected: what.to_string(),
            found: self.peek().to_string(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
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

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.expected(&tok.to_string()))
        }
    }

    fn at_section(&self, keyword: &str) -> bool {
        matches!(self.peek(), Tok::Name(n) if n == keyword) && self.peek_at(1) == &Tok::Colon
    }

    fn at_any_section(&self) -> bool {
        KEYWORDS.iter().any(|k| self.at_section(k))
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Name(n) => {
                if KEYWORDS.contains(&n.as_str()) {
                    return Err(self.err_here(ParseErrorKind::ReservedName(n)));
                }
                self.bump();
                Ok(n)
            }
            _ => Err(self.expected(what)),
        }
    }

    fn section(&mut self, keyword: &str) -> Result<(), ParseError> {
        if !self.at_section(keyword) {
            return Err(self.expected(&format!("`{keyword}:`")));
        }
        self.bump();
        self.bump();
        Ok(())
    }

    fn int(&mut self) -> Result<i128, ParseError> {
        match self.peek() {
            Tok::Int(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => Err(self.expected("an integer")),
        }
    }

    // EXPR := ["+"|"-"] TERM (("+"|"-") TERM)*
    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut sign = 1;
        if self.eat(&Tok::Minus) {
            sign = -1;
        } else {
            self.eat(&Tok::Plus);
        }
        let mut acc = Poly::new();
        add_scaled(&mut acc, &self.term()?, sign).map_err(|k| self.err_here(k))?;
        loop {
            let sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.bump();
            let t = self.term()?;
            add_scaled(&mut acc, &t, sign).map_err(|k| self.err_here(k))?;
        }
    }

    // TERM := [INT "*"] FACTOR ("*" FACTOR)*
    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut coefficient = 1;
        if let Tok::Int(_) = self.peek() {
            coefficient = self.int()?;
            self.expect(Tok::Star)?;
        }
        let mut acc = self.factor()?;
        while self.peek() == &Tok::Star {
            let at = self.here();
            self.bump();
            let rhs = self.factor()?;
            acc = self.product(&acc, &rhs, at)?;
        }
        let mut scaled = Poly::new();
        add_scaled(&mut scaled, &acc, coefficient).map_err(|k| self.err_here(k))?;
        Ok(scaled)
    }

    // FACTOR := (NAME | "(" EXPR ")") ["^" INT]
    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = match self.peek().clone() {
            Tok::Name(n) => {
                let quiver = self.quiver.expect("quiver known before relations");
                let path = if let Some(a) = quiver.arrow_index(&n) {
                    quiver.arrow_path(a)
                } else if let Some(v) = quiver.vertex_index(&n) {
                    Path::trivial(v)
                } else {
                    return Err(self.err_here(ParseErrorKind::UnknownName(n)));
                };
                self.bump();
                Poly::from([(path, 1)])
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                inner
            }
            _ => return Err(self.expected("an arrow name or `(`")),
        };
        if self.peek() != &Tok::Caret {
            return Ok(base);
        }
        let at = self.here();
        self.bump();
        let exp = self.int()?;
        if exp < 1 {
            return Err(ParseError { line: at.0, column: at.1, kind: ParseErrorKind::BadExponent });
        }
        let mut acc = base.clone();
        for _ in 1..exp {
            acc = self.product(&acc, &base, at)?;
        }
        Ok(acc)
    }

    fn product(&self, x: &Poly, y: &Poly, at: (usize, usize)) -> Result<Poly, ParseError> {
        let err = |kind| ParseError { line: at.0, column: at.1, kind };
        let quiver = self.quiver.expect("quiver known before relations");
        let mut out = Poly::new();
        for (p, c) in x {
            for (q, d) in y {
                let pq = p.concat(q).ok_or_else(|| {
                    err(ParseErrorKind::NonComposable {
                        left: quiver.path_name(p),
                        right: quiver.path_name(q),
                    })
                })?;
                let cd = c.checked_mul(*d).ok_or_else(|| err(ParseErrorKind::IntegerOverflow))?;
                accumulate(&mut out, pq, cd).map_err(err)?;
                if out.len() > MAX_TERMS {
                    return Err(err(ParseErrorKind::TooLarge));
                }
            }
        }
        Ok(out)
    }
}

fn accumulate(acc: &mut Poly, p: Path, c: i128) -> Result<(), ParseErrorKind> {
    let entry = acc.entry(p).or_insert(0);
    *entry = entry.checked_add(c).ok_or(ParseErrorKind::IntegerOverflow)?;
    Ok(())
}

fn add_scaled(acc: &mut Poly, x: &Poly, scale: i128) -> Result<(), ParseErrorKind> {
    for (p, c) in x {
        let c = c.checked_mul(scale).ok_or(ParseErrorKind::IntegerOverflow)?;
        accumulate(acc, p.clone(), c)?;
    }
    acc.retain(|_, c| *c != 0);
    Ok(())
}

fn to_element(poly: Poly) -> Result<Element<i64>, ParseErrorKind> {
    let mut terms = Vec::with_capacity(poly.len());
    for (p, c) in poly {
        if c != 0 {
            terms.push((p, i64::try_from(c).map_err(|_| ParseErrorKind::IntegerOverflow)?));
        }
    }
    Ok(Element::from_terms(terms))
}

/// Parses a presentation, expanding every relation to a sum of paths.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, quiver: None };

    let mut name = "unnamed".to_string();
    if matches!(p.peek(), Tok::Name(n) if n == "algebra") && p.peek_at(1) != &Tok::Colon {
        p.bump();
        name = p.name("an algebra name")?;
    }

    let mut vertices: Option<Vec<String>> = None;
    if p.at_section("vertices") {
        p.section("vertices")?;
        let mut vs = vec![p.name("a vertex name")?];
        while p.eat(&Tok::Comma) {
            vs.push(p.name("a vertex name")?);
        }
        p.eat(&Tok::Semi);
        vertices = Some(vs);
    }

    let arrows_at = p.here();
    p.section("arrows")?;
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    if !p.at_any_section() && p.peek() != &Tok::Eof {
        loop {
            let a = p.name("an arrow name")?;
            p.expect(Tok::Colon)?;
            let s = p.name("a source vertex")?;
            p.expect(Tok::Arrow)?;
            let t = p.name("a target vertex")?;
            arrows.push((a, s, t));
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
    }
    p.eat(&Tok::Semi);

    let vertices = vertices.unwrap_or_else(|| {
        let mut vs: Vec<String> = Vec::new();
        for (_, s, t) in &arrows {
            for v in [s, t] {
                if !vs.contains(v) {
                    vs.push(v.clone());
                }
            }
        }
        vs
    });
    let quiver = Quiver::new(vertices, arrows).map_err(|e| ParseError {
        line: arrows_at.0,
        column: arrows_at.1,
        kind: e.into(),
    })?;
    p.quiver = Some(&quiver);

    let mut relations = Vec::new();
    let mut relation_starts = Vec::new();
    if p.at_section("relations") {
        p.section("relations")?;
        while !p.at_any_section() && p.peek() != &Tok::Eof {
            relation_starts.push(p.here());
            let poly = p.expr()?;
            relations.push(to_element(poly).map_err(|k| p.err_here(k))?);
            if !p.eat(&Tok::Semi) && !p.at_any_section() && p.peek() != &Tok::Eof {
                return Err(p.expected("`;`"));
            }
        }
    } else {
        return Err(p.expected("`relations:`"));
    }

    let mut field = FieldKind::Q;
    if p.at_section("field") {
        p.section("field")?;
        let at = p.here();
        let f = match p.bump() {
            Tok::Name(n) => n,
            other => {
                return Err(ParseError {
                    line: at.0,
                    column: at.1,
                    kind: ParseErrorKind::Syntax {
                        expected: "a field name".into(),
                        found: other.to_string(),
                    },
                })
            }
        };
        field = f.parse().map_err(|e| ParseError { line: at.0, column: at.1, kind: ParseErrorKind::Field(e) })?;
        p.eat(&Tok::Semi);
    }
    if p.peek() != &Tok::Eof {
        return Err(p.expected("end of input"));
    }

    Presentation::new(name, quiver.clone(), relations, field).map_err(|e| {
        let index = match &e {
            PresentationError::ZeroRelation { index }
            | PresentationError::ShortPath { index, .. }
            | PresentationError::NotParallel { index } => *index,
            PresentationError::Quiver(_) => 1,
        };
        let (line, column) = relation_starts.get(index - 1).copied().unwrap_or(arrows_at);
        ParseError { line, column, kind: e.into() }
    })
}
