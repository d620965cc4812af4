//! Concrete syntax for causal terms and programs.
//!
//! Terms use `+` for alternatives, `*` for joint causes and `.` for
//! application, with `.` binding tightest and `+` loosest. `0` and `1` are
//! the empty sum and the empty product.
//!
//! Programs are ASP-style:
//!
//! ```text
//! % comment
//! p: port.
//! a: fwd :- port, starb, not ab_a.
//! fwd :- fwind.
//! :- fwd, anchored.
//! ```
//!
//! Inside a program a `.` directly followed by a label, `0`, `1` or `(`
//! is application; any other `.` ends the statement.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{canonical_term, CausalTerm, CausalValue, Label};
use crate::semantics::{Atom, Head, Interpretation, Program, Rule};

/// A syntax error with a 1-based position pointing into the offending
/// token.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed rule together with the position of its first token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceRule {
    pub rule: Rule,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceProgram {
    pub rules: Vec<SourceRule>,
}

impl SourceProgram {
    pub fn program(&self) -> Program {
        Program::new(self.rules.iter().map(|r| r.rule.clone()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    LParen,
    RParen,
    Plus,
    Star,
    Dot,
    Colon,
    Implies,
    Comma,
    Semicolon,
    Pipe,
    End,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("'{s}'"),
            Tok::Zero => "'0'".into(),
            Tok::One => "'1'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Colon => "':'".into(),
            Tok::Implies => "':-'".into(),
            Tok::Comma => "','".into(),
            Tok::Semicolon => "';'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::End => "end of statement".into(),
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

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str, program: bool) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let err = |message: String| ParseError { line: tl, column: tc, message };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c == '%' && program {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, width) = if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_continue(chars[j]) {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && is_ident_continue(chars[j]) {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            match word.as_str() {
                "0" => (Tok::Zero, 1),
                "1" => (Tok::One, 1),
                _ => return Err(err(alloc::format!("unknown token '{word}'"))),
            }
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '+' => (Tok::Plus, 1),
                '*' => (Tok::Star, 1),
                ',' => (Tok::Comma, 1),
                ';' => (Tok::Semicolon, 1),
                '|' => (Tok::Pipe, 1),
                ':' if chars.get(i + 1) == Some(&'-') => (Tok::Implies, 2),
                ':' => (Tok::Colon, 1),
                '.' => {
                    let next = chars.get(i + 1).copied();
                    let applies =
                        matches!(next, Some(n) if is_ident_start(n) || n == '(' || n.is_ascii_digit());
                    if !program || applies {
                        (Tok::Dot, 1)
                    } else {
                        (Tok::End, 1)
                    }
                }
                _ => return Err(err(alloc::format!("unknown token '{c}'"))),
            }
        };
        out.push(Token { tok, line: tl, column: tc });
        i += width;
        column += width;
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(token: &Token, message: String) -> ParseError {
        ParseError { line: token.line, column: token.column, message }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = self.peek();
        Self::error_at(t, alloc::format!("expected {wanted}, found {}", t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn sum(&mut self) -> Result<CausalTerm, ParseError> {
        let mut items = alloc::vec![self.product()?];
        while self.peek().tok == Tok::Plus {
            self.bump();
            items.push(self.product()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { CausalTerm::Sum(items) })
    }

    fn product(&mut self) -> Result<CausalTerm, ParseError> {
        let mut items = alloc::vec![self.application()?];
        while self.peek().tok == Tok::Star {
            self.bump();
            items.push(self.application()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { CausalTerm::Product(items) })
    }

    fn application(&mut self) -> Result<CausalTerm, ParseError> {
        let mut term = self.atomic()?;
        while self.peek().tok == Tok::Dot {
            self.bump();
            let right = self.atomic()?;
            term = CausalTerm::app(term, right);
        }
        Ok(term)
    }

    fn atomic(&mut self) -> Result<CausalTerm, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(name) if name == "not" => {
                Err(Self::error_at(&t, "'not' is reserved and cannot be a label".into()))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(CausalTerm::Label(Label::new(name)))
            }
            Tok::Zero => {
                self.bump();
                Ok(CausalTerm::zero())
            }
            Tok::One => {
                self.bump();
                Ok(CausalTerm::one())
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                if self.peek().tok != Tok::RParen {
                    return Err(Self::error_at(
                        &t,
                        alloc::format!("unbalanced parenthesis: found {}", self.peek().tok.describe()),
                    ));
                }
                self.bump();
                Ok(inner)
            }
            Tok::RParen => Err(Self::error_at(&t, "unbalanced parenthesis".into())),
            _ => Err(self.unexpected("a label, '0', '1' or '('")),
        }
    }

    fn atom(&mut self, role: &str) -> Result<Atom, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(name) if name != "not" => {
                self.bump();
                Ok(Atom::new(name))
            }
            _ => Err(self.unexpected(role)),
        }
    }

    /// True if the current statement has a label, i.e. a top-level `:`
    /// before `:-` or the end of the statement.
    fn statement_has_label(&self) -> bool {
        let mut depth = 0i32;
        for t in &self.tokens[self.pos..] {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => depth -= 1,
                Tok::Colon if depth == 0 => return true,
                Tok::Implies | Tok::End | Tok::Eof => return false,
                _ => {}
            }
        }
        false
    }

    fn body(&mut self, positive: &mut BTreeSet<Atom>, negative: &mut BTreeSet<Atom>) -> Result<(), ParseError> {
        loop {
            let negated = matches!(&self.peek().tok, Tok::Ident(n) if n == "not");
            if negated {
                self.bump();
                negative.insert(self.atom("an atom after 'not'")?);
            } else {
                positive.insert(self.atom("a body literal")?);
            }
            if self.peek().tok == Tok::Comma {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn statement(&mut self) -> Result<SourceRule, ParseError> {
        let start = self.peek().clone();
        let label = if self.statement_has_label() {
            let term = self.sum()?;
            self.expect(Tok::Colon, "':' after the rule label")?;
            term
        } else {
            CausalTerm::one()
        };
        let mut positive = BTreeSet::new();
        let mut negative = BTreeSet::new();
        let head = if self.peek().tok == Tok::Implies {
            self.bump();
            self.body(&mut positive, &mut negative)?;
            Head::Falsum
        } else {
            let t = self.peek().clone();
            if matches!(&t.tok, Tok::Ident(n) if n == "not") {
                return Err(Self::error_at(&t, "negation is not allowed in rule heads".into()));
            }
            let head = self.atom("a head atom or ':-'")?;
            let next = self.peek().clone();
            if matches!(next.tok, Tok::Comma | Tok::Semicolon | Tok::Pipe) {
                return Err(Self::error_at(&next, "disjunctive heads are not supported".into()));
            }
            if next.tok == Tok::Implies {
                self.bump();
                self.body(&mut positive, &mut negative)?;
            }
            Head::Atom(head)
        };
        self.expect(Tok::End, "'.' at the end of the rule")?;
        Ok(SourceRule {
            rule: Rule { label, head, positive, negative },
            line: start.line,
            column: start.column,
        })
    }
}

/// Parses a standalone causal term.
pub fn parse_term(text: &str) -> Result<CausalTerm, ParseError> {
    let tokens = lex(text, false)?;
    let mut parser = Parser { tokens, pos: 0 };
    if parser.peek().tok == Tok::Eof {
        return Err(parser.unexpected("a term"));
    }
    let term = parser.sum()?;
    match parser.peek().tok {
        Tok::Eof => Ok(term),
        Tok::RParen => Err(Parser::error_at(parser.peek(), "unbalanced parenthesis".into())),
        _ => Err(parser.unexpected("an operator or end of input")),
    }
}

/// Parses a program file.
pub fn parse_program(text: &str) -> Result<SourceProgram, ParseError> {
    let tokens = lex(text, true)?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut rules = Vec::new();
    while parser.peek().tok != Tok::Eof {
        rules.push(parser.statement()?);
    }
    Ok(SourceProgram { rules })
}

fn precedence(term: &CausalTerm) -> u8 {
    match term {
        CausalTerm::Sum(ts) | CausalTerm::Product(ts) if ts.len() == 1 => precedence(&ts[0]),
        CausalTerm::Sum(ts) if ts.len() > 1 => 0,
        CausalTerm::Product(ts) if ts.len() > 1 => 1,
        CausalTerm::App(_, _) => 2,
        _ => 3,
    }
}

fn write_term(term: &CausalTerm, out: &mut String, nested: bool) {
    let child = |t: &CausalTerm, min: u8, out: &mut String| {
        if precedence(t) < min {
            out.push('(');
            write_term(t, out, true);
            out.push(')');
        } else {
            write_term(t, out, nested);
        }
    };
    match term {
        CausalTerm::Label(l) => out.push_str(l.name()),
        CausalTerm::Sum(ts) if ts.is_empty() => out.push('0'),
        CausalTerm::Product(ts) if ts.is_empty() => out.push('1'),
        CausalTerm::Sum(ts) | CausalTerm::Product(ts) if ts.len() == 1 => write_term(&ts[0], out, nested),
        CausalTerm::Sum(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(if nested { "+" } else { " + " });
                }
                child(t, 1, out);
            }
        }
        CausalTerm::Product(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                child(t, 2, out);
            }
        }
        CausalTerm::App(l, r) => {
            child(l, 2, out);
            out.push('.');
            child(r, 3, out);
        }
    }
}

/// Prints a term with the fewest parentheses that preserve its structure.
pub fn print_term(term: &CausalTerm) -> String {
    let mut out = String::new();
    write_term(term, &mut out, false);
    out
}

/// Prints the canonical term of a value.
pub fn print_value(value: &CausalValue) -> String {
    print_term(&canonical_term(value))
}

/// Prints a program in the syntax accepted by [`parse_program`], one rule
/// per line.
pub fn print_program(program: &Program) -> String {
    let mut out = String::new();
    for rule in program.rules() {
        out.push_str(&print_rule(rule));
        out.push('\n');
    }
    out
}

pub fn print_rule(rule: &Rule) -> String {
    let mut out = String::new();
    if !rule.label.is_one() {
        out.push_str(&print_term(&rule.label));
        out.push_str(": ");
    }
    if let Head::Atom(a) = &rule.head {
        out.push_str(a.name());
    }
    let body: Vec<String> = rule
        .positive
        .iter()
        .map(|a| a.name().to_string())
        .chain(rule.negative.iter().map(|a| alloc::format!("not {}", a.name())))
        .collect();
    if !body.is_empty() {
        if rule.head != Head::Falsum {
            out.push(' ');
        }
        out.push_str(":- ");
        out.push_str(&body.join(", "));
    }
    out.push('.');
    out
}

impl fmt::Display for CausalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for CausalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_value(self))
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (atom, value) in self.iter() {
            writeln!(f, "{} = {}", atom, value)?;
        }
        Ok(())
    }
}
