//! Text format for rules, facts and queries.
//!
//! Statements end with `.`; `%` starts a comment running to end of line.
//! Identifiers starting with an uppercase letter are variables, those
//! starting with a lowercase letter are constants or predicate names; a
//! predicate name may carry a single trailing `+`. Facts are single ground
//! atoms (`p(a,b).`), rules are `body -> head.`, and queries are
//! `?(X,a) :- atoms.` with `? :- atoms.` for the Boolean form. Nullary atoms
//! are written `p()`.

use std::collections::BTreeMap;
use std::fmt;

use crate::atom::{Atom, Instance};
use crate::query::Query;
use crate::rule::{Rule, Ruleset};
use crate::symbol::Symbol;
use crate::term::Term;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Everything a source text may contain.
#[derive(Clone, Default, Debug)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub facts: Instance,
    pub queries: Vec<Query>,
    pub arities: BTreeMap<Symbol, usize>,
}

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    Parser::new(src)?.program()
}

/// Parses a text that must contain only rules.
pub fn parse_ruleset(src: &str) -> Result<Ruleset, ParseError> {
    let p = parse_program(src)?;
    if !p.facts.is_empty() || !p.queries.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "expected only rules in this input".into(),
        });
    }
    Ok(Ruleset::new(p.rules))
}

/// Parses a text that must contain only facts.
pub fn parse_instance(src: &str) -> Result<Instance, ParseError> {
    let p = parse_program(src)?;
    if !p.rules.is_empty() || !p.queries.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "expected only facts in this input".into(),
        });
    }
    Ok(p.facts)
}

/// Parses a text that must contain exactly one query.
pub fn parse_query(src: &str) -> Result<Query, ParseError> {
    let p = parse_program(src)?;
    if !p.rules.is_empty() || !p.facts.is_empty() || p.queries.len() != 1 {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "expected exactly one query in this input".into(),
        });
    }
    Ok(p.queries.into_iter().next().unwrap())
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    /// Lowercase-led identifier, possibly with a trailing `+`.
    Ident(String),
    /// Uppercase-led identifier.
    Var(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    Question,
    ColonDash,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "'{s}'"),
            Token::Var(s) => write!(f, "'{s}'"),
            Token::LParen => write!(f, "'('"),
            Token::RParen => write!(f, "')'"),
            Token::Comma => write!(f, "','"),
            Token::Dot => write!(f, "'.'"),
            Token::Arrow => write!(f, "'->'"),
            Token::Question => write!(f, "'?'"),
            Token::ColonDash => write!(f, "':-'"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<(Token, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;
    macro_rules! bump {
        () => {{
            let ch = chars.next().unwrap();
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        }};
    }
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        match ch {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '(' => {
                bump!();
                out.push((Token::LParen, tline, tcol));
            }
            ')' => {
                bump!();
                out.push((Token::RParen, tline, tcol));
            }
            ',' => {
                bump!();
                out.push((Token::Comma, tline, tcol));
            }
            '.' => {
                bump!();
                out.push((Token::Dot, tline, tcol));
            }
            '?' => {
                bump!();
                out.push((Token::Question, tline, tcol));
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push((Token::Arrow, tline, tcol));
                } else {
                    return Err(ParseError {
                        line: tline,
                        col: tcol,
                        message: "expected '>' after '-'".into(),
                    });
                }
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    out.push((Token::ColonDash, tline, tcol));
                } else {
                    return Err(ParseError {
                        line: tline,
                        col: tcol,
                        message: "expected '-' after ':'".into(),
                    });
                }
            }
            c if c.is_ascii_lowercase() || c.is_ascii_uppercase() => {
                let upper = c.is_ascii_uppercase();
                let mut name = String::new();
                name.push(bump!());
                while let Some(&c2) = chars.peek() {
                    if c2.is_ascii_alphanumeric() || c2 == '_' {
                        name.push(bump!());
                    } else {
                        break;
                    }
                }
                if !upper && chars.peek() == Some(&'+') {
                    name.push(bump!());
                }
                if upper {
                    out.push((Token::Var(name), tline, tcol));
                } else {
                    out.push((Token::Ident(name), tline, tcol));
                }
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    out.push((Token::Eof, line, col));
    Ok(out)
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { tokens: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.tokens[self.pos];
        (l, c)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        if self.peek() == &want {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {}, found {}", want, self.peek())))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut prog = Program::default();
        while self.peek() != &Token::Eof {
            self.statement(&mut prog)?;
        }
        Ok(prog)
    }

    fn statement(&mut self, prog: &mut Program) -> Result<(), ParseError> {
        if self.peek() == &Token::Question {
            let q = self.query(&mut prog.arities)?;
            prog.queries.push(q);
            return Ok(());
        }
        let first_pos = self.here();
        let first = self.atoms(&mut prog.arities)?;
        if self.peek() == &Token::Arrow {
            self.bump();
            if first.is_empty() {
                return Err(ParseError {
                    line: first_pos.0,
                    col: first_pos.1,
                    message: "a rule needs a non-empty body".into(),
                });
            }
            let head_pos = self.here();
            let head = self.atoms(&mut prog.arities)?;
            if head.is_empty() {
                return Err(ParseError {
                    line: head_pos.0,
                    col: head_pos.1,
                    message: "a rule needs a non-empty head".into(),
                });
            }
            self.expect(Token::Dot)?;
            prog.rules.push(Rule::new(prog.rules.len(), first, head));
        } else {
            self.expect(Token::Dot)?;
            if first.len() != 1 {
                return Err(ParseError {
                    line: first_pos.0,
                    col: first_pos.1,
                    message: "a fact is a single atom; use '->' for rules".into(),
                });
            }
            let atom = first.into_iter().next().unwrap();
            if let Some(Term::Variable(v)) = atom.args.iter().find(|t| t.is_variable()) {
                return Err(ParseError {
                    line: first_pos.0,
                    col: first_pos.1,
                    message: format!("fact contains variable {v}"),
                });
            }
            prog.facts.insert(atom);
        }
        Ok(())
    }

    fn query(&mut self, arities: &mut BTreeMap<Symbol, usize>) -> Result<Query, ParseError> {
        self.expect(Token::Question)?;
        let mut answers = Vec::new();
        if self.peek() == &Token::LParen {
            self.bump();
            if self.peek() != &Token::RParen {
                loop {
                    answers.push(self.term()?);
                    if self.peek() == &Token::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Token::RParen)?;
        }
        self.expect(Token::ColonDash)?;
        let body_pos = self.here();
        let atoms = self.atoms(arities)?;
        if atoms.is_empty() {
            return Err(ParseError {
                line: body_pos.0,
                col: body_pos.1,
                message: "a query needs a non-empty body".into(),
            });
        }
        self.expect(Token::Dot)?;
        for t in &answers {
            if let Term::Variable(v) = t {
                let occurs = atoms.iter().any(|a| a.variables().any(|av| av == v));
                if !occurs {
                    return Err(ParseError {
                        line: body_pos.0,
                        col: body_pos.1,
                        message: format!("answer variable {v} does not occur in the query body"),
                    });
                }
            }
        }
        Ok(Query::new(answers, atoms))
    }

    fn atoms(&mut self, arities: &mut BTreeMap<Symbol, usize>) -> Result<Vec<Atom>, ParseError> {
        let mut out = vec![self.atom(arities)?];
        while self.peek() == &Token::Comma {
            self.bump();
            out.push(self.atom(arities)?);
        }
        Ok(out)
    }

    fn atom(&mut self, arities: &mut BTreeMap<Symbol, usize>) -> Result<Atom, ParseError> {
        let (line, col) = self.here();
        let name = match self.bump() {
            Token::Ident(s) => s,
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("expected a predicate name, found {other}"),
                })
            }
        };
        self.expect(Token::LParen)?;
        let mut args = Vec::new();
        if self.peek() != &Token::RParen {
            loop {
                args.push(self.term()?);
                if self.peek() == &Token::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Token::RParen)?;
        let pred = Symbol::from(name);
        match arities.get(&pred) {
            Some(&n) if n != args.len() => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!(
                        "predicate {pred} used with arity {} but earlier with arity {n}",
                        args.len()
                    ),
                });
            }
            Some(_) => {}
            None => {
                arities.insert(pred.clone(), args.len());
            }
        }
        Ok(Atom::new(pred, args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (line, col) = self.here();
        match self.bump() {
            Token::Var(s) => Ok(Term::variable(s)),
            Token::Ident(s) => {
                if s.ends_with('+') {
                    Err(ParseError {
                        line,
                        col,
                        message: "'+' is only allowed at the end of a predicate name".into(),
                    })
                } else {
                    Ok(Term::constant(s))
                }
            }
            other => Err(ParseError {
                line,
                col,
                message: format!("expected a term, found {other}"),
            }),
        }
    }
}
