use super::{BinOp, Equation, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bottom,
    Bin(BinOp),
    Neg,
    Eq,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Top => "`T`".into(),
            Tok::Bottom => "`F`".into(),
            Tok::Bin(op) => format!("`{}`", op.symbol()),
            Tok::Neg => "negation".into(),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut push = |tok| out.push(Spanned { tok, line: l, column: col });
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_lowercase() {
            let mut name = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_lowercase() || d.is_ascii_digit() || d == '_' {
                    name.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            push(if name == "v" { Tok::Bin(BinOp::Join) } else { Tok::Ident(name) });
            continue;
        }
        chars.next();
        column += 1;
        let tok = match c {
            'T' => Tok::Top,
            'F' => Tok::Bottom,
            '^' => Tok::Bin(BinOp::Meet),
            '*' => Tok::Bin(BinOp::Mult),
            '~' => Tok::Neg,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    column += 1;
                    Tok::Bin(BinOp::Res)
                } else {
                    Tok::Neg
                }
            }
            other => return Err(syntax(l, col, format!("unexpected character `{other}`"))),
        };
        push(tok);
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

/// A parsed line: a bare term or an equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Term(Term),
    Equation(Equation),
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    declared: Option<&'a [&'a str]>,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let t = self.peek();
        syntax(t.line, t.column, format!("expected {wanted}, found {}", t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn term(&mut self, min_level: u8) -> Result<Term> {
        let mut lhs = self.unary()?;
        while let Tok::Bin(op) = self.peek().tok {
            let level = op.level();
            if level < min_level {
                break;
            }
            self.bump();
            let next = if op == BinOp::Res { level } else { level + 1 };
            let rhs = self.term(next)?;
            lhs = Term::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term> {
        let t = self.bump();
        match t.tok {
            Tok::Neg => Ok(Term::neg(self.unary()?)),
            Tok::Top => Ok(Term::Top),
            Tok::Bottom => Ok(Term::Bottom),
            Tok::Ident(name) => {
                if let Some(decl) = self.declared {
                    if !decl.contains(&name.as_str()) {
                        return Err(syntax(t.line, t.column, format!("undeclared variable `{name}`")));
                    }
                }
                Ok(Term::Var(name))
            }
            Tok::LParen => {
                let inner = self.term(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => {
                self.pos -= usize::from(t.tok != Tok::End);
                Err(self.unexpected("a term"))
            }
        }
    }

    fn parsed(&mut self) -> Result<Parsed> {
        let lhs = self.term(0)?;
        let out = if self.peek().tok == Tok::Eq {
            self.bump();
            let rhs = self.term(0)?;
            Parsed::Equation(Equation::new(lhs, rhs))
        } else {
            Parsed::Term(lhs)
        };
        self.expect(Tok::End, "end of input")?;
        Ok(out)
    }
}

fn run(text: &str, declared: Option<&[&str]>) -> Result<Parsed> {
    Parser {
        toks: tokenize(text)?,
        pos: 0,
        declared,
    }
    .parsed()
}

/// Parses a term or an equation. Identifiers are variables.
pub fn parse(text: &str) -> Result<Parsed> {
    run(text, None)
}

pub fn parse_term(text: &str) -> Result<Term> {
    match parse(text)? {
        Parsed::Term(t) => Ok(t),
        Parsed::Equation(_) => Err(syntax(1, 1, "expected a term, found an equation")),
    }
}

pub fn parse_equation(text: &str) -> Result<Equation> {
    equation(parse(text)?)
}

/// Like [`parse_equation`] but rejects variables outside `declared`.
pub fn parse_equation_strict(text: &str, declared: &[&str]) -> Result<Equation> {
    equation(run(text, Some(declared))?)
}

fn equation(p: Parsed) -> Result<Equation> {
    match p {
        Parsed::Equation(e) => Ok(e),
        Parsed::Term(_) => Err(syntax(1, 1, "expected an equation `lhs = rhs`")),
    }
}
