//! Line-oriented text format for algebras.
//!
//! ```text
//! algebra G3
//! size 3
//! elements 0 a 1
//! top 2
//! bottom 0
//! meet
//! 0 0 0
//! ...
//! ```
//!
//! The `bottom` line is omitted for unbounded algebras. Tables follow in the
//! order meet, join, mult, res; each is a keyword line and `n` rows of `n`
//! decimal indices. `#` starts a comment.

use super::{FiniteAlgebra, Op, Table};
use crate::error::{Error, Result};

pub fn write_algebra(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    out.push_str(&format!("algebra {}\n", a.name()));
    out.push_str(&format!("size {}\n", a.size()));
    out.push_str(&format!("elements {}\n", a.element_names().join(" ")));
    out.push_str(&format!("top {}\n", a.top()));
    if let Some(b) = a.bottom() {
        out.push_str(&format!("bottom {b}\n"));
    }
    for op in Op::ALL {
        out.push_str(op.keyword());
        out.push('\n');
        for row in a.table(op).rows() {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parses exactly one algebra; trailing content is an error.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let mut reader = LineReader::new(text);
    let a = parse_algebra_lines(&mut reader)?;
    if let Some((line, rest)) = reader.next() {
        return Err(Error::Format {
            line,
            message: format!("unexpected trailing content {rest:?}"),
        });
    }
    Ok(a)
}

/// Significant lines of a text: comments stripped, blank lines skipped.
#[derive(Debug)]
pub struct LineReader {
    lines: Vec<(usize, String)>,
    pos: usize,
    last_line: usize,
}

impl LineReader {
    pub fn new(text: &str) -> Self {
        let lines: Vec<(usize, String)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("").trim();
                (!l.is_empty()).then(|| (i + 1, l.to_string()))
            })
            .collect();
        let last_line = text.lines().count();
        LineReader {
            lines,
            pos: 0,
            last_line,
        }
    }

    pub fn peek(&self) -> Option<(usize, &str)> {
        self.lines.get(self.pos).map(|(n, l)| (*n, l.as_str()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<(usize, String)> {
        let item = self.lines.get(self.pos).cloned();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }

    pub fn expect_line(&mut self, what: &str) -> Result<(usize, String)> {
        self.next().ok_or_else(|| Error::Format {
            line: self.last_line,
            message: format!("unexpected end of input, expected {what}"),
        })
    }

    /// Reads `<keyword> <rest>` and returns the rest.
    pub fn keyword(&mut self, keyword: &str) -> Result<(usize, String)> {
        let (line, text) = self.expect_line(keyword)?;
        match text.split_once(char::is_whitespace) {
            Some((k, rest)) if k == keyword => Ok((line, rest.trim().to_string())),
            _ if text == keyword => Ok((line, String::new())),
            _ => Err(Error::Format {
                line,
                message: format!("expected `{keyword}`, found {text:?}"),
            }),
        }
    }
}

fn parse_index(line: usize, token: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Format {
        line,
        message: format!("expected a decimal index, found {token:?}"),
    })
}

pub fn parse_algebra_lines(reader: &mut LineReader) -> Result<FiniteAlgebra> {
    let (_, name) = reader.keyword("algebra")?;
    if name.is_empty() {
        return Err(Error::Format {
            line: reader.last_line,
            message: "algebra needs a name".into(),
        });
    }
    let (line, size) = reader.keyword("size")?;
    let n = parse_index(line, &size)?;
    let (line, names) = reader.keyword("elements")?;
    let elements: Vec<String> = names.split_whitespace().map(str::to_string).collect();
    if elements.len() != n {
        return Err(Error::Format {
            line,
            message: format!("{} element names for size {n}", elements.len()),
        });
    }
    let (line, top) = reader.keyword("top")?;
    let top = parse_index(line, &top)?;
    let bottom = match reader.peek() {
        Some((_, l)) if l.starts_with("bottom") => {
            let (line, b) = reader.keyword("bottom")?;
            Some(parse_index(line, &b)?)
        }
        _ => None,
    };
    let mut tables = Vec::with_capacity(4);
    for op in Op::ALL {
        let (line, rest) = reader.keyword(op.keyword())?;
        if !rest.is_empty() {
            return Err(Error::Format {
                line,
                message: format!("unexpected text after `{}`", op.keyword()),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, row) = reader.expect_line("a table row")?;
            let cells = row
                .split_whitespace()
                .map(|t| parse_index(line, t))
                .collect::<Result<Vec<_>>>()?;
            if cells.len() != n {
                return Err(Error::Format {
                    line,
                    message: format!("row has {} entries, expected {n}", cells.len()),
                });
            }
            rows.push(cells);
        }
        tables.push(Table::from_rows(&rows)?);
    }
    let [meet, join, mult, res]: [Table; 4] = tables.try_into().expect("four tables");
    FiniteAlgebra::new(name, elements, meet, join, mult, res, top, bottom)
}
