//! Line-oriented strategy file format.
//!
//! ```text
//! alphabets <nA> <nB> <nX> <nY>
//! prior uniform            # or `prior table` followed by nA rows of nB rationals
//! context 0 0
//! <nY rationals>           # nX rows
//! context 0 1
//! ...
//! ```
//!
//! `#` starts a comment, blank lines are ignored, and contexts must appear
//! once each in lexicographic order.

use crate::dist::{Alphabets, DistError, ObservationPrior, Strategy};
use crate::rational::{self, Rational};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing context a={a} b={b}")]
    MissingContext { a: usize, b: usize },
    #[error(transparent)]
    Invalid(#[from] DistError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

type TokenLines<'a> = Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>;

struct Lines<'a> {
    inner: std::iter::Peekable<TokenLines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: TokenLines<'a> = Box::new(text.lines().enumerate().filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            (!tokens.is_empty()).then_some((i + 1, tokens))
        }));
        Self {
            inner: it.peekable(),
            last_line: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), FormatError> {
        match self.inner.next() {
            Some(item) => {
                self.last_line = item.0;
                Ok(item)
            }
            None => Err(syntax(
                self.last_line + 1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    fn peek_line(&mut self) -> Option<&(usize, Vec<&'a str>)> {
        self.inner.peek()
    }
}

fn parse_usize(line: usize, token: &str) -> Result<usize, FormatError> {
    token.parse::<usize>().map_err(|_| {
        syntax(
            line,
            format!("expected a nonnegative integer, found {token:?}"),
        )
    })
}

fn parse_row(line: usize, tokens: &[&str], width: usize) -> Result<Vec<Rational>, FormatError> {
    if tokens.len() != width {
        return Err(syntax(
            line,
            format!("expected {width} rationals, found {}", tokens.len()),
        ));
    }
    tokens
        .iter()
        .map(|t| rational::parse(t).ok_or_else(|| syntax(line, format!("bad rational {t:?}"))))
        .collect()
}

/// Parses a strategy file. The prior is `None` for `prior uniform`.
pub fn parse_strategy(text: &str) -> Result<(Strategy, Option<ObservationPrior>), FormatError> {
    let mut lines = Lines::new(text);

    let (line, tokens) = lines.next("`alphabets` header")?;
    if tokens.len() != 5 || tokens[0] != "alphabets" {
        return Err(syntax(line, "expected `alphabets <nA> <nB> <nX> <nY>`"));
    }
    let dims = tokens[1..]
        .iter()
        .map(|t| parse_usize(line, t))
        .collect::<Result<Vec<_>, _>>()?;
    let alphabets = Alphabets::new(dims[0], dims[1], dims[2], dims[3])
        .map_err(|e| syntax(line, e.to_string()))?;

    let (line, tokens) = lines.next("`prior` line")?;
    let prior = match tokens.as_slice() {
        ["prior", "uniform"] => None,
        ["prior", "table"] => {
            let mut table = Vec::with_capacity(alphabets.num_contexts());
            for _ in 0..alphabets.n_a {
                let (line, tokens) = lines.next("prior row")?;
                table.extend(parse_row(line, &tokens, alphabets.n_b)?);
            }
            Some(ObservationPrior::new(alphabets.n_a, alphabets.n_b, table)?)
        }
        _ => return Err(syntax(line, "expected `prior uniform` or `prior table`")),
    };

    let mut table = Vec::with_capacity(alphabets.len());
    for (a, b) in alphabets.contexts() {
        let Some((line, tokens)) = lines.peek_line().cloned() else {
            return Err(FormatError::MissingContext { a, b });
        };
        if tokens.len() != 3 || tokens[0] != "context" {
            return Err(syntax(line, "expected `context <a> <b>`"));
        }
        let (ca, cb) = (parse_usize(line, tokens[1])?, parse_usize(line, tokens[2])?);
        if ca >= alphabets.n_a || cb >= alphabets.n_b {
            return Err(syntax(line, format!("context {ca} {cb} out of range")));
        }
        if (ca, cb) > (a, b) {
            return Err(FormatError::MissingContext { a, b });
        }
        if (ca, cb) < (a, b) {
            return Err(syntax(
                line,
                format!("context {ca} {cb} repeated or out of order"),
            ));
        }
        lines.next("context")?;
        for _ in 0..alphabets.n_x {
            let (line, tokens) = lines.next("context row")?;
            table.extend(parse_row(line, &tokens, alphabets.n_y)?);
        }
    }
    if let Some((line, _)) = lines.peek_line() {
        return Err(syntax(*line, "trailing content after last context"));
    }
    Ok((Strategy::new(alphabets, table)?, prior))
}

fn push_row<'a>(out: &mut String, row: impl IntoIterator<Item = &'a Rational>) {
    let cells: Vec<String> = row.into_iter().map(rational::format).collect();
    out.push_str(&cells.join(" "));
    out.push('\n');
}

/// Canonical text: contexts in lexicographic order, rows `x`, reduced
/// rationals. `None` writes `prior uniform`.
pub fn emit_strategy(s: &Strategy, prior: Option<&ObservationPrior>) -> String {
    let al = s.alphabets();
    let mut out = String::new();
    let _ = writeln!(out, "alphabets {} {} {} {}", al.n_a, al.n_b, al.n_x, al.n_y);
    match prior {
        None => out.push_str("prior uniform\n"),
        Some(p) => {
            out.push_str("prior table\n");
            for row in p.entries().chunks(p.n_b()) {
                push_row(&mut out, row);
            }
        }
    }
    for (a, b) in al.contexts() {
        let _ = writeln!(out, "context {a} {b}");
        for row in s.context(a, b).chunks(al.n_y) {
            push_row(&mut out, row);
        }
    }
    out
}
