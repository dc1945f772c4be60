//! The `quandle v1` table document.
//!
//! ```text
//! quandle v1
//! size 3
//! op s inverse s
//! 0 2 1
//! 2 1 0
//! 1 0 2
//! ```
//!
//! Row `x` of an operation lists `x ▷ y` for `y = 0..size`.

use std::fmt::Write;

use thiserror::Error;

use crate::invariants::quandle::{MultiQuandle, QuandleError};

pub const QUANDLE_HEADER: &str = "quandle v1";

/// Largest quandle size accepted from a document.
pub const MAX_QUANDLE_SIZE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuandleDocError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Shape(#[from] QuandleError),
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, QuandleDocError> {
    Err(QuandleDocError::Syntax {
        line,
        message: message.into(),
    })
}

pub fn parse_quandle(name: &str, text: &str) -> Result<MultiQuandle, QuandleDocError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l.split_whitespace().eq(QUANDLE_HEADER.split_whitespace()) => {}
        Some((n, _)) => return err(n, format!("expected header `{QUANDLE_HEADER}`")),
        None => return err(1, "empty document"),
    }
    let size = match lines.next() {
        Some((n, l)) => {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks.as_slice() {
                ["size", s] => match s.parse::<usize>() {
                    Ok(v) if v > 0 && v <= MAX_QUANDLE_SIZE => v,
                    _ => return err(n, format!("size must be in 1..={MAX_QUANDLE_SIZE}")),
                },
                _ => return err(n, "expected `size <n>`"),
            }
        }
        None => return err(1, "missing `size` line"),
    };
    let mut ops = Vec::new();
    while let Some((n, l)) = lines.next() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let (op, inv) = match toks.as_slice() {
            ["op", op, "inverse", inv] => (op.to_string(), inv.to_string()),
            _ => return err(n, "expected `op <name> inverse <name>`"),
        };
        let mut rows = Vec::with_capacity(size);
        for _ in 0..size {
            let Some((rn, row)) = lines.next() else {
                return err(n, format!("operation `{op}` needs {size} rows"));
            };
            let parsed: Result<Vec<usize>, _> = row.split_whitespace().map(str::parse).collect();
            match parsed {
                Ok(r) if r.len() == size => rows.push(r),
                _ => return err(rn, format!("expected {size} entries")),
            }
        }
        ops.push((op, rows, inv));
    }
    Ok(MultiQuandle::new(name, size, ops)?)
}

pub fn serialize_quandle(q: &MultiQuandle) -> String {
    let mut out = format!("{QUANDLE_HEADER}\nsize {}\n", q.size());
    for op in q.ops() {
        let _ = writeln!(out, "op {} inverse {}", op.name, q.ops()[op.inverse].name);
        for row in op.table.chunks(q.size()) {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    out
}
