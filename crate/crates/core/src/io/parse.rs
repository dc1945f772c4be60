//! The `inca v1` diagram document: parser and canonical serializer.
//!
//! ```text
//! inca v1
//! component P path 2
//! component Q cycle 1
//! interact P[0] by Q.0 +    # edge with tail 0 of P, acted on by Q.0
//! agent Q.0                 # explicit mark
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use thiserror::Error;

use crate::canon::canonicalize;
use crate::diagram::{is_identifier, Component, EdgeRef, GaussDiagram, Interaction, Kind, Sign, VertexRef};

pub const HEADER: &str = "inca v1";

/// Largest component size accepted by the parser.
pub const MAX_COMPONENT_SIZE: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Semantic { line, .. } => *line,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax<T>(at: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        line: at.line,
        column: at.column,
        message: message.into(),
    })
}

fn semantic<T>(at: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Semantic {
        line: at.line,
        column: at.column,
        message: message.into(),
    })
}

/// Splits a line into tokens with 1-based columns, dropping comments.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(i, t)| (body[..i].chars().count() + 1, t))
        .collect()
}

fn number(tok: &str, at: Pos, what: &str) -> Result<usize, ParseError> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return syntax(at, format!("expected {what}, found `{tok}`"));
    }
    match tok.parse::<usize>() {
        Ok(n) => Ok(n),
        Err(_) => syntax(at, format!("{what} `{tok}` is too large")),
    }
}

fn name(tok: &str, at: Pos) -> Result<&str, ParseError> {
    if is_identifier(tok) {
        Ok(tok)
    } else {
        syntax(at, format!("`{tok}` is not a valid name"))
    }
}

/// `Name[i]`
fn edge_token(tok: &str, at: Pos) -> Result<(&str, usize), ParseError> {
    let Some(open) = tok.find('[') else {
        return syntax(at, format!("expected `name[index]`, found `{tok}`"));
    };
    let Some(inner) = tok[open + 1..].strip_suffix(']') else {
        return syntax(at, format!("expected `name[index]`, found `{tok}`"));
    };
    Ok((name(&tok[..open], at)?, number(inner, at, "edge index")?))
}

/// `Name.j`
fn vertex_token(tok: &str, at: Pos) -> Result<(&str, usize), ParseError> {
    let Some((n, p)) = tok.split_once('.') else {
        return syntax(at, format!("expected `name.position`, found `{tok}`"));
    };
    Ok((name(n, at)?, number(p, at, "vertex position")?))
}

struct PendingInteraction<'a> {
    at: Pos,
    agent_at: Pos,
    edge: (&'a str, usize),
    agent: (&'a str, usize),
    sign: Sign,
}

pub fn parse_diagram(text: &str) -> Result<GaussDiagram, ParseError> {
    let mut header_seen = false;
    let mut components: Vec<Component> = Vec::new();
    let mut by_name: HashMap<&str, usize> = HashMap::new();
    let mut pending: Vec<PendingInteraction> = Vec::new();
    let mut marks: Vec<(Pos, (&str, usize))> = Vec::new();

    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        let at = |k: usize| Pos {
            line: ln + 1,
            column: toks.get(k).map_or(col, |t| t.0),
        };
        if !header_seen {
            if toks.len() == 2 && toks[0].1 == "inca" && toks[1].1 == "v1" {
                header_seen = true;
                continue;
            }
            return syntax(at(0), format!("expected header `{HEADER}`"));
        }
        let arity = |n: usize| {
            if toks.len() == n {
                Ok(())
            } else {
                syntax(
                    at(toks.len().min(n)),
                    format!("`{head}` takes {} arguments, found {}", n - 1, toks.len() - 1),
                )
            }
        };
        match head {
            "component" => {
                arity(4)?;
                let n = name(toks[1].1, at(1))?;
                let kind = match toks[2].1 {
                    "path" => Kind::Path,
                    "cycle" => Kind::Cycle,
                    other => return syntax(at(2), format!("expected `path` or `cycle`, found `{other}`")),
                };
                let size = number(toks[3].1, at(3), "component size")?;
                if size == 0 {
                    return semantic(at(3), "component size must be positive");
                }
                if size > MAX_COMPONENT_SIZE {
                    return semantic(at(3), format!("component size exceeds {MAX_COMPONENT_SIZE}"));
                }
                if by_name.contains_key(n) {
                    return semantic(at(1), format!("duplicate component `{n}`"));
                }
                by_name.insert(n, components.len());
                components.push(Component::new(n, kind, size));
            }
            "interact" => {
                arity(5)?;
                let edge = edge_token(toks[1].1, at(1))?;
                if toks[2].1 != "by" {
                    return syntax(at(2), format!("expected `by`, found `{}`", toks[2].1));
                }
                let agent = vertex_token(toks[3].1, at(3))?;
                let sign = match toks[4].1 {
                    "+" => Sign::Pos,
                    "-" => Sign::Neg,
                    other => return syntax(at(4), format!("expected `+` or `-`, found `{other}`")),
                };
                pending.push(PendingInteraction {
                    at: at(1),
                    agent_at: at(3),
                    edge,
                    agent,
                    sign,
                });
            }
            "agent" => {
                arity(2)?;
                marks.push((at(1), vertex_token(toks[1].1, at(1))?));
            }
            other => return syntax(at(0), format!("unknown statement `{other}`")),
        }
    }
    if !header_seen {
        return syntax(Pos { line: 1, column: 1 }, format!("missing header `{HEADER}`"));
    }

    let resolve_vertex = |at: Pos, (n, p): (&str, usize)| -> Result<VertexRef, ParseError> {
        let Some(&c) = by_name.get(n) else {
            return semantic(at, format!("unknown component `{n}`"));
        };
        if p >= components[c].size {
            return semantic(at, format!("vertex {n}.{p} out of range (size {})", components[c].size));
        }
        Ok(VertexRef::new(c, p))
    };
    let mut interactions: BTreeMap<EdgeRef, Interaction> = BTreeMap::new();
    for pi in &pending {
        let (n, t) = pi.edge;
        let Some(&c) = by_name.get(n) else {
            return semantic(pi.at, format!("unknown component `{n}`"));
        };
        if !components[c].has_edge(t) {
            return semantic(
                pi.at,
                format!("edge {n}[{t}] out of range ({} edges)", components[c].edge_count()),
            );
        }
        let agent = resolve_vertex(pi.agent_at, pi.agent)?;
        let e = EdgeRef::new(c, t);
        if interactions.insert(e, Interaction::new(agent, pi.sign)).is_some() {
            return semantic(pi.at, format!("edge {n}[{t}] already carries an interaction"));
        }
    }
    let mut mark_set = Vec::new();
    for (at, v) in &marks {
        mark_set.push(resolve_vertex(*at, *v)?);
    }
    GaussDiagram::new(components, interactions, mark_set).map_err(|e| ParseError::Semantic {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

/// Canonical document for `d`.
pub fn serialize(d: &GaussDiagram) -> String {
    let (c, _) = canonicalize(d);
    serialize_as_is(&c)
}

/// Document listing `d` in its own component order.
pub fn serialize_as_is(d: &GaussDiagram) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for comp in d.components() {
        let _ = writeln!(out, "component {} {} {}", comp.name, comp.kind.keyword(), comp.size);
    }
    for (e, i) in d.interactions() {
        let _ = writeln!(
            out,
            "interact {} by {} {}",
            d.edge_name(*e),
            d.vertex_name(i.agent),
            i.sign.symbol()
        );
    }
    for m in d.marks() {
        let _ = writeln!(out, "agent {}", d.vertex_name(*m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;

    #[test]
    fn trivial_cycle_document() {
        let d = parse_diagram("inca v1\ncomponent Q cycle 1\n").unwrap();
        assert!(d.is_trivial());
        assert_eq!(d.components()[0], Component::cycle("Q", 1));
    }

    #[test]
    fn single_interaction_document() {
        let d = parse_diagram("inca v1\ncomponent P path 2\ncomponent Q cycle 1\ninteract P[0] by Q.0 +\n").unwrap();
        assert_eq!(
            d.interaction(EdgeRef::new(0, 0)),
            Some(Interaction::new(VertexRef::new(1, 0), Sign::Pos))
        );
    }

    #[test]
    fn out_of_range_edge_is_semantic_with_line() {
        let err =
            parse_diagram("inca v1\ncomponent P path 2\ncomponent Q cycle 1\ninteract P[3] by Q.0 +\n").unwrap_err();
        assert!(matches!(err, ParseError::Semantic { line: 4, .. }), "{err}");
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_diagram("inca v1\ncomponent P loop 2\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                column: 13,
                message: "expected `path` or `cycle`, found `loop`".into()
            }
        );
        assert!(matches!(parse_diagram(""), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_diagram("inca v2"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn duplicate_interaction_rejected() {
        let text = "inca v1\ncomponent P path 2\ninteract P[0] by P.0 +\ninteract P[0] by P.1 -\n";
        assert!(matches!(parse_diagram(text), Err(ParseError::Semantic { line: 4, .. })));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# leading\n\ninca v1  # header\ncomponent A cycle 2 # c\n\nagent A.1\n";
        let d = parse_diagram(text).unwrap();
        assert!(d.is_marked(VertexRef::new(0, 1)));
    }

    #[test]
    fn serialize_round_trip_and_determinism() {
        let d = parse_diagram(
            "inca v1\ncomponent Z cycle 3\ncomponent A path 2\ninteract Z[2] by A.1 -\ninteract A[0] by Z.0 +\nagent Z.1\n",
        )
        .unwrap();
        let s = serialize(&d);
        assert_eq!(s, serialize(&d));
        assert_eq!(canonical_code(&parse_diagram(&s).unwrap()), canonical_code(&d));
    }

    #[test]
    fn trivial_serializes_to_two_lines() {
        let d = GaussDiagram::trivial(vec![Component::cycle("C", 4)]).unwrap();
        assert_eq!(serialize(&d).lines().count(), 2);
    }
}
