//! Fundamental quandle presentation: one generator per vertex, one
//! operation symbol per acting agent, one relation per edge.

use std::fmt;

use crate::canon::canonicalize;
use crate::diagram::{GaussDiagram, Sign, VertexRef};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `head = tail ▷_op agent` (or `◁` for a negative sign).
    Action {
        head: usize,
        tail: usize,
        op: usize,
        agent: usize,
        sign: Sign,
    },
    /// `head = tail` along a bare edge.
    Equal { head: usize, tail: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuandlePresentation {
    pub generators: Vec<String>,
    pub op_symbols: Vec<String>,
    pub relations: Vec<Relation>,
}

/// Presentation read off the canonical form, so symbol order is
/// independent of how the diagram was written down.
pub fn quandle_presentation(d: &GaussDiagram) -> QuandlePresentation {
    let (c, _) = canonicalize(d);
    let offsets = c.offsets();
    let index = |v: VertexRef| offsets[v.component] + v.position;
    let generators = (0..c.vertex_count()).map(|i| format!("c{i}")).collect();
    let agents: Vec<VertexRef> = c.support().into_iter().collect();
    let op_symbols = (0..agents.len()).map(|i| format!("b{i}")).collect();
    let relations = c
        .edges()
        .map(|e| {
            let (tail, head) = (index(c.tail(e)), index(c.head(e)));
            match c.interaction(e) {
                None => Relation::Equal { head, tail },
                Some(i) => Relation::Action {
                    head,
                    tail,
                    op: agents.binary_search(&i.agent).expect("agent in support"),
                    agent: index(i.agent),
                    sign: i.sign,
                },
            }
        })
        .collect();
    QuandlePresentation {
        generators,
        op_symbols,
        relations,
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Action {
                head,
                tail,
                op,
                agent,
                sign,
            } => {
                let arrow = if *sign == Sign::Pos { "|>" } else { "<|" };
                write!(f, "c{head} = c{tail} {arrow}b{op} c{agent}")
            }
            Relation::Equal { head, tail } => write!(f, "c{head} = c{tail}"),
        }
    }
}

impl fmt::Display for QuandlePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.generators.join(" "))?;
        writeln!(f, "operations: {}", self.op_symbols.join(" "))?;
        for r in &self.relations {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
