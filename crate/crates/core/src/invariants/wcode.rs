//! Gauss code of the underlying w-tangle: the quotient by false
//! (de)stabilization.

use std::fmt;

use crate::canon::{canonicalize, CanonicalCode};
use crate::diagram::{GaussDiagram, Kind, Sign, VertexRef};
use crate::moves::false_destabilize;

/// Per component, the sequence of `(agent, sign)` labels along the strand
/// after every bare edge has been contracted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WCode {
    pub components: Vec<(Kind, Vec<(VertexRef, Sign)>)>,
    code: CanonicalCode,
}

impl WCode {
    pub fn code(&self) -> &CanonicalCode {
        &self.code
    }
}

/// Contracts bare edges until none is left (loops excepted), dropping marks.
pub fn false_destabilized(d: &GaussDiagram) -> GaussDiagram {
    let mut cur =
        GaussDiagram::from_parts_unchecked(d.components().to_vec(), d.interactions().clone(), Default::default());
    loop {
        let next = cur.bare_edges().find(|e| cur.tail(*e) != cur.head(*e));
        let Some(e) = next else { break };
        cur = false_destabilize(&cur, e).expect("bare non-loop edge contracts");
    }
    cur
}

pub fn w_code(d: &GaussDiagram) -> WCode {
    let (c, code) = canonicalize(&false_destabilized(d));
    let components = c
        .components()
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            let labels = (0..comp.edge_count())
                .filter_map(|t| c.interaction(crate::diagram::EdgeRef::new(ci, t)))
                .map(|i| (i.agent, i.sign))
                .collect();
            (comp.kind, labels)
        })
        .collect();
    WCode { components, code }
}

impl fmt::Display for WCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (kind, labels)) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{kind}:")?;
            for (a, s) in labels {
                write!(f, " {}.{}{}", a.component, a.position, s)?;
            }
        }
        Ok(())
    }
}
