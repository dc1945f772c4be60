//! Aggregate invariant used to certify inequivalence.
//!
//! Entry invariance by move set:
//!
//! | entry                 | R1/R2/R3 | +DESTAB/STAB | +false moves |
//! |-----------------------|----------|--------------|--------------|
//! | coloring counts       | yes      | yes          | no           |
//! | reduced unframed link | yes      | yes          | no           |
//! | underlying graph      | yes      | no           | no           |
//! | component marks/kinds | yes      | yes          | no           |
//! | component kinds       | yes      | yes          | yes          |

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::underlying_graph;
use crate::diagram::{GaussDiagram, Kind};
use crate::invariants::coloring::count_colorings;
use crate::invariants::linking::{linking_graph, LinkingVariant};
use crate::invariants::quandle::MultiQuandle;

/// Panel used when none is given.
pub fn default_panel() -> Vec<MultiQuandle> {
    vec![
        MultiQuandle::trivial(3),
        MultiQuandle::dihedral(3),
        MultiQuandle::dihedral(5),
        MultiQuandle::dihedral(7),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub linking: String,
    pub colorings: Vec<(String, u128)>,
    pub graph: String,
    /// Sorted `(kind, marked vertex count)` per component.
    pub marks: Vec<(String, usize)>,
    /// Sorted component kinds.
    pub kinds: Vec<String>,
}

/// Which move set the comparison must respect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveClass {
    Reidemeister,
    Stable,
    WithFalse,
}

/// A named invariant on which two diagrams disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} differs ({} vs {})", self.name, self.left, self.right)
    }
}

pub fn fingerprint(d: &GaussDiagram, panel: &[MultiQuandle]) -> Fingerprint {
    let kind_name = |k: Kind| k.keyword().to_string();
    let mut marks: Vec<(String, usize)> = d
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| (kind_name(c.kind), d.marks().iter().filter(|m| m.component == i).count()))
        .collect();
    marks.sort();
    let mut kinds: Vec<String> = d.components().iter().map(|c| kind_name(c.kind)).collect();
    kinds.sort();
    Fingerprint {
        linking: linking_graph(d, LinkingVariant::ReducedUnframed).canonical_code(),
        colorings: panel
            .iter()
            .map(|q| (q.name().to_string(), count_colorings(d, q)))
            .collect(),
        graph: underlying_graph(d).code(),
        marks,
        kinds,
    }
}

impl Fingerprint {
    /// First entry valid for `class` on which the fingerprints disagree.
    pub fn distinguish(&self, other: &Fingerprint, class: MoveClass) -> Option<Certificate> {
        let cert = |name: &str, l: String, r: String| {
            Some(Certificate {
                name: name.to_string(),
                left: l,
                right: r,
            })
        };
        if self.kinds != other.kinds {
            return cert("component kinds", self.kinds.join(","), other.kinds.join(","));
        }
        if class == MoveClass::WithFalse {
            return None;
        }
        if class == MoveClass::Reidemeister && self.graph != other.graph {
            return cert("underlying graph", self.graph.clone(), other.graph.clone());
        }
        if self.marks != other.marks {
            let show = |m: &[(String, usize)]| format!("{m:?}");
            return cert("marks per component", show(&self.marks), show(&other.marks));
        }
        if self.linking != other.linking {
            return cert("reduced unframed linking", self.linking.clone(), other.linking.clone());
        }
        let theirs: BTreeMap<&String, u128> = other.colorings.iter().map(|(n, c)| (n, *c)).collect();
        for (name, count) in &self.colorings {
            if let Some(&c) = theirs.get(name) {
                if c != *count {
                    return cert(&format!("colorings over {name}"), count.to_string(), c.to_string());
                }
            }
        }
        None
    }
}
