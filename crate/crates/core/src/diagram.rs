//! The Gauss-diagram data model: components, agents and signed interactions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Direction of an interaction. `Pos` is the forward arrow, `Neg` the backward one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self.negate()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Path,
    Cycle,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Path => "path",
            Kind::Cycle => "cycle",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A path or cycle graph. Edge `i` runs from position `i` to position `i + 1`
/// (modulo `size` for cycles).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub name: String,
    pub kind: Kind,
    pub size: usize,
}

impl Component {
    pub fn new(name: impl Into<String>, kind: Kind, size: usize) -> Self {
        Component {
            name: name.into(),
            kind,
            size,
        }
    }

    pub fn path(name: impl Into<String>, size: usize) -> Self {
        Self::new(name, Kind::Path, size)
    }

    pub fn cycle(name: impl Into<String>, size: usize) -> Self {
        Self::new(name, Kind::Cycle, size)
    }

    pub fn edge_count(&self) -> usize {
        match self.kind {
            Kind::Path => self.size.saturating_sub(1),
            Kind::Cycle => self.size,
        }
    }

    pub fn has_edge(&self, tail: usize) -> bool {
        tail < self.edge_count()
    }

    pub fn head_of(&self, tail: usize) -> usize {
        (tail + 1) % self.size
    }

    /// Tail position of the edge entering `pos`, if any.
    pub fn in_edge(&self, pos: usize) -> Option<usize> {
        match self.kind {
            Kind::Path => pos.checked_sub(1),
            Kind::Cycle => Some((pos + self.size - 1) % self.size),
        }
    }

    /// Tail position of the edge leaving `pos`, if any.
    pub fn out_edge(&self, pos: usize) -> Option<usize> {
        if self.has_edge(pos) {
            Some(pos)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub component: usize,
    pub position: usize,
}

impl VertexRef {
    pub fn new(component: usize, position: usize) -> Self {
        VertexRef { component, position }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    pub component: usize,
    pub tail: usize,
}

impl EdgeRef {
    pub fn new(component: usize, tail: usize) -> Self {
        EdgeRef { component, tail }
    }

    pub fn tail_vertex(self) -> VertexRef {
        VertexRef::new(self.component, self.tail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interaction {
    pub agent: VertexRef,
    pub sign: Sign,
}

impl Interaction {
    pub fn new(agent: VertexRef, sign: Sign) -> Self {
        Interaction { agent, sign }
    }
}

/// Unchecked diagram data, as produced by a parser or assembled by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawDiagram {
    pub components: Vec<Component>,
    pub interactions: Vec<(EdgeRef, Interaction)>,
    pub marks: Vec<VertexRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("component #{index} has size 0")]
    EmptyComponent { index: usize },
    #[error("component name {name:?} is not an identifier")]
    BadName { name: String },
    #[error("component name {name:?} is declared twice")]
    DuplicateName { name: String },
    #[error("{context} refers to component #{component}, which does not exist")]
    UnknownComponent { context: String, component: usize },
    #[error("{context} refers to vertex {component}.{position}, out of range for size {size}")]
    VertexOutOfRange {
        context: String,
        component: String,
        position: usize,
        size: usize,
    },
    #[error("interaction on edge {component}[{tail}] is out of range ({edges} edges)")]
    EdgeOutOfRange {
        component: String,
        tail: usize,
        edges: usize,
    },
    #[error("edge {component}[{tail}] carries more than one interaction")]
    DuplicateInteraction { component: String, tail: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidDiagram(pub Vec<Violation>);

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RawDiagram {
    /// Lists every broken well-formedness rule. Empty means the data describes
    /// a valid diagram.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut names = BTreeSet::new();
        for (index, c) in self.components.iter().enumerate() {
            if c.size == 0 {
                out.push(Violation::EmptyComponent { index });
            }
            if !is_identifier(&c.name) {
                out.push(Violation::BadName { name: c.name.clone() });
            }
            if !names.insert(c.name.as_str()) {
                out.push(Violation::DuplicateName { name: c.name.clone() });
            }
        }

        let check_vertex =
            |context: String, v: VertexRef, out: &mut Vec<Violation>| match self.components.get(v.component) {
                None => out.push(Violation::UnknownComponent {
                    context,
                    component: v.component,
                }),
                Some(c) if v.position >= c.size => out.push(Violation::VertexOutOfRange {
                    context,
                    component: c.name.clone(),
                    position: v.position,
                    size: c.size,
                }),
                Some(_) => {}
            };

        let mut seen = BTreeSet::new();
        for (edge, inter) in &self.interactions {
            match self.components.get(edge.component) {
                None => out.push(Violation::UnknownComponent {
                    context: "interaction".into(),
                    component: edge.component,
                }),
                Some(c) => {
                    if !c.has_edge(edge.tail) {
                        out.push(Violation::EdgeOutOfRange {
                            component: c.name.clone(),
                            tail: edge.tail,
                            edges: c.edge_count(),
                        });
                    } else if !seen.insert(*edge) {
                        out.push(Violation::DuplicateInteraction {
                            component: c.name.clone(),
                            tail: edge.tail,
                        });
                    }
                }
            }
            check_vertex("interaction agent".into(), inter.agent, &mut out);
        }
        for m in &self.marks {
            check_vertex("agent mark".into(), *m, &mut out);
        }
        out
    }
}

/// A validated Gauss diagram `(G, S, φ)`.
///
/// The agent set `S` is the union of the acting agents (the support of `φ`)
/// and the explicitly marked vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussDiagram {
    components: Vec<Component>,
    interactions: BTreeMap<EdgeRef, Interaction>,
    marks: BTreeSet<VertexRef>,
}

impl TryFrom<RawDiagram> for GaussDiagram {
    type Error = InvalidDiagram;

    fn try_from(raw: RawDiagram) -> Result<Self, Self::Error> {
        let violations = raw.validate();
        if !violations.is_empty() {
            return Err(InvalidDiagram(violations));
        }
        Ok(GaussDiagram {
            components: raw.components,
            interactions: raw.interactions.into_iter().collect(),
            marks: raw.marks.into_iter().collect(),
        })
    }
}

impl GaussDiagram {
    pub fn new(
        components: Vec<Component>,
        interactions: impl IntoIterator<Item = (EdgeRef, Interaction)>,
        marks: impl IntoIterator<Item = VertexRef>,
    ) -> Result<Self, InvalidDiagram> {
        RawDiagram {
            components,
            interactions: interactions.into_iter().collect(),
            marks: marks.into_iter().collect(),
        }
        .try_into()
    }

    /// The trivial diagram `(G, ∅, φ_∅)` on the given components.
    pub fn trivial(components: Vec<Component>) -> Result<Self, InvalidDiagram> {
        Self::new(components, [], [])
    }

    pub(crate) fn from_parts_unchecked(
        components: Vec<Component>,
        interactions: BTreeMap<EdgeRef, Interaction>,
        marks: BTreeSet<VertexRef>,
    ) -> Self {
        let d = GaussDiagram {
            components,
            interactions,
            marks,
        };
        debug_assert!(d.to_raw().validate().is_empty(), "{:?}", d.to_raw().validate());
        d
    }

    pub fn to_raw(&self) -> RawDiagram {
        RawDiagram {
            components: self.components.clone(),
            interactions: self.interactions.iter().map(|(e, i)| (*e, *i)).collect(),
            marks: self.marks.iter().copied().collect(),
        }
    }

    /// Always empty: a `GaussDiagram` is valid by construction.
    pub fn validate(&self) -> Vec<Violation> {
        self.to_raw().validate()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &Component {
        &self.components[index]
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    pub fn interactions(&self) -> &BTreeMap<EdgeRef, Interaction> {
        &self.interactions
    }

    pub fn interaction(&self, edge: EdgeRef) -> Option<Interaction> {
        self.interactions.get(&edge).copied()
    }

    pub fn interaction_count(&self) -> usize {
        self.interactions.len()
    }

    pub fn marks(&self) -> &BTreeSet<VertexRef> {
        &self.marks
    }

    pub fn is_marked(&self, v: VertexRef) -> bool {
        self.marks.contains(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.size).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(Component::edge_count).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(c, comp)| (0..comp.size).map(move |p| VertexRef::new(c, p)))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(c, comp)| (0..comp.edge_count()).map(move |t| EdgeRef::new(c, t)))
    }

    pub fn has_edge(&self, edge: EdgeRef) -> bool {
        self.components
            .get(edge.component)
            .is_some_and(|c| c.has_edge(edge.tail))
    }

    pub fn has_vertex(&self, v: VertexRef) -> bool {
        self.components.get(v.component).is_some_and(|c| v.position < c.size)
    }

    pub fn tail(&self, edge: EdgeRef) -> VertexRef {
        edge.tail_vertex()
    }

    pub fn head(&self, edge: EdgeRef) -> VertexRef {
        VertexRef::new(edge.component, self.components[edge.component].head_of(edge.tail))
    }

    pub fn in_edge(&self, v: VertexRef) -> Option<EdgeRef> {
        self.components[v.component]
            .in_edge(v.position)
            .map(|t| EdgeRef::new(v.component, t))
    }

    pub fn out_edge(&self, v: VertexRef) -> Option<EdgeRef> {
        self.components[v.component]
            .out_edge(v.position)
            .map(|t| EdgeRef::new(v.component, t))
    }

    /// Vertices that act on at least one edge.
    pub fn support(&self) -> BTreeSet<VertexRef> {
        self.interactions.values().map(|i| i.agent).collect()
    }

    /// The agent set `S`: acting agents plus marked vertices.
    pub fn agents(&self) -> BTreeSet<VertexRef> {
        let mut s = self.support();
        s.extend(self.marks.iter().copied());
        s
    }

    pub fn is_acting(&self, v: VertexRef) -> bool {
        self.interactions.values().any(|i| i.agent == v)
    }

    /// `φ(v)`: the edges acted on by `v`, with signs, in edge order.
    pub fn action(&self, v: VertexRef) -> Vec<(EdgeRef, Sign)> {
        self.interactions
            .iter()
            .filter(|(_, i)| i.agent == v)
            .map(|(e, i)| (*e, i.sign))
            .collect()
    }

    /// Inert vertices neither act nor carry a mark.
    pub fn is_inert(&self, v: VertexRef) -> bool {
        !self.is_marked(v) && !self.is_acting(v)
    }

    pub fn is_trivial(&self) -> bool {
        self.interactions.is_empty()
    }

    pub fn bare_edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.edges().filter(|e| !self.interactions.contains_key(e))
    }

    /// Same graph, no interactions and no marks.
    pub fn trivialized(&self) -> GaussDiagram {
        GaussDiagram {
            components: self.components.clone(),
            interactions: BTreeMap::new(),
            marks: BTreeSet::new(),
        }
    }

    pub fn vertex_name(&self, v: VertexRef) -> String {
        format!("{}.{}", self.components[v.component].name, v.position)
    }

    pub fn edge_name(&self, e: EdgeRef) -> String {
        format!("{}[{}]", self.components[e.component].name, e.tail)
    }

    /// Dense index of a vertex, components laid out consecutively.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.components
            .iter()
            .map(|c| {
                let o = acc;
                acc += c.size;
                o
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_interaction() -> GaussDiagram {
        GaussDiagram::new(
            vec![Component::path("P", 2), Component::cycle("Q", 1)],
            [(EdgeRef::new(0, 0), Interaction::new(VertexRef::new(1, 0), Sign::Pos))],
            [],
        )
        .unwrap()
    }

    #[test]
    fn well_formed_cycle_has_no_violations() {
        let raw = RawDiagram {
            components: vec![Component::cycle("Q", 1)],
            ..Default::default()
        };
        assert!(raw.validate().is_empty());
    }

    #[test]
    fn out_of_range_agent_is_one_violation() {
        let raw = RawDiagram {
            components: vec![Component::cycle("C", 3)],
            interactions: vec![(EdgeRef::new(0, 0), Interaction::new(VertexRef::new(0, 5), Sign::Pos))],
            marks: vec![],
        };
        let v = raw.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::VertexOutOfRange { position: 5, .. }));
        assert!(v[0].to_string().contains("C.5"));
    }

    #[test]
    fn duplicate_interaction_is_one_violation() {
        let raw = RawDiagram {
            components: vec![Component::cycle("C", 3)],
            interactions: vec![
                (EdgeRef::new(0, 1), Interaction::new(VertexRef::new(0, 0), Sign::Pos)),
                (EdgeRef::new(0, 1), Interaction::new(VertexRef::new(0, 2), Sign::Neg)),
            ],
            marks: vec![],
        };
        assert_eq!(
            raw.validate(),
            vec![Violation::DuplicateInteraction {
                component: "C".into(),
                tail: 1
            }]
        );
        assert!(GaussDiagram::try_from(raw).is_err());
    }

    #[test]
    fn path_last_vertex_has_no_out_edge() {
        let raw = RawDiagram {
            components: vec![Component::path("P", 2)],
            interactions: vec![(EdgeRef::new(0, 1), Interaction::new(VertexRef::new(0, 0), Sign::Pos))],
            marks: vec![],
        };
        assert!(matches!(
            raw.validate()[..],
            [Violation::EdgeOutOfRange { tail: 1, edges: 1, .. }]
        ));
    }

    #[test]
    fn support_semantics() {
        let trivial = GaussDiagram::trivial(vec![Component::cycle("Q", 4)]).unwrap();
        assert!(trivial.support().is_empty());

        let d = single_interaction();
        assert_eq!(d.support(), BTreeSet::from([VertexRef::new(1, 0)]));

        let two = GaussDiagram::new(
            vec![Component::path("P", 3), Component::cycle("Q", 1)],
            [
                (EdgeRef::new(0, 0), Interaction::new(VertexRef::new(1, 0), Sign::Pos)),
                (EdgeRef::new(0, 1), Interaction::new(VertexRef::new(1, 0), Sign::Neg)),
            ],
            [],
        )
        .unwrap();
        assert_eq!(two.support(), BTreeSet::from([VertexRef::new(1, 0)]));
    }

    #[test]
    fn edge_and_vertex_counts() {
        let c = Component::cycle("C", 1);
        assert_eq!(c.edge_count(), 1);
        assert_eq!(c.head_of(0), 0);
        assert_eq!(Component::path("P", 1).edge_count(), 0);
        assert_eq!(Component::path("P", 5).edge_count(), 4);
        let d = single_interaction();
        assert_eq!(d.vertex_count(), 3);
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.head(EdgeRef::new(1, 0)), VertexRef::new(1, 0));
        assert_eq!(d.in_edge(VertexRef::new(0, 0)), None);
        assert_eq!(d.in_edge(VertexRef::new(1, 0)), Some(EdgeRef::new(1, 0)));
    }

    #[test]
    fn sign_negation_is_involution() {
        for s in [Sign::Pos, Sign::Neg] {
            assert_eq!(-(-s), s);
            assert_ne!(-s, s);
        }
    }
}
