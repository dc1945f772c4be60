//! Local rewrites: Reidemeister I/II/III, stabilization and false
//! stabilization, with enumeration of applicable instances.
//!
//! Every instance is invertible; `apply_with_inverse` returns the instance
//! that undoes it on the rewritten diagram.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::canon::Relabeling;
use crate::diagram::{EdgeRef, GaussDiagram, Interaction, Sign, VertexRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    R1Remove,
    R1Add,
    R2Cancel,
    R2Insert,
    R3Slide,
    R3Unslide,
    Destab,
    Stab,
    FalseDestab,
    FalseStab,
}

impl MoveKind {
    pub const ALL: [MoveKind; 10] = [
        MoveKind::R1Remove,
        MoveKind::R1Add,
        MoveKind::R2Cancel,
        MoveKind::R2Insert,
        MoveKind::R3Slide,
        MoveKind::R3Unslide,
        MoveKind::Destab,
        MoveKind::Stab,
        MoveKind::FalseDestab,
        MoveKind::FalseStab,
    ];

    /// Moves that grow the diagram (their sites are not bounded by removals).
    pub fn is_insertion(self) -> bool {
        matches!(
            self,
            MoveKind::R1Add | MoveKind::R2Insert | MoveKind::Stab | MoveKind::FalseStab
        )
    }

    pub fn inverse(self) -> MoveKind {
        use MoveKind::*;
        match self {
            R1Remove => R1Add,
            R1Add => R1Remove,
            R2Cancel => R2Insert,
            R2Insert => R2Cancel,
            R3Slide => R3Unslide,
            R3Unslide => R3Slide,
            Destab => Stab,
            Stab => Destab,
            FalseDestab => FalseStab,
            FalseStab => FalseDestab,
        }
    }

    pub fn name(self) -> &'static str {
        use MoveKind::*;
        match self {
            R1Remove => "R1_REMOVE",
            R1Add => "R1_ADD",
            R2Cancel => "R2_CANCEL",
            R2Insert => "R2_INSERT",
            R3Slide => "R3_SLIDE",
            R3Unslide => "R3_UNSLIDE",
            Destab => "DESTAB",
            Stab => "STAB",
            FalseDestab => "FALSE_DESTAB",
            FalseStab => "FALSE_STAB",
        }
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of move kinds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct KindSet(u16);

impl KindSet {
    pub const fn empty() -> Self {
        KindSet(0)
    }

    pub fn all() -> Self {
        MoveKind::ALL.into_iter().collect()
    }

    /// R1, R2 and R3 in both directions.
    pub fn reidemeister() -> Self {
        use MoveKind::*;
        [R1Remove, R1Add, R2Cancel, R2Insert, R3Slide, R3Unslide]
            .into_iter()
            .collect()
    }

    /// Reidemeister moves plus (de)stabilization.
    pub fn stable() -> Self {
        Self::reidemeister().with(MoveKind::Destab).with(MoveKind::Stab)
    }

    pub fn with(self, k: MoveKind) -> Self {
        KindSet(self.0 | k.bit())
    }

    pub fn without(self, k: MoveKind) -> Self {
        KindSet(self.0 & !k.bit())
    }

    pub fn contains(self, k: MoveKind) -> bool {
        self.0 & k.bit() != 0
    }

    pub fn iter(self) -> impl Iterator<Item = MoveKind> {
        MoveKind::ALL.into_iter().filter(move |k| self.contains(*k))
    }
}

impl FromIterator<MoveKind> for KindSet {
    fn from_iter<I: IntoIterator<Item = MoveKind>>(iter: I) -> Self {
        iter.into_iter().fold(KindSet::empty(), KindSet::with)
    }
}

/// Endpoint of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

/// Where a stabilization inserts the fresh vertex relative to the split one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Before,
    After,
}

/// A fully located move instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    R1Remove {
        edge: EdgeRef,
    },
    R1Add {
        edge: EdgeRef,
        agent: End,
        sign: Sign,
    },
    R2Cancel {
        vertex: VertexRef,
    },
    /// Installs `sign` on the edge entering `vertex` and its negative on the
    /// edge leaving it, both acted on by `agent`.
    R2Insert {
        vertex: VertexRef,
        agent: VertexRef,
        sign: Sign,
    },
    R3Slide {
        agent: VertexRef,
        edge: EdgeRef,
    },
    R3Unslide {
        agent: VertexRef,
        edge: EdgeRef,
    },
    Destab {
        edge: EdgeRef,
    },
    Stab {
        vertex: VertexRef,
        side: Side,
    },
    FalseDestab {
        edge: EdgeRef,
    },
    /// Splits `vertex`; the fresh vertex takes over the interactions on
    /// `moved`. Mark flags say which of the two vertices end up marked.
    FalseStab {
        vertex: VertexRef,
        side: Side,
        moved: Vec<EdgeRef>,
        old_marked: bool,
        new_marked: bool,
    },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Remove { .. } => MoveKind::R1Remove,
            Move::R1Add { .. } => MoveKind::R1Add,
            Move::R2Cancel { .. } => MoveKind::R2Cancel,
            Move::R2Insert { .. } => MoveKind::R2Insert,
            Move::R3Slide { .. } => MoveKind::R3Slide,
            Move::R3Unslide { .. } => MoveKind::R3Unslide,
            Move::Destab { .. } => MoveKind::Destab,
            Move::Stab { .. } => MoveKind::Stab,
            Move::FalseDestab { .. } => MoveKind::FalseDestab,
            Move::FalseStab { .. } => MoveKind::FalseStab,
        }
    }

    /// Transports the site through a relabeling of the diagram it applies to.
    pub fn relabel(&self, r: &Relabeling) -> Move {
        match self {
            Move::R1Remove { edge } => Move::R1Remove { edge: r.edge(*edge) },
            Move::R1Add { edge, agent, sign } => Move::R1Add {
                edge: r.edge(*edge),
                agent: *agent,
                sign: *sign,
            },
            Move::R2Cancel { vertex } => Move::R2Cancel {
                vertex: r.vertex(*vertex),
            },
            Move::R2Insert { vertex, agent, sign } => Move::R2Insert {
                vertex: r.vertex(*vertex),
                agent: r.vertex(*agent),
                sign: *sign,
            },
            Move::R3Slide { agent, edge } => Move::R3Slide {
                agent: r.vertex(*agent),
                edge: r.edge(*edge),
            },
            Move::R3Unslide { agent, edge } => Move::R3Unslide {
                agent: r.vertex(*agent),
                edge: r.edge(*edge),
            },
            Move::Destab { edge } => Move::Destab { edge: r.edge(*edge) },
            Move::Stab { vertex, side } => Move::Stab {
                vertex: r.vertex(*vertex),
                side: *side,
            },
            Move::FalseDestab { edge } => Move::FalseDestab { edge: r.edge(*edge) },
            Move::FalseStab {
                vertex,
                side,
                moved,
                old_marked,
                new_marked,
            } => {
                let mut moved: Vec<EdgeRef> = moved.iter().map(|e| r.edge(*e)).collect();
                moved.sort();
                Move::FalseStab {
                    vertex: r.vertex(*vertex),
                    side: *side,
                    moved,
                    old_marked: *old_marked,
                    new_marked: *new_marked,
                }
            }
        }
    }

    /// Human-readable description using component names of `d`.
    pub fn describe(&self, d: &GaussDiagram) -> String {
        let v = |x: &VertexRef| {
            if d.has_vertex(*x) {
                d.vertex_name(*x)
            } else {
                format!("#{}.{}", x.component, x.position)
            }
        };
        let e = |x: &EdgeRef| {
            if d.has_edge(*x) {
                d.edge_name(*x)
            } else {
                format!("#{}[{}]", x.component, x.tail)
            }
        };
        match self {
            Move::R1Remove { edge } => format!("R1_REMOVE {}", e(edge)),
            Move::R1Add { edge, agent, sign } => {
                format!("R1_ADD {} {:?} {}", e(edge), agent, sign)
            }
            Move::R2Cancel { vertex } => format!("R2_CANCEL {}", v(vertex)),
            Move::R2Insert { vertex, agent, sign } => format!("R2_INSERT {} by {} {}", v(vertex), v(agent), sign),
            Move::R3Slide { agent, edge } => format!("R3_SLIDE {} by {}", e(edge), v(agent)),
            Move::R3Unslide { agent, edge } => {
                format!("R3_UNSLIDE {} by {}", e(edge), v(agent))
            }
            Move::Destab { edge } => format!("DESTAB {}", e(edge)),
            Move::Stab { vertex, side } => format!("STAB {} {:?}", v(vertex), side),
            Move::FalseDestab { edge } => format!("FALSE_DESTAB {}", e(edge)),
            Move::FalseStab {
                vertex,
                side,
                moved,
                old_marked,
                new_marked,
            } => format!(
                "FALSE_STAB {} {:?} moving [{}] marks {}/{}",
                v(vertex),
                side,
                moved.iter().map(e).collect::<Vec<_>>().join(" "),
                old_marked,
                new_marked
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{kind} not applicable: {reason}")]
    NotApplicable { kind: MoveKind, reason: String },
    #[error("{kind}: reference outside the diagram")]
    BadReference { kind: MoveKind },
}

fn refuse<T>(kind: MoveKind, reason: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError::NotApplicable {
        kind,
        reason: reason.into(),
    })
}

fn check_edge(d: &GaussDiagram, kind: MoveKind, e: EdgeRef) -> Result<(), MoveError> {
    if d.has_edge(e) {
        Ok(())
    } else {
        Err(MoveError::BadReference { kind })
    }
}

fn check_vertex(d: &GaussDiagram, kind: MoveKind, v: VertexRef) -> Result<(), MoveError> {
    if d.has_vertex(v) {
        Ok(())
    } else {
        Err(MoveError::BadReference { kind })
    }
}

fn rebuild(d: &GaussDiagram, interactions: BTreeMap<EdgeRef, Interaction>, marks: BTreeSet<VertexRef>) -> GaussDiagram {
    GaussDiagram::from_parts_unchecked(d.components().to_vec(), interactions, marks)
}

pub fn r1_remove(d: &GaussDiagram, e: EdgeRef) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::R1Remove { edge: e })
}

pub fn r1_add(d: &GaussDiagram, e: EdgeRef, agent: End, sign: Sign) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::R1Add { edge: e, agent, sign })
}

pub fn r2_cancel(d: &GaussDiagram, b: VertexRef) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::R2Cancel { vertex: b })
}

pub fn r2_insert(d: &GaussDiagram, b: VertexRef, agent: VertexRef, sign: Sign) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::R2Insert { vertex: b, agent, sign })
}

pub fn r3_slide(d: &GaussDiagram, c: VertexRef, e: EdgeRef) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::R3Slide { agent: c, edge: e })
}

pub fn r3_unslide(d: &GaussDiagram, c: VertexRef, e: EdgeRef) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::R3Unslide { agent: c, edge: e })
}

pub fn destabilize(d: &GaussDiagram, e: EdgeRef) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::Destab { edge: e })
}

pub fn stabilize(d: &GaussDiagram, v: VertexRef, side: Side) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::Stab { vertex: v, side })
}

pub fn false_destabilize(d: &GaussDiagram, e: EdgeRef) -> Result<GaussDiagram, MoveError> {
    apply(d, &Move::FalseDestab { edge: e })
}

pub fn apply(d: &GaussDiagram, mv: &Move) -> Result<GaussDiagram, MoveError> {
    apply_with_inverse(d, mv).map(|(out, _)| out)
}

/// Applies `mv` and returns the instance that undoes it on the result.
pub fn apply_with_inverse(d: &GaussDiagram, mv: &Move) -> Result<(GaussDiagram, Move), MoveError> {
    let kind = mv.kind();
    match mv {
        Move::R1Remove { edge } => {
            check_edge(d, kind, *edge)?;
            let Some(inter) = d.interaction(*edge) else {
                return refuse(kind, "edge is bare");
            };
            let (tail, head) = (d.tail(*edge), d.head(*edge));
            let end = if inter.agent == tail {
                End::Tail
            } else if inter.agent == head {
                End::Head
            } else {
                return refuse(kind, "agent is not an endpoint of the edge");
            };
            let mut inters = d.interactions().clone();
            inters.remove(edge);
            Ok((
                rebuild(d, inters, d.marks().clone()),
                Move::R1Add {
                    edge: *edge,
                    agent: end,
                    sign: inter.sign,
                },
            ))
        }
        Move::R1Add { edge, agent, sign } => {
            check_edge(d, kind, *edge)?;
            if d.interaction(*edge).is_some() {
                return refuse(kind, "edge already carries an interaction");
            }
            let v = match agent {
                End::Tail => d.tail(*edge),
                End::Head => d.head(*edge),
            };
            let mut inters = d.interactions().clone();
            inters.insert(*edge, Interaction::new(v, *sign));
            Ok((rebuild(d, inters, d.marks().clone()), Move::R1Remove { edge: *edge }))
        }
        Move::R2Cancel { vertex } => {
            check_vertex(d, kind, *vertex)?;
            let (e1, e2) = r2_edges(d, kind, *vertex)?;
            let (Some(i1), Some(i2)) = (d.interaction(e1), d.interaction(e2)) else {
                return refuse(kind, "both incident edges must carry interactions");
            };
            if i1.agent != i2.agent {
                return refuse(kind, "interactions have different agents");
            }
            if i1.sign == i2.sign {
                return refuse(kind, "interactions have equal signs");
            }
            let mut inters = d.interactions().clone();
            inters.remove(&e1);
            inters.remove(&e2);
            Ok((
                rebuild(d, inters, d.marks().clone()),
                Move::R2Insert {
                    vertex: *vertex,
                    agent: i1.agent,
                    sign: i1.sign,
                },
            ))
        }
        Move::R2Insert { vertex, agent, sign } => {
            check_vertex(d, kind, *vertex)?;
            check_vertex(d, kind, *agent)?;
            if agent == vertex {
                return refuse(kind, "the middle vertex cannot be the agent");
            }
            let (e1, e2) = r2_edges(d, kind, *vertex)?;
            if d.interaction(e1).is_some() || d.interaction(e2).is_some() {
                return refuse(kind, "incident edges must be bare");
            }
            let mut inters = d.interactions().clone();
            inters.insert(e1, Interaction::new(*agent, *sign));
            inters.insert(e2, Interaction::new(*agent, -*sign));
            Ok((
                rebuild(d, inters, d.marks().clone()),
                Move::R2Cancel { vertex: *vertex },
            ))
        }
        Move::R3Slide { agent, edge } => {
            let (out, _) = r3(d, kind, *agent, *edge, true)?;
            Ok((
                out,
                Move::R3Unslide {
                    agent: *agent,
                    edge: *edge,
                },
            ))
        }
        Move::R3Unslide { agent, edge } => {
            let (out, _) = r3(d, kind, *agent, *edge, false)?;
            Ok((
                out,
                Move::R3Slide {
                    agent: *agent,
                    edge: *edge,
                },
            ))
        }
        Move::Destab { edge } => {
            check_edge(d, kind, *edge)?;
            if d.interaction(*edge).is_some() {
                return refuse(kind, "edge carries an interaction");
            }
            let (tail, head) = (d.tail(*edge), d.head(*edge));
            if tail == head {
                return refuse(kind, "loop edge cannot be contracted");
            }
            let removed = if d.is_inert(head) {
                End::Head
            } else if d.is_inert(tail) {
                End::Tail
            } else {
                return refuse(kind, "both endpoints are agents");
            };
            let c = contract(d, *edge, removed);
            let side = match removed {
                End::Head => Side::After,
                End::Tail => Side::Before,
            };
            Ok((c.diagram, Move::Stab { vertex: c.merged, side }))
        }
        Move::Stab { vertex, side } => {
            check_vertex(d, kind, *vertex)?;
            let ins = insert_vertex(d, *vertex, *side);
            Ok((ins.diagram, Move::Destab { edge: ins.new_edge }))
        }
        Move::FalseDestab { edge } => {
            check_edge(d, kind, *edge)?;
            if d.interaction(*edge).is_some() {
                return refuse(kind, "edge carries an interaction");
            }
            let (tail, head) = (d.tail(*edge), d.head(*edge));
            if tail == head {
                return refuse(kind, "loop edge cannot be contracted");
            }
            let head_action: Vec<EdgeRef> = d.action(head).into_iter().map(|(e, _)| e).collect();
            let c = contract(d, *edge, End::Head);
            let mut moved: Vec<EdgeRef> = head_action.iter().map(|e| c.edge_map(*e)).collect();
            moved.sort();
            Ok((
                c.diagram,
                Move::FalseStab {
                    vertex: c.merged,
                    side: Side::After,
                    moved,
                    old_marked: d.is_marked(tail),
                    new_marked: d.is_marked(head),
                },
            ))
        }
        Move::FalseStab {
            vertex,
            side,
            moved,
            old_marked,
            new_marked,
        } => {
            check_vertex(d, kind, *vertex)?;
            let action: BTreeSet<EdgeRef> = d.action(*vertex).into_iter().map(|(e, _)| e).collect();
            if !moved.iter().all(|e| action.contains(e)) {
                return refuse(kind, "moved edges must be acted on by the split vertex");
            }
            if d.is_marked(*vertex) != (*old_marked || *new_marked) {
                return refuse(kind, "mark flags must cover exactly the split vertex's mark");
            }
            let ins = insert_vertex(d, *vertex, *side);
            let mut inters = ins.diagram.interactions().clone();
            for e in moved {
                let ne = ins.edge_map(*e);
                let i = inters.get_mut(&ne).expect("moved edge has an interaction");
                i.agent = ins.new_vertex;
            }
            let mut marks = ins.diagram.marks().clone();
            let old = ins.vertex_map(*vertex);
            marks.remove(&old);
            if *old_marked {
                marks.insert(old);
            }
            if *new_marked {
                marks.insert(ins.new_vertex);
            }
            Ok((
                rebuild(&ins.diagram, inters, marks),
                Move::FalseDestab { edge: ins.new_edge },
            ))
        }
    }
}

fn r2_edges(d: &GaussDiagram, kind: MoveKind, b: VertexRef) -> Result<(EdgeRef, EdgeRef), MoveError> {
    let (Some(e1), Some(e2)) = (d.in_edge(b), d.out_edge(b)) else {
        return refuse(kind, "vertex needs an incoming and an outgoing edge");
    };
    if e1 == e2 {
        return refuse(kind, "incoming and outgoing edge coincide");
    }
    if !d.is_inert(b) {
        return refuse(kind, "middle vertex is in the agent set");
    }
    Ok((e1, e2))
}

/// Shared R3 logic. `forward` slides the action of `tail(e)` to `head(e)`.
fn r3(
    d: &GaussDiagram,
    kind: MoveKind,
    c: VertexRef,
    e: EdgeRef,
    forward: bool,
) -> Result<(GaussDiagram, ()), MoveError> {
    check_edge(d, kind, e)?;
    check_vertex(d, kind, c)?;
    let Some(ei) = d.interaction(e) else {
        return refuse(kind, "edge is bare");
    };
    if ei.agent != c {
        return refuse(kind, "edge is not acted on by the given agent");
    }
    let s = ei.sign;
    let (b, bp) = (d.tail(e), d.head(e));
    if b == bp || c == b || c == bp {
        return refuse(kind, "agent and edge endpoints must be distinct");
    }
    if d.is_marked(b) || d.is_marked(bp) {
        return refuse(kind, "edge endpoints must be unmarked");
    }
    let (src, dst) = if forward { (b, bp) } else { (bp, b) };
    let action = d.action(src);
    if action.is_empty() {
        return refuse(kind, "source vertex does not act");
    }
    if d.is_acting(dst) {
        return refuse(kind, "target vertex already acts");
    }
    let mut inters = d.interactions().clone();
    for (f, t) in action {
        // Forward: f = (x -> y) under src, partner g = (y -> z) under c.
        // Backward: f = (y -> z) under src, partner g = (x -> y) under c.
        let y = if forward { d.head(f) } else { d.tail(f) };
        let partner = if forward { d.out_edge(y) } else { d.in_edge(y) };
        let Some(g) = partner else {
            return refuse(kind, "an acted edge has no neighbouring edge");
        };
        if d.interaction(g) != Some(Interaction::new(c, s)) {
            return refuse(
                kind,
                "every acted edge must be followed by an edge under the same agent and sign",
            );
        }
        if !d.is_inert(y) {
            return refuse(kind, "intermediate vertex must be inert");
        }
        inters.insert(f, Interaction::new(c, s));
        inters.insert(g, Interaction::new(dst, t));
    }
    Ok((rebuild(d, inters, d.marks().clone()), ()))
}

struct Contracted {
    diagram: GaussDiagram,
    merged: VertexRef,
    component: usize,
    removed_pos: usize,
    kept_pos: usize,
}

impl Contracted {
    fn pos_map(&self, q: usize) -> usize {
        let q = if q == self.removed_pos { self.kept_pos } else { q };
        if q > self.removed_pos {
            q - 1
        } else {
            q
        }
    }

    fn edge_map(&self, e: EdgeRef) -> EdgeRef {
        if e.component != self.component {
            return e;
        }
        EdgeRef::new(e.component, self.pos_map(e.tail))
    }
}

/// Contracts the bare edge `e`, deleting the `removed` endpoint. Interactions
/// by the deleted vertex (if any) are reassigned to the surviving one and its
/// mark is carried over.
fn contract(d: &GaussDiagram, e: EdgeRef, removed: End) -> Contracted {
    let comp = e.component;
    let (kept, gone) = match removed {
        End::Head => (d.tail(e), d.head(e)),
        End::Tail => (d.head(e), d.tail(e)),
    };
    let r = gone.position;
    let pos_map = |q: usize| {
        let q = if q == r { kept.position } else { q };
        if q > r {
            q - 1
        } else {
            q
        }
    };
    let vmap = |v: VertexRef| {
        if v.component == comp {
            VertexRef::new(comp, pos_map(v.position))
        } else {
            v
        }
    };
    let mut interactions = BTreeMap::new();
    for (f, i) in d.interactions() {
        debug_assert_ne!(*f, e);
        let nf = if f.component == comp {
            EdgeRef::new(comp, pos_map(f.tail))
        } else {
            *f
        };
        interactions.insert(nf, Interaction::new(vmap(i.agent), i.sign));
    }
    let marks = d.marks().iter().map(|v| vmap(*v)).collect();
    let mut components = d.components().to_vec();
    components[comp].size -= 1;
    Contracted {
        diagram: GaussDiagram::from_parts_unchecked(components, interactions, marks),
        merged: vmap(kept),
        component: comp,
        removed_pos: r,
        kept_pos: kept.position,
    }
}

struct Inserted {
    diagram: GaussDiagram,
    new_vertex: VertexRef,
    new_edge: EdgeRef,
    component: usize,
    split_pos: usize,
    ins: usize,
    side: Side,
}

impl Inserted {
    fn pos_map(&self, q: usize) -> usize {
        if q >= self.ins {
            q + 1
        } else {
            q
        }
    }

    fn vertex_map(&self, v: VertexRef) -> VertexRef {
        if v.component == self.component {
            VertexRef::new(v.component, self.pos_map(v.position))
        } else {
            v
        }
    }

    fn edge_map(&self, e: EdgeRef) -> EdgeRef {
        if e.component != self.component {
            return e;
        }
        if self.side == Side::After && e.tail == self.split_pos {
            EdgeRef::new(e.component, self.ins)
        } else {
            EdgeRef::new(e.component, self.pos_map(e.tail))
        }
    }
}

/// Splits `v`, inserting a fresh inert vertex joined to it by a bare edge.
fn insert_vertex(d: &GaussDiagram, v: VertexRef, side: Side) -> Inserted {
    let comp = v.component;
    let p = v.position;
    let ins = match side {
        Side::After => p + 1,
        Side::Before => p,
    };
    let mut proto = Inserted {
        diagram: d.clone(),
        new_vertex: VertexRef::new(comp, ins),
        new_edge: EdgeRef::new(comp, p),
        component: comp,
        split_pos: p,
        ins,
        side,
    };
    let interactions = d
        .interactions()
        .iter()
        .map(|(f, i)| (proto.edge_map(*f), Interaction::new(proto.vertex_map(i.agent), i.sign)))
        .collect();
    let marks = d.marks().iter().map(|m| proto.vertex_map(*m)).collect();
    let mut components = d.components().to_vec();
    components[comp].size += 1;
    proto.diagram = GaussDiagram::from_parts_unchecked(components, interactions, marks);
    proto
}

/// Largest action for which every split of a vertex is enumerated.
pub const FALSE_STAB_SUBSET_LIMIT: usize = 6;

/// All applicable instances of the requested kinds. Insertion kinds are
/// enumerated only when `include_adds` is set, and only at sites of `d`.
pub fn enumerate_moves(d: &GaussDiagram, kinds: KindSet, include_adds: bool) -> Vec<Move> {
    let mut out = Vec::new();
    let want = |k: MoveKind| kinds.contains(k) && (include_adds || !k.is_insertion());
    let ok = |mv: &Move| apply_with_inverse(d, mv).is_ok();

    if want(MoveKind::R1Remove) {
        for (e, i) in d.interactions() {
            if i.agent == d.tail(*e) || i.agent == d.head(*e) {
                out.push(Move::R1Remove { edge: *e });
            }
        }
    }
    if want(MoveKind::R1Add) {
        for e in d.bare_edges() {
            let loop_edge = d.tail(e) == d.head(e);
            for end in [End::Tail, End::Head] {
                if loop_edge && end == End::Head {
                    continue;
                }
                for sign in [Sign::Pos, Sign::Neg] {
                    out.push(Move::R1Add {
                        edge: e,
                        agent: end,
                        sign,
                    });
                }
            }
        }
    }
    if want(MoveKind::R2Cancel) {
        for v in d.vertices() {
            let mv = Move::R2Cancel { vertex: v };
            if ok(&mv) {
                out.push(mv);
            }
        }
    }
    if want(MoveKind::R2Insert) {
        let all: Vec<VertexRef> = d.vertices().collect();
        for &b in &all {
            let site_ok = r2_edges(d, MoveKind::R2Insert, b)
                .map(|(e1, e2)| d.interaction(e1).is_none() && d.interaction(e2).is_none())
                .unwrap_or(false);
            if !site_ok {
                continue;
            }
            for &a in &all {
                if a == b {
                    continue;
                }
                for sign in [Sign::Pos, Sign::Neg] {
                    out.push(Move::R2Insert {
                        vertex: b,
                        agent: a,
                        sign,
                    });
                }
            }
        }
    }
    for (k, forward) in [(MoveKind::R3Slide, true), (MoveKind::R3Unslide, false)] {
        if !want(k) {
            continue;
        }
        for (e, i) in d.interactions() {
            if r3(d, k, i.agent, *e, forward).is_ok() {
                out.push(if forward {
                    Move::R3Slide {
                        agent: i.agent,
                        edge: *e,
                    }
                } else {
                    Move::R3Unslide {
                        agent: i.agent,
                        edge: *e,
                    }
                });
            }
        }
    }
    if want(MoveKind::Destab) {
        for e in d.bare_edges() {
            let mv = Move::Destab { edge: e };
            if ok(&mv) {
                out.push(mv);
            }
        }
    }
    if want(MoveKind::Stab) {
        for v in d.vertices() {
            for side in [Side::Before, Side::After] {
                out.push(Move::Stab { vertex: v, side });
            }
        }
    }
    if want(MoveKind::FalseDestab) {
        for e in d.bare_edges() {
            if d.tail(e) != d.head(e) {
                out.push(Move::FalseDestab { edge: e });
            }
        }
    }
    if want(MoveKind::FalseStab) {
        for v in d.vertices() {
            let action: Vec<EdgeRef> = d.action(v).into_iter().map(|(e, _)| e).collect();
            if action.len() > FALSE_STAB_SUBSET_LIMIT {
                continue;
            }
            let mark_options: &[(bool, bool)] = if d.is_marked(v) {
                &[(true, false), (false, true), (true, true)]
            } else {
                &[(false, false)]
            };
            for side in [Side::Before, Side::After] {
                for mask in 0u32..(1 << action.len()) {
                    let moved: Vec<EdgeRef> = action
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, e)| *e)
                        .collect();
                    for &(old_marked, new_marked) in mark_options {
                        out.push(Move::FalseStab {
                            vertex: v,
                            side,
                            moved: moved.clone(),
                            old_marked,
                            new_marked,
                        });
                    }
                }
            }
        }
    }
    out
}
