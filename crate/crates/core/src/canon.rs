//! Canonical forms of diagrams up to component renaming, component reordering
//! and cycle rotation.
//!
//! Components are grouped into blocks (connected through interactions). Each
//! block is encoded by a traversal that starts at some vertex, scans its
//! component in order, and numbers further components in the order they are
//! first referenced. The block code is the least traversal code over all
//! starting points and all tie choices; the diagram code is the sorted list of
//! block codes. Orientation is never reversed.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use crate::diagram::{Component, EdgeRef, GaussDiagram, Kind, Sign, VertexRef};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Maps references of a diagram to the references of its canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    new_index: Vec<usize>,
    shift: Vec<usize>,
    sizes: Vec<usize>,
}

impl Relabeling {
    pub fn vertex(&self, v: VertexRef) -> VertexRef {
        let n = self.sizes[v.component];
        VertexRef::new(
            self.new_index[v.component],
            (v.position + n - self.shift[v.component]) % n,
        )
    }

    pub fn edge(&self, e: EdgeRef) -> EdgeRef {
        let n = self.sizes[e.component];
        EdgeRef::new(self.new_index[e.component], (e.tail + n - self.shift[e.component]) % n)
    }

    /// New index of an old component.
    pub fn component(&self, old: usize) -> usize {
        self.new_index[old]
    }

    pub fn apply(&self, d: &GaussDiagram) -> GaussDiagram {
        let mut components: Vec<Option<Component>> = vec![None; d.components().len()];
        for (old, c) in d.components().iter().enumerate() {
            components[self.new_index[old]] = Some(c.clone());
        }
        let interactions = d
            .interactions()
            .iter()
            .map(|(e, i)| {
                (
                    self.edge(*e),
                    crate::diagram::Interaction::new(self.vertex(i.agent), i.sign),
                )
            })
            .collect();
        let marks = d.marks().iter().map(|v| self.vertex(*v)).collect();
        GaussDiagram::from_parts_unchecked(
            components.into_iter().map(Option::unwrap).collect(),
            interactions,
            marks,
        )
    }
}

/// Result of canonicalization.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub diagram: GaussDiagram,
    pub code: CanonicalCode,
    pub relabeling: Relabeling,
}

pub fn canonicalize(d: &GaussDiagram) -> (GaussDiagram, CanonicalCode) {
    let c = canonical_form(d);
    (c.diagram, c.code)
}

pub fn canonical_code(d: &GaussDiagram) -> CanonicalCode {
    canonical_form(d).code
}

pub fn canonical_form(d: &GaussDiagram) -> Canonical {
    let blocks = blocks(d);
    let mut results: Vec<Leaf> = blocks.iter().map(|b| encode_block(d, b)).collect();
    results.sort_by(|a, b| a.key_cmp(b));

    let ncomp = d.components().len();
    let mut new_index = vec![0; ncomp];
    let mut shift = vec![0; ncomp];
    let mut next = 0;
    let mut code = String::new();
    for (i, leaf) in results.iter().enumerate() {
        if i > 0 {
            code.push('|');
        }
        code.push_str(&leaf.code);
        for &(comp, s) in &leaf.order {
            new_index[comp] = next;
            shift[comp] = s;
            next += 1;
        }
    }
    let relabeling = Relabeling {
        new_index,
        shift,
        sizes: d.components().iter().map(|c| c.size).collect(),
    };
    Canonical {
        diagram: relabeling.apply(d),
        code: CanonicalCode(code),
        relabeling,
    }
}

/// Components grouped by the connectivity induced by interactions, each block
/// listed in increasing component order.
fn blocks(d: &GaussDiagram) -> Vec<Vec<usize>> {
    let n = d.components().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (e, i) in d.interactions() {
        let a = find(&mut parent, e.component);
        let b = find(&mut parent, i.agent.component);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in 0..n {
        let r = find(&mut parent, c);
        groups[r].push(c);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

#[derive(Clone, Debug)]
struct Leaf {
    code: String,
    names: Vec<String>,
    order: Vec<(usize, usize)>,
}

impl Leaf {
    fn key_cmp(&self, other: &Leaf) -> Ordering {
        self.code.cmp(&other.code).then_with(|| self.names.cmp(&other.names))
    }
}

#[derive(Clone)]
struct Traversal {
    order: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    code: String,
    scanned: usize,
}

struct BlockEncoder<'a> {
    d: &'a GaussDiagram,
    block: &'a [usize],
    best: Option<Leaf>,
}

fn encode_block(d: &GaussDiagram, block: &[usize]) -> Leaf {
    let mut enc = BlockEncoder { d, block, best: None };
    // Only starts whose first component token is minimal can win.
    let head_token = |c: &Component| format!("{}{}:", kind_letter(c.kind), c.size);
    let min_token = block
        .iter()
        .map(|&c| head_token(d.component(c)))
        .min()
        .expect("blocks are non-empty");
    for &c in block {
        let comp = d.component(c);
        if head_token(comp) != min_token {
            continue;
        }
        let starts = match comp.kind {
            Kind::Path => 0..1,
            Kind::Cycle => 0..comp.size,
        };
        for s in starts {
            let mut t = Traversal {
                order: Vec::with_capacity(block.len()),
                index: vec![None; d.components().len()],
                code: String::new(),
                scanned: 0,
            };
            t.index[c] = Some(0);
            t.order.push((c, s));
            enc.run(t);
        }
    }
    enc.best.expect("at least one start")
}

fn kind_letter(k: Kind) -> char {
    match k {
        Kind::Path => 'P',
        Kind::Cycle => 'C',
    }
}

fn is_worse(partial: &str, best: &str) -> bool {
    let n = partial.len().min(best.len());
    match partial.as_bytes()[..n].cmp(&best.as_bytes()[..n]) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => partial.len() > best.len(),
    }
}

impl BlockEncoder<'_> {
    fn run(&mut self, mut t: Traversal) {
        loop {
            while t.scanned < t.order.len() {
                self.scan(&mut t);
                if let Some(best) = &self.best {
                    if is_worse(&t.code, &best.code) {
                        return;
                    }
                }
            }
            if t.order.len() == self.block.len() {
                let leaf = Leaf {
                    names: t.order.iter().map(|&(c, _)| self.d.component(c).name.clone()).collect(),
                    code: t.code,
                    order: t.order,
                };
                let better = match &self.best {
                    None => true,
                    Some(b) => leaf.key_cmp(b) == Ordering::Less,
                };
                if better {
                    self.best = Some(leaf);
                }
                return;
            }
            let candidates = self.backward_candidates(&t);
            debug_assert!(!candidates.is_empty(), "block must be connected");
            if candidates.len() == 1 {
                let (c, s) = candidates[0];
                t.index[c] = Some(t.order.len());
                t.order.push((c, s));
                continue;
            }
            for &(c, s) in &candidates {
                let mut branch = t.clone();
                branch.index[c] = Some(branch.order.len());
                branch.order.push((c, s));
                self.run(branch);
            }
            return;
        }
    }

    fn label(&self, t: &Traversal, v: VertexRef) -> (usize, usize) {
        let idx = t.index[v.component].expect("labelled component");
        let (_, s) = t.order[idx];
        let n = self.d.component(v.component).size;
        (idx, (v.position + n - s) % n)
    }

    fn scan(&self, t: &mut Traversal) {
        let (c, s) = t.order[t.scanned];
        let comp = self.d.component(c);
        let n = comp.size;
        let _ = write!(t.code, "{}{}:", kind_letter(comp.kind), n);
        for i in 0..n {
            let old = (i + s) % n;
            let v = VertexRef::new(c, old);
            if self.d.is_marked(v) {
                t.code.push('m');
            }
            if !comp.has_edge(old) {
                t.code.push('_');
            } else if let Some(inter) = self.d.interaction(EdgeRef::new(c, old)) {
                let a = inter.agent;
                if t.index[a.component].is_none() {
                    let shift = match self.d.component(a.component).kind {
                        Kind::Cycle => a.position,
                        Kind::Path => 0,
                    };
                    t.index[a.component] = Some(t.order.len());
                    t.order.push((a.component, shift));
                }
                let (k, p) = self.label(t, a);
                let sym = match inter.sign {
                    Sign::Pos => '>',
                    Sign::Neg => '<',
                };
                let _ = write!(t.code, "{sym}{k}.{p}");
            } else {
                t.code.push('.');
            }
            t.code.push(',');
        }
        t.code.push(';');
        t.scanned += 1;
    }

    /// Undiscovered components entered through an edge acted on by an already
    /// labelled agent, restricted to the least (agent label, sign) key.
    fn backward_candidates(&self, t: &Traversal) -> Vec<(usize, usize)> {
        let mut best_key: Option<((usize, usize), Sign)> = None;
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (e, inter) in self.d.interactions() {
            if t.index[e.component].is_some() || t.index[inter.agent.component].is_none() {
                continue;
            }
            let key = (self.label(t, inter.agent), inter.sign);
            let comp = self.d.component(e.component);
            let entry = match comp.kind {
                Kind::Cycle => (e.component, e.tail),
                Kind::Path => (e.component, 0),
            };
            match best_key {
                Some(k) if key > k => continue,
                Some(k) if key == k => {
                    if !out.contains(&entry) {
                        out.push(entry);
                    }
                }
                _ => {
                    best_key = Some(key);
                    out.clear();
                    out.push(entry);
                }
            }
        }
        out
    }
}

/// Which vertices count as agents when projecting to the underlying graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgentReading {
    /// Only explicitly marked vertices. Unchanged by Reidemeister moves.
    Marks,
    /// Acting agents together with marked vertices.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphComponent {
    pub kind: Kind,
    pub size: usize,
    /// Agent flags, rotated to the least pattern for cycles.
    pub agents: Vec<bool>,
}

/// The pair `(G, S)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnderlyingGraph {
    pub components: Vec<GraphComponent>,
}

impl UnderlyingGraph {
    pub fn shape(&self) -> Vec<(Kind, usize)> {
        self.components.iter().map(|c| (c.kind, c.size)).collect()
    }

    pub fn agent_count(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.agents.iter().filter(|&&a| a).count())
            .sum()
    }

    pub fn code(&self) -> String {
        self.components
            .iter()
            .map(|c| {
                let bits: String = c.agents.iter().map(|&a| if a { '1' } else { '0' }).collect();
                format!("{}{}:{}", kind_letter(c.kind), c.size, bits)
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub(crate) fn from_flags(parts: Vec<(Kind, Vec<bool>)>) -> Self {
        let mut components: Vec<GraphComponent> = parts
            .into_iter()
            .map(|(kind, flags)| {
                let agents = match kind {
                    Kind::Path => flags,
                    Kind::Cycle => least_rotation(&flags),
                };
                GraphComponent {
                    kind,
                    size: agents.len(),
                    agents,
                }
            })
            .collect();
        components.sort();
        UnderlyingGraph { components }
    }
}

impl fmt::Display for UnderlyingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

pub(crate) fn least_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    (0..seq.len().max(1))
        .map(|s| {
            seq[s.min(seq.len())..]
                .iter()
                .chain(seq[..s.min(seq.len())].iter())
                .cloned()
                .collect::<Vec<T>>()
        })
        .min()
        .unwrap_or_default()
}

/// The underlying graph under the marks-only reading of `S`.
pub fn underlying_graph(d: &GaussDiagram) -> UnderlyingGraph {
    underlying_graph_with(d, AgentReading::Marks)
}

pub fn underlying_graph_with(d: &GaussDiagram, reading: AgentReading) -> UnderlyingGraph {
    let agents = match reading {
        AgentReading::Marks => d.marks().clone(),
        AgentReading::Full => d.agents(),
    };
    UnderlyingGraph::from_flags(
        d.components()
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                (
                    comp.kind,
                    (0..comp.size).map(|p| agents.contains(&VertexRef::new(c, p))).collect(),
                )
            })
            .collect(),
    )
}
