//! Bounded simplification and equivalence search over the move graph.
//!
//! States are canonical diagrams keyed by their code. Every move is
//! invertible, so equivalence is searched from both ends at once. Frontier
//! expansion runs in parallel; results are merged sequentially in frontier
//! order, so verdicts do not depend on the number of workers.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::canon::{canonical_form, canonicalize, CanonicalCode, UnderlyingGraph};
use crate::diagram::{GaussDiagram, Kind, VertexRef};
use crate::invariants::fingerprint::{default_panel, fingerprint, Certificate, MoveClass};
use crate::invariants::linking::{linking_graph, LinkingVariant};
use crate::invariants::quandle::MultiQuandle;
use crate::moves::{apply, apply_with_inverse, enumerate_moves, KindSet, Move, MoveKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    /// Longest move sequence considered (total over both search directions).
    pub max_depth: usize,
    /// Number of distinct states visited before giving up.
    pub max_states: usize,
    /// Allow (de)stabilization.
    pub stable: bool,
    /// Allow false (de)stabilization.
    pub use_false: bool,
    /// Allow moves that add interactions or vertices.
    pub insertions: bool,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 4,
            max_states: 200_000,
            stable: false,
            use_false: false,
            insertions: true,
            workers: 0,
        }
    }
}

impl SearchBudget {
    pub fn depth(max_depth: usize) -> Self {
        SearchBudget {
            max_depth,
            ..Default::default()
        }
    }

    pub fn stable(self, stable: bool) -> Self {
        SearchBudget { stable, ..self }
    }

    pub fn with_false(self, use_false: bool) -> Self {
        SearchBudget { use_false, ..self }
    }

    pub fn states(self, max_states: usize) -> Self {
        SearchBudget { max_states, ..self }
    }

    pub fn insertions(self, insertions: bool) -> Self {
        SearchBudget { insertions, ..self }
    }

    pub fn workers(self, workers: usize) -> Self {
        SearchBudget { workers, ..self }
    }

    pub fn kinds(&self) -> KindSet {
        let mut k = if self.stable {
            KindSet::stable()
        } else {
            KindSet::reidemeister()
        };
        if self.use_false {
            k = k.with(MoveKind::FalseDestab).with(MoveKind::FalseStab);
        }
        k
    }

    pub fn move_class(&self) -> MoveClass {
        if self.use_false {
            MoveClass::WithFalse
        } else if self.stable {
            MoveClass::Stable
        } else {
            MoveClass::Reidemeister
        }
    }

    /// Stable text form, used as a cache key. Worker count is excluded
    /// because it does not affect results.
    pub fn describe(&self) -> String {
        format!(
            "depth={} states={} stable={} false={} insert={}",
            self.max_depth, self.max_states, self.stable, self.use_false, self.insertions
        )
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.workers == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.workers).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

/// A move sequence. Each move applies to the canonical form of the
/// previous diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub start: GaussDiagram,
    pub steps: Vec<Move>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

impl std::error::Error for ReplayError {}

impl Witness {
    fn empty(d: &GaussDiagram) -> Self {
        Witness {
            start: canonicalize(d).0,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step, returning the canonical end diagram.
    pub fn replay(&self) -> Result<GaussDiagram, ReplayError> {
        let mut cur = canonicalize(&self.start).0;
        for (i, mv) in self.steps.iter().enumerate() {
            let next = apply(&cur, mv).map_err(|e| ReplayError {
                step: i,
                reason: e.to_string(),
            })?;
            cur = canonicalize(&next).0;
        }
        Ok(cur)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes(Witness),
    No(Certificate),
    Unknown,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown)
    }
}

fn score(d: &GaussDiagram) -> (usize, usize) {
    (d.interaction_count(), d.vertex_count())
}

struct Child {
    code: CanonicalCode,
    diagram: GaussDiagram,
    /// For forward expansion the move from parent to child; for backward
    /// expansion the move from child to parent.
    step: Move,
}

fn expand(d: &GaussDiagram, kinds: KindSet, adds: bool, backward: bool) -> Vec<Child> {
    enumerate_moves(d, kinds, adds)
        .into_iter()
        .map(|mv| {
            let (out, inv) = apply_with_inverse(d, &mv).expect("enumerated moves apply");
            let cf = canonical_form(&out);
            let step = if backward { inv.relabel(&cf.relabeling) } else { mv };
            Child {
                code: cf.code,
                diagram: cf.diagram,
                step,
            }
        })
        .collect()
}

struct Tree {
    parent: HashMap<CanonicalCode, Option<(CanonicalCode, Move)>>,
    frontier: Vec<(CanonicalCode, GaussDiagram)>,
    depth: usize,
}

impl Tree {
    fn new(d: &GaussDiagram) -> Self {
        let (c, code) = canonicalize(d);
        let mut parent = HashMap::new();
        parent.insert(code.clone(), None);
        Tree {
            parent,
            frontier: vec![(code, c)],
            depth: 0,
        }
    }

    /// Moves from the root to `code` (forward tree).
    fn path_from_root(&self, code: &CanonicalCode) -> Vec<Move> {
        let mut out = Vec::new();
        let mut cur = code.clone();
        while let Some(Some((p, mv))) = self.parent.get(&cur) {
            out.push(mv.clone());
            cur = p.clone();
        }
        out.reverse();
        out
    }

    /// Moves from `code` back to the root (backward tree).
    fn path_to_root(&self, code: &CanonicalCode) -> Vec<Move> {
        let mut out = Vec::new();
        let mut cur = code.clone();
        while let Some(Some((p, mv))) = self.parent.get(&cur) {
            out.push(mv.clone());
            cur = p.clone();
        }
        out
    }
}

enum Step {
    Met(CanonicalCode),
    Continue,
    Exhausted,
    OutOfStates,
}

fn grow(
    tree: &mut Tree,
    other: &Tree,
    kinds: KindSet,
    adds: bool,
    backward: bool,
    states: &mut usize,
    max_states: usize,
) -> Step {
    let expanded: Vec<Vec<Child>> = tree
        .frontier
        .par_iter()
        .map(|(_, d)| expand(d, kinds, adds, backward))
        .collect();
    let mut next = Vec::new();
    let mut met = None;
    for ((pcode, _), children) in tree.frontier.iter().zip(expanded) {
        for ch in children {
            if tree.parent.contains_key(&ch.code) {
                continue;
            }
            tree.parent.insert(ch.code.clone(), Some((pcode.clone(), ch.step)));
            *states += 1;
            if met.is_none() && other.parent.contains_key(&ch.code) {
                met = Some(ch.code.clone());
            }
            next.push((ch.code, ch.diagram));
            if met.is_none() && *states >= max_states {
                return Step::OutOfStates;
            }
        }
    }
    tree.frontier = next;
    tree.depth += 1;
    match met {
        Some(code) => Step::Met(code),
        None if tree.frontier.is_empty() => Step::Exhausted,
        None => Step::Continue,
    }
}

/// Bidirectional search for a move path; `None` when the budget runs out.
fn connect(m1: &GaussDiagram, m2: &GaussDiagram, budget: &SearchBudget) -> Option<Witness> {
    let mut a = Tree::new(m1);
    let mut b = Tree::new(m2);
    let start = a.frontier[0].1.clone();
    if a.frontier[0].0 == b.frontier[0].0 {
        return Some(Witness {
            start,
            steps: Vec::new(),
        });
    }
    let kinds = budget.kinds();
    let mut states = 2;
    while a.depth + b.depth < budget.max_depth {
        let forward = a.frontier.len() <= b.frontier.len();
        let step = if forward {
            grow(
                &mut a,
                &b,
                kinds,
                budget.insertions,
                false,
                &mut states,
                budget.max_states,
            )
        } else {
            grow(
                &mut b,
                &a,
                kinds,
                budget.insertions,
                true,
                &mut states,
                budget.max_states,
            )
        };
        match step {
            Step::Met(code) => {
                let mut steps = a.path_from_root(&code);
                steps.extend(b.path_to_root(&code));
                return Some(Witness { start, steps });
            }
            Step::Continue => {}
            Step::Exhausted | Step::OutOfStates => return None,
        }
    }
    None
}

pub fn equivalent(m1: &GaussDiagram, m2: &GaussDiagram, budget: &SearchBudget) -> Verdict {
    equivalent_with_panel(m1, m2, budget, &default_panel())
}

pub fn equivalent_with_panel(
    m1: &GaussDiagram,
    m2: &GaussDiagram,
    budget: &SearchBudget,
    panel: &[MultiQuandle],
) -> Verdict {
    budget.run(|| {
        let (f1, f2) = rayon::join(|| fingerprint(m1, panel), || fingerprint(m2, panel));
        if let Some(cert) = f1.distinguish(&f2, budget.move_class()) {
            return Verdict::No(cert);
        }
        match connect(m1, m2, budget) {
            Some(w) => Verdict::Yes(w),
            None => Verdict::Unknown,
        }
    })
}

/// The trivial diagram a search for triviality aims at: same graph and
/// marks, no interactions; fully destabilized when stable moves are allowed.
pub fn trivial_target(m: &GaussDiagram, budget: &SearchBudget) -> GaussDiagram {
    let mut t = m.trivialized();
    if budget.stable || budget.use_false {
        let kinds = KindSet::empty().with(MoveKind::Destab);
        while let Some(mv) = enumerate_moves(&t, kinds, false).into_iter().next() {
            t = apply(&t, &mv).expect("enumerated moves apply");
        }
    }
    t
}

pub fn is_trivial(m: &GaussDiagram, budget: &SearchBudget) -> Verdict {
    if m.is_trivial() {
        return Verdict::Yes(Witness::empty(m));
    }
    budget.run(|| {
        let simplified = simplify_traced(m, budget);
        if simplified.diagram.is_trivial() {
            return Verdict::Yes(simplified.witness);
        }
        equivalent(m, &trivial_target(m, budget), budget)
    })
}

/// Result of greedy simplification.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub diagram: GaussDiagram,
    pub witness: Witness,
}

fn reducing_kinds(budget: &SearchBudget) -> KindSet {
    let mut k: KindSet = [
        MoveKind::R1Remove,
        MoveKind::R2Cancel,
        MoveKind::R3Slide,
        MoveKind::R3Unslide,
    ]
    .into_iter()
    .collect();
    if budget.stable {
        k = k.with(MoveKind::Destab);
    }
    if budget.use_false {
        k = k.with(MoveKind::FalseDestab);
    }
    k
}

/// Least `(score, code)` successor that strictly improves the score.
fn best_improvement(d: &GaussDiagram, kinds: KindSet) -> Option<(Move, GaussDiagram, CanonicalCode)> {
    let here = score(d);
    expand(d, kinds, false, false)
        .into_iter()
        .filter(|c| score(&c.diagram) < here)
        .min_by(|x, y| (score(&x.diagram), &x.code).cmp(&(score(&y.diagram), &y.code)))
        .map(|c| (c.step, c.diagram, c.code))
}

/// Breadth-first walk over score-preserving moves looking for a state with
/// an improving move. Returns the path to that state.
fn plateau_escape(
    d: &GaussDiagram,
    kinds: KindSet,
    max_states: usize,
    max_len: usize,
) -> Option<(Vec<Move>, GaussDiagram)> {
    let here = score(d);
    let (start, code) = canonicalize(d);
    let mut parent: HashMap<CanonicalCode, Option<(CanonicalCode, Move)>> = HashMap::new();
    parent.insert(code.clone(), None);
    let mut queue = VecDeque::from([(code, start, 0usize)]);
    while let Some((code, cur, len)) = queue.pop_front() {
        if len > 0 && best_improvement(&cur, kinds).is_some() {
            let mut path = Vec::new();
            let mut c = code;
            while let Some(Some((p, mv))) = parent.get(&c) {
                path.push(mv.clone());
                c = p.clone();
            }
            path.reverse();
            return Some((path, cur));
        }
        if len >= max_len {
            continue;
        }
        for ch in expand(&cur, kinds, false, false) {
            if score(&ch.diagram) != here || parent.contains_key(&ch.code) {
                continue;
            }
            if parent.len() >= max_states {
                return None;
            }
            parent.insert(ch.code.clone(), Some((code.clone(), ch.step)));
            queue.push_back((ch.code, ch.diagram, len + 1));
        }
    }
    None
}

/// Greedy descent on `(interactions, vertices)` using only non-growing
/// moves, with plateau search over score-preserving moves when stuck.
/// `budget.max_depth` bounds the number of moves.
pub fn simplify_traced(m: &GaussDiagram, budget: &SearchBudget) -> Simplified {
    let kinds = reducing_kinds(budget);
    let mut witness = Witness::empty(m);
    let mut cur = witness.start.clone();
    while witness.len() < budget.max_depth {
        if let Some((mv, next, _)) = best_improvement(&cur, kinds) {
            witness.steps.push(mv);
            cur = next;
            continue;
        }
        let room = budget.max_depth - witness.len();
        match plateau_escape(&cur, kinds, budget.max_states, room.saturating_sub(1)) {
            Some((path, at)) => {
                witness.steps.extend(path);
                cur = at;
            }
            None => break,
        }
    }
    Simplified { diagram: cur, witness }
}

pub fn simplify(m: &GaussDiagram, budget: &SearchBudget) -> GaussDiagram {
    simplify_traced(m, budget).diagram
}

/// Agents certified removable, and a lower bound on how many vertices act
/// in every equivalent diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialAgents {
    pub certified: BTreeSet<VertexRef>,
    /// Count of vertices with nonzero unframed linking vector. Moves only
    /// transport these vectors, so this many vertices act in every
    /// equivalent diagram.
    pub lower_bound: usize,
    /// Every uncertified agent's search ran out of states to visit rather
    /// than out of budget.
    pub exhaustive: bool,
}

/// Searches (on exact positions, Reidemeister moves only) for a diagram in
/// which `r` no longer acts. Returns (found, search closed).
fn agent_removable(m: &GaussDiagram, r: VertexRef, budget: &SearchBudget) -> (bool, bool) {
    if !m.is_acting(r) {
        return (true, true);
    }
    let kinds = KindSet::reidemeister();
    let mut seen: HashSet<GaussDiagram> = HashSet::from([m.clone()]);
    let mut frontier = vec![m.clone()];
    for _ in 0..budget.max_depth {
        let mut next = Vec::new();
        for d in &frontier {
            for mv in enumerate_moves(d, kinds, budget.insertions) {
                let out = apply(d, &mv).expect("enumerated moves apply");
                if !out.is_acting(r) {
                    return (true, true);
                }
                if seen.len() >= budget.max_states {
                    return (false, false);
                }
                if seen.insert(out.clone()) {
                    next.push(out);
                }
            }
        }
        if next.is_empty() {
            return (false, true);
        }
        frontier = next;
    }
    (false, false)
}

pub fn trivial_agents(m: &GaussDiagram, budget: &SearchBudget) -> TrivialAgents {
    let agents: Vec<VertexRef> = m.agents().into_iter().collect();
    let results: Vec<(bool, bool)> = budget.run(|| agents.par_iter().map(|&r| agent_removable(m, r, budget)).collect());
    let certified = agents
        .iter()
        .zip(&results)
        .filter(|(_, (ok, _))| *ok)
        .map(|(r, _)| *r)
        .collect();
    TrivialAgents {
        certified,
        lower_bound: linking_graph(m, LinkingVariant::Unframed).nonzero_count(),
        exhaustive: results.iter().all(|(ok, closed)| *ok || *closed),
    }
}

/// `(G, S)` with certified trivial agents dropped from `S` and every
/// non-agent vertex contracted (one vertex kept per component).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGraph {
    pub graph: UnderlyingGraph,
    pub certified: BTreeSet<VertexRef>,
    pub exhaustive: bool,
}

pub fn reduced_graph(m: &GaussDiagram, budget: &SearchBudget) -> ReducedGraph {
    let ta = trivial_agents(m, budget);
    let agents: BTreeSet<VertexRef> = m.agents().difference(&ta.certified).copied().collect();
    let parts: Vec<(Kind, Vec<bool>)> = m
        .components()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let n = agents.iter().filter(|v| v.component == ci).count();
            (c.kind, if n == 0 { vec![false] } else { vec![true; n] })
        })
        .collect();
    ReducedGraph {
        graph: UnderlyingGraph::from_flags(parts),
        certified: ta.certified,
        exhaustive: ta.exhaustive,
    }
}
