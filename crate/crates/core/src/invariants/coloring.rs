//! Quandle colorings: operation assignments to acting agents plus vertex
//! colors such that every interaction and every bare edge is respected.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::diagram::{GaussDiagram, Sign, VertexRef};
use crate::invariants::quandle::MultiQuandle;

/// One edge constraint: `head = tail` when bare, otherwise
/// `head = tail ▷ agent` (or the inverse operation for negative signs).
#[derive(Clone, Copy, Debug)]
struct Constraint {
    tail: usize,
    head: usize,
    action: Option<(usize, bool)>,
}

/// Flat constraint system over vertex indices.
struct System {
    n: usize,
    constraints: Vec<Constraint>,
    incident: Vec<Vec<usize>>,
    /// Acting agents (vertex indices), in diagram order.
    agents: Vec<usize>,
    agent_slot: Vec<Option<usize>>,
    vertices: Vec<VertexRef>,
}

impl System {
    fn new(d: &GaussDiagram) -> Self {
        let offsets = d.offsets();
        let index = |v: VertexRef| offsets[v.component] + v.position;
        let vertices: Vec<VertexRef> = d.vertices().collect();
        let n = vertices.len();
        let agents: Vec<usize> = d.support().into_iter().map(index).collect();
        let mut agent_slot = vec![None; n];
        for (i, &a) in agents.iter().enumerate() {
            agent_slot[a] = Some(i);
        }
        let mut constraints = Vec::new();
        let mut incident = vec![Vec::new(); n];
        for e in d.edges() {
            let c = Constraint {
                tail: index(d.tail(e)),
                head: index(d.head(e)),
                action: d.interaction(e).map(|i| (index(i.agent), i.sign == Sign::Pos)),
            };
            let k = constraints.len();
            incident[c.tail].push(k);
            if c.head != c.tail {
                incident[c.head].push(k);
            }
            if let Some((a, _)) = c.action {
                if a != c.tail && a != c.head {
                    incident[a].push(k);
                }
            }
            constraints.push(c);
        }
        System {
            n,
            constraints,
            incident,
            agents,
            agent_slot,
            vertices,
        }
    }
}

/// Backtracking search with propagation for one fixed operation assignment.
struct Solver<'a> {
    sys: &'a System,
    q: &'a MultiQuandle,
    ops: &'a [usize],
    color: Vec<usize>,
    trail: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl<'a> Solver<'a> {
    fn new(sys: &'a System, q: &'a MultiQuandle, ops: &'a [usize]) -> Self {
        Solver {
            sys,
            q,
            ops,
            color: vec![UNSET; sys.n],
            trail: Vec::with_capacity(sys.n),
        }
    }

    fn op_of(&self, agent: usize) -> usize {
        self.ops[self.sys.agent_slot[agent].expect("agent has a slot")]
    }

    /// Assigns `v := c` and propagates; returns false on contradiction.
    fn assign(&mut self, v: usize, c: usize) -> bool {
        let mut stack = vec![(v, c)];
        while let Some((v, c)) = stack.pop() {
            if self.color[v] != UNSET {
                if self.color[v] != c {
                    return false;
                }
                continue;
            }
            self.color[v] = c;
            self.trail.push(v);
            for &k in &self.sys.incident[v] {
                let con = self.sys.constraints[k];
                let (t, h) = (self.color[con.tail], self.color[con.head]);
                match con.action {
                    None => {
                        if t != UNSET && h == UNSET {
                            stack.push((con.head, t));
                        } else if h != UNSET && t == UNSET {
                            stack.push((con.tail, h));
                        } else if t != h {
                            return false;
                        }
                    }
                    Some((a, pos)) => {
                        let ac = self.color[a];
                        if ac == UNSET {
                            continue;
                        }
                        let op = self.op_of(a);
                        if t != UNSET {
                            let want = self.q.apply_signed(op, pos, t, ac);
                            if h == UNSET {
                                stack.push((con.head, want));
                            } else if h != want {
                                return false;
                            }
                        } else if h != UNSET {
                            stack.push((con.tail, self.q.apply_signed(op, !pos, h, ac)));
                        }
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.color[v] = UNSET;
        }
    }

    /// Next vertex to branch on: an unknown agent blocking a known tail or
    /// head, otherwise the first unknown vertex.
    fn pick(&self) -> Option<usize> {
        for con in &self.sys.constraints {
            if let Some((a, _)) = con.action {
                if self.color[a] == UNSET && (self.color[con.tail] != UNSET || self.color[con.head] != UNSET) {
                    return Some(a);
                }
            }
        }
        self.color.iter().position(|&c| c == UNSET)
    }

    fn walk(&mut self, visit: &mut dyn FnMut(&[usize])) {
        let Some(v) = self.pick() else {
            visit(&self.color);
            return;
        };
        for c in 0..self.q.size() {
            let mark = self.trail.len();
            if self.assign(v, c) {
                self.walk(visit);
            }
            self.undo_to(mark);
        }
    }
}

fn assignments(count: usize, choices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..count {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// A single coloring: the operation for each acting agent and a color for
/// each vertex (in diagram vertex order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub agents: Vec<(VertexRef, usize)>,
    pub colors: Vec<usize>,
}

/// Calls `visit` for every valid coloring, in a deterministic order.
pub fn for_each_coloring(d: &GaussDiagram, q: &MultiQuandle, mut visit: impl FnMut(&Coloring)) {
    let sys = System::new(d);
    for ops in assignments(sys.agents.len(), &q.assignable_ops()) {
        let agents: Vec<(VertexRef, usize)> = sys
            .agents
            .iter()
            .zip(&ops)
            .map(|(&a, &o)| (sys.vertices[a], o))
            .collect();
        let mut solver = Solver::new(&sys, q, &ops);
        solver.walk(&mut |colors| {
            visit(&Coloring {
                agents: agents.clone(),
                colors: colors.to_vec(),
            })
        });
    }
}

/// Number of (operation assignment, vertex coloring) pairs.
pub fn count_colorings(d: &GaussDiagram, q: &MultiQuandle) -> u128 {
    let sys = System::new(d);
    assignments(sys.agents.len(), &q.assignable_ops())
        .par_iter()
        .map(|ops| {
            let mut solver = Solver::new(&sys, q, ops);
            let mut count = 0u128;
            solver.walk(&mut |_| count += 1);
            count
        })
        .sum()
}

/// All `(tail, agent, head)` color triples seen at interactions across all
/// colorings.
pub fn realized_triples(d: &GaussDiagram, q: &MultiQuandle) -> BTreeSet<(usize, usize, usize)> {
    let offsets = d.offsets();
    let index = |v: VertexRef| offsets[v.component] + v.position;
    let sites: Vec<(usize, usize, usize)> = d
        .interactions()
        .iter()
        .map(|(e, i)| (index(d.tail(*e)), index(i.agent), index(d.head(*e))))
        .collect();
    let mut out = BTreeSet::new();
    for_each_coloring(d, q, |c| {
        for &(t, a, h) in &sites {
            out.insert((c.colors[t], c.colors[a], c.colors[h]));
        }
    });
    out
}
