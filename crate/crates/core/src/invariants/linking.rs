//! Linking graphs: per-vertex signed action counts on each component.

use std::collections::BTreeMap;
use std::fmt;

use crate::canon::least_rotation;
use crate::diagram::{GaussDiagram, Kind, VertexRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkingVariant {
    Full,
    Unframed,
    Reduced,
    ReducedUnframed,
}

impl LinkingVariant {
    pub fn is_reduced(self) -> bool {
        matches!(self, LinkingVariant::Reduced | LinkingVariant::ReducedUnframed)
    }

    pub fn is_unframed(self) -> bool {
        matches!(self, LinkingVariant::Unframed | LinkingVariant::ReducedUnframed)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full" => Some(LinkingVariant::Full),
            "unframed" => Some(LinkingVariant::Unframed),
            "reduced" => Some(LinkingVariant::Reduced),
            "reduced-unframed" => Some(LinkingVariant::ReducedUnframed),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkingVariant::Full => "full",
            LinkingVariant::Unframed => "unframed",
            LinkingVariant::Reduced => "reduced",
            LinkingVariant::ReducedUnframed => "reduced-unframed",
        }
    }
}

/// One component of a linking graph: the vectors of its (surviving)
/// vertices in strand order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingComponent {
    pub kind: Kind,
    pub vectors: Vec<Vec<i64>>,
}

/// Vectors are indexed by component in the diagram's component order.
/// Reduced variants drop zero-vector vertices, keeping at least one vertex
/// per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingGraph {
    pub variant: LinkingVariant,
    pub components: Vec<LinkingComponent>,
}

/// Linking vector of a single vertex (full variant).
pub fn linking_vector(d: &GaussDiagram, v: VertexRef) -> Vec<i64> {
    let mut out = vec![0i64; d.components().len()];
    for (e, s) in d.action(v) {
        out[e.component] += s.value();
    }
    out
}

pub fn linking_graph(d: &GaussDiagram, variant: LinkingVariant) -> LinkingGraph {
    let nu = d.components().len();
    let mut vectors: BTreeMap<VertexRef, Vec<i64>> = BTreeMap::new();
    for (e, i) in d.interactions() {
        vectors.entry(i.agent).or_insert_with(|| vec![0; nu])[e.component] += i.sign.value();
    }
    let components = d
        .components()
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            let mut seq: Vec<Vec<i64>> = (0..comp.size)
                .map(|p| {
                    let mut v = vectors
                        .get(&VertexRef::new(ci, p))
                        .cloned()
                        .unwrap_or_else(|| vec![0; nu]);
                    if variant.is_unframed() {
                        v[ci] = 0;
                    }
                    v
                })
                .collect();
            if variant.is_reduced() {
                let zero = vec![0; nu];
                seq.retain(|v| *v != zero);
                if seq.is_empty() {
                    seq.push(zero);
                }
            }
            LinkingComponent {
                kind: comp.kind,
                vectors: seq,
            }
        })
        .collect();
    LinkingGraph { variant, components }
}

impl LinkingGraph {
    /// Vector of a vertex; only meaningful for non-reduced variants.
    pub fn vector(&self, v: VertexRef) -> Option<&Vec<i64>> {
        if self.variant.is_reduced() {
            return None;
        }
        self.components.get(v.component)?.vectors.get(v.position)
    }

    /// Number of vertices carrying a nonzero vector.
    pub fn nonzero_count(&self) -> usize {
        self.components
            .iter()
            .flat_map(|c| &c.vectors)
            .filter(|v| v.iter().any(|&x| x != 0))
            .count()
    }

    /// Code invariant under component permutation and cycle rotation.
    pub fn canonical_code(&self) -> String {
        let nu = self.components.len();
        // Component classes by permutation-invariant data.
        type Key = (u8, usize, Vec<Vec<i64>>, Vec<i64>);
        let keys: Vec<Key> = (0..nu)
            .map(|i| {
                let c = &self.components[i];
                let mut rows: Vec<Vec<i64>> = c
                    .vectors
                    .iter()
                    .map(|v| {
                        let mut s = v.clone();
                        s.sort();
                        s
                    })
                    .collect();
                rows.sort();
                let mut column: Vec<i64> = self
                    .components
                    .iter()
                    .flat_map(|o| o.vectors.iter().map(move |v| v[i]))
                    .filter(|&x| x != 0)
                    .collect();
                column.sort();
                (c.kind as u8, c.vectors.len(), rows, column)
            })
            .collect();
        let mut order: Vec<usize> = (0..nu).collect();
        order.sort_by(|a, b| keys[*a].cmp(&keys[*b]));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match classes.last_mut() {
                Some(c) if keys[c[0]] == keys[i] => c.push(i),
                _ => classes.push(vec![i]),
            }
        }
        let mut best: Option<String> = None;
        orderings(&classes, &mut Vec::new(), &mut |p| {
            let code = self.code_for(p);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        });
        best.unwrap_or_default()
    }

    /// Code with components taken in order `p` (p[new] = old).
    fn code_for(&self, p: &[usize]) -> String {
        let mut pos = vec![0; p.len()];
        for (new, &old) in p.iter().enumerate() {
            pos[old] = new;
        }
        let mut out = String::new();
        for &old in p {
            let c = &self.components[old];
            let seq: Vec<Vec<i64>> = c
                .vectors
                .iter()
                .map(|v| {
                    let mut w = vec![0; v.len()];
                    for (j, &x) in v.iter().enumerate() {
                        w[pos[j]] = x;
                    }
                    w
                })
                .collect();
            let seq = match c.kind {
                Kind::Cycle => least_rotation(&seq),
                Kind::Path => seq,
            };
            out.push(if c.kind == Kind::Cycle { 'C' } else { 'P' });
            out.push('[');
            for (k, v) in seq.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push('(');
                out.push_str(&v.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
                out.push(')');
            }
            out.push(']');
        }
        out
    }
}

/// Visits every ordering that permutes components only within their class.
fn orderings(classes: &[Vec<usize>], prefix: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    let Some((first, rest)) = classes.split_first() else {
        visit(prefix);
        return;
    };
    let mut used = vec![false; first.len()];
    permutations(first, &mut used, prefix, &mut |p| orderings(rest, p, visit));
}

fn permutations(
    items: &[usize],
    used: &mut Vec<bool>,
    prefix: &mut Vec<usize>,
    visit: &mut dyn FnMut(&mut Vec<usize>),
) {
    if used.iter().all(|u| *u) {
        visit(prefix);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            prefix.push(items[i]);
            permutations(items, used, prefix, visit);
            prefix.pop();
            used[i] = false;
        }
    }
}

impl fmt::Display for LinkingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_code())
    }
}
