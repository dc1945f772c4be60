//! Seeded random diagrams and random move walks.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Component, GaussDiagram, Interaction, Kind, Sign, VertexRef};
use crate::moves::{apply, enumerate_moves, KindSet, Move, MoveKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub components: Vec<(Kind, usize)>,
    pub interactions: usize,
    pub marks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InfeasibleSpec {
    #[error("components must have positive size")]
    EmptyComponent,
    #[error("{requested} interactions requested but only {edges} edges exist")]
    TooManyInteractions { requested: usize, edges: usize },
    #[error("{requested} marks requested but only {vertices} vertices exist")]
    TooManyMarks { requested: usize, vertices: usize },
}

/// Component names used by the generator: `A`, `B`, ..., `Z`, `A1`, ...
pub fn component_name(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

pub fn random_diagram(spec: &RandomSpec, seed: u64) -> Result<GaussDiagram, InfeasibleSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_diagram_with(spec, &mut rng)
}

pub fn random_diagram_with(spec: &RandomSpec, rng: &mut impl Rng) -> Result<GaussDiagram, InfeasibleSpec> {
    if spec.components.iter().any(|(_, n)| *n == 0) {
        return Err(InfeasibleSpec::EmptyComponent);
    }
    let components: Vec<Component> = spec
        .components
        .iter()
        .enumerate()
        .map(|(i, (k, n))| Component::new(component_name(i), *k, *n))
        .collect();
    let trivial = GaussDiagram::trivial(components.clone()).expect("generated names are valid");
    let mut edges: Vec<_> = trivial.edges().collect();
    let mut vertices: Vec<VertexRef> = trivial.vertices().collect();
    if spec.interactions > edges.len() {
        return Err(InfeasibleSpec::TooManyInteractions {
            requested: spec.interactions,
            edges: edges.len(),
        });
    }
    if spec.marks > vertices.len() {
        return Err(InfeasibleSpec::TooManyMarks {
            requested: spec.marks,
            vertices: vertices.len(),
        });
    }
    edges.shuffle(rng);
    let interactions: Vec<_> = edges[..spec.interactions]
        .iter()
        .map(|e| {
            let agent = *vertices.choose(rng).expect("nonempty");
            let sign = if rng.random_bool(0.5) { Sign::Pos } else { Sign::Neg };
            (*e, Interaction::new(agent, sign))
        })
        .collect();
    vertices.shuffle(rng);
    let marks = vertices[..spec.marks].to_vec();
    Ok(GaussDiagram::new(components, interactions, marks).expect("generated diagram is valid"))
}

/// A random shape with at most `max_vertices` vertices and `max_components`
/// components, then a random interaction count and (rarely) marks.
pub fn sample_diagram(rng: &mut impl Rng, max_vertices: usize, max_components: usize) -> GaussDiagram {
    let max_vertices = max_vertices.max(1);
    let count = rng.random_range(1..=max_components.max(1).min(max_vertices));
    let mut budget = max_vertices - count;
    let components: Vec<(Kind, usize)> = (0..count)
        .map(|_| {
            let extra = if budget == 0 {
                0
            } else {
                rng.random_range(0..=budget.min(6))
            };
            budget -= extra;
            let kind = if rng.random_bool(0.5) { Kind::Cycle } else { Kind::Path };
            (kind, 1 + extra)
        })
        .collect();
    let edges: usize = components
        .iter()
        .map(|(k, n)| if *k == Kind::Cycle { *n } else { n - 1 })
        .sum();
    let interactions = rng.random_range(0..=edges);
    let marks = if rng.random_bool(0.2) { 1 } else { 0 };
    let spec = RandomSpec {
        components,
        interactions,
        marks,
    };
    random_diagram_with(&spec, rng).expect("spec is feasible by construction")
}

pub fn sample_diagram_seeded(seed: u64, max_vertices: usize, max_components: usize) -> GaussDiagram {
    sample_diagram(&mut ChaCha8Rng::seed_from_u64(seed), max_vertices, max_components)
}

/// Applies `steps` random moves of the given kinds, choosing a kind
/// uniformly among those with instances, then an instance uniformly.
pub fn scramble(d: &GaussDiagram, steps: usize, kinds: KindSet, rng: &mut impl Rng) -> (GaussDiagram, Vec<Move>) {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    for _ in 0..steps {
        let moves = enumerate_moves(&cur, kinds, true);
        let mut by_kind: Vec<(MoveKind, Vec<&Move>)> = Vec::new();
        for m in &moves {
            match by_kind.iter_mut().find(|(k, _)| *k == m.kind()) {
                Some((_, v)) => v.push(m),
                None => by_kind.push((m.kind(), vec![m])),
            }
        }
        let Some((_, choices)) = by_kind.choose(rng) else {
            break;
        };
        let mv = (*choices.choose(rng).expect("nonempty")).clone();
        cur = apply(&cur, &mv).expect("enumerated moves apply");
        trace.push(mv);
    }
    (cur, trace)
}
