//! Connect sum, splitting by agents, and agent-wise prime factorization.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{underlying_graph, UnderlyingGraph};
use crate::diagram::{EdgeRef, GaussDiagram, Interaction, VertexRef};
use crate::invariants::fingerprint::{default_panel, fingerprint, Certificate, Fingerprint};
use crate::search::{equivalent, is_trivial, SearchBudget, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("underlying graphs differ")]
    GraphMismatch,
    #[error("agents act in both summands: {0:?}")]
    SupportOverlap(Vec<String>),
    #[error("edges carry interactions in both summands: {0:?}")]
    EdgeCollision(Vec<String>),
    #[error("not acting agents: {0:?}")]
    NotInSupport(Vec<String>),
}

/// `φ₁ ∪ φ₂` on the shared graph, marks unioned.
pub fn connect_sum(m1: &GaussDiagram, m2: &GaussDiagram) -> Result<GaussDiagram, SumError> {
    if m1.components() != m2.components() {
        return Err(SumError::GraphMismatch);
    }
    let overlap: Vec<String> = m1
        .support()
        .intersection(&m2.support())
        .map(|v| m1.vertex_name(*v))
        .collect();
    if !overlap.is_empty() {
        return Err(SumError::SupportOverlap(overlap));
    }
    let collisions: Vec<String> = m1
        .interactions()
        .keys()
        .filter(|e| m2.interactions().contains_key(e))
        .map(|e| m1.edge_name(*e))
        .collect();
    if !collisions.is_empty() {
        return Err(SumError::EdgeCollision(collisions));
    }
    let interactions = m1.interactions().iter().chain(m2.interactions()).map(|(e, i)| (*e, *i));
    let marks = m1.marks().union(m2.marks()).copied();
    Ok(GaussDiagram::new(m1.components().to_vec(), interactions, marks).expect("union of valid diagrams on one graph"))
}

fn restrict(m: &GaussDiagram, keep: impl Fn(&Interaction) -> bool, marks: impl Fn(&VertexRef) -> bool) -> GaussDiagram {
    let interactions: Vec<(EdgeRef, Interaction)> = m
        .interactions()
        .iter()
        .filter(|(_, i)| keep(i))
        .map(|(e, i)| (*e, *i))
        .collect();
    let marks: Vec<VertexRef> = m.marks().iter().filter(|v| marks(v)).copied().collect();
    GaussDiagram::new(m.components().to_vec(), interactions, marks).expect("restriction of a valid diagram")
}

/// Interactions of agents in `a` (and marks in `a`) versus the rest.
pub fn split(m: &GaussDiagram, a: &BTreeSet<VertexRef>) -> Result<(GaussDiagram, GaussDiagram), SumError> {
    let support = m.support();
    let stray: Vec<String> = a.difference(&support).map(|v| m.vertex_name(*v)).collect();
    if !stray.is_empty() {
        return Err(SumError::NotInSupport(stray));
    }
    Ok((
        restrict(m, |i| a.contains(&i.agent), |v| a.contains(v)),
        restrict(m, |i| !a.contains(&i.agent), |v| !a.contains(v)),
    ))
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub agent: VertexRef,
    pub diagram: GaussDiagram,
    pub verdict: Verdict,
    pub fingerprint: Fingerprint,
}

impl Factor {
    fn key(&self) -> FactorKey {
        FactorKey::of(&self.fingerprint)
    }
}

/// Entries of a fingerprint that survive stabilization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct FactorKey {
    kinds: Vec<String>,
    linking: String,
    colorings: Vec<(String, u128)>,
}

impl FactorKey {
    fn of(f: &Fingerprint) -> Self {
        FactorKey {
            kinds: f.kinds.clone(),
            linking: f.linking.clone(),
            colorings: f.colorings.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    /// The input graph with every mark and no interactions.
    pub base: GaussDiagram,
    pub graph: UnderlyingGraph,
    /// Factors not certified trivial.
    pub factors: Vec<Factor>,
    /// Certified trivial factors, dropped from `factors`.
    pub units: Vec<Factor>,
    /// No factor's triviality was left undecided.
    pub exhaustive: bool,
}

impl Factorization {
    /// Connect sum of the base, every factor and every unit.
    pub fn reconstruct(&self) -> GaussDiagram {
        self.factors
            .iter()
            .chain(&self.units)
            .fold(self.base.clone(), |acc, f| {
                connect_sum(&acc, &f.diagram).expect("factors have disjoint agents and edges")
            })
    }

    pub fn certified_prime(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| f.verdict.is_no())
    }
}

/// Splits `m` into one factor per acting agent and checks each for
/// triviality. Marks stay in the base.
pub fn prime_factorize(m: &GaussDiagram, budget: &SearchBudget) -> Factorization {
    let panel = default_panel();
    let agents: Vec<VertexRef> = m.support().into_iter().collect();
    let base = restrict(m, |_| false, |_| true);
    let all: Vec<Factor> = agents
        .par_iter()
        .map(|&r| {
            let diagram = restrict(m, |i| i.agent == r, |_| false);
            let verdict = is_trivial(&diagram, budget);
            let fingerprint = fingerprint(&diagram, &panel);
            Factor {
                agent: r,
                diagram,
                verdict,
                fingerprint,
            }
        })
        .collect();
    let exhaustive = all.iter().all(|f| !f.verdict.is_unknown());
    let (units, factors) = all.into_iter().partition(|f| f.verdict.is_yes());
    Factorization {
        base,
        graph: underlying_graph(m),
        factors,
        units,
        exhaustive,
    }
}

#[derive(Clone, Debug)]
pub enum MatchVerdict {
    /// Pairs `(left factor, right factor, witness)` covering both sides.
    Yes(Vec<(usize, usize, Witness)>),
    No(Certificate),
    Unknown,
}

impl MatchVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            MatchVerdict::Yes(_) => "yes",
            MatchVerdict::No(_) => "no",
            MatchVerdict::Unknown => "unknown",
        }
    }

    pub fn is_no(&self) -> bool {
        matches!(self, MatchVerdict::No(_))
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, MatchVerdict::Yes(_))
    }
}

fn histogram<'a>(fs: impl Iterator<Item = &'a Factor>) -> BTreeMap<FactorKey, usize> {
    let mut h = BTreeMap::new();
    for f in fs {
        *h.entry(f.key()).or_insert(0) += 1;
    }
    h
}

/// Compares two factorizations up to factor equivalence and order.
///
/// NO when the certified-prime factors have different stable invariants;
/// YES when the remaining factors pair off with replayable witnesses.
pub fn factors_match(f1: &Factorization, f2: &Factorization, budget: &SearchBudget) -> MatchVerdict {
    let h1 = histogram(f1.certified_prime());
    let h2 = histogram(f2.certified_prime());
    if h1 != h2 {
        let show = |h: &BTreeMap<FactorKey, usize>| {
            h.iter()
                .map(|(k, n)| format!("{}x[{}]", n, k.linking))
                .collect::<Vec<_>>()
                .join(" ")
        };
        return MatchVerdict::No(Certificate {
            name: "prime factor invariants".into(),
            left: show(&h1),
            right: show(&h2),
        });
    }
    let (a, b) = (&f1.factors, &f2.factors);
    if a.len() != b.len() {
        return MatchVerdict::Unknown;
    }
    let pairs: Vec<(usize, usize)> = (0..a.len())
        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| a[i].key() == b[j].key())
        .collect();
    let witnesses: Vec<Option<Witness>> = pairs
        .par_iter()
        .map(|&(i, j)| match equivalent(&a[i].diagram, &b[j].diagram, budget) {
            Verdict::Yes(w) => Some(w),
            _ => None,
        })
        .collect();
    let mut adj: Vec<Vec<(usize, Witness)>> = vec![Vec::new(); a.len()];
    for ((i, j), w) in pairs.into_iter().zip(witnesses) {
        if let Some(w) = w {
            adj[i].push((j, w));
        }
    }
    match perfect_matching(&adj, b.len()) {
        Some(m) => MatchVerdict::Yes(
            m.into_iter()
                .enumerate()
                .map(|(i, k)| {
                    let (j, w) = adj[i][k].clone();
                    (i, j, w)
                })
                .collect(),
        ),
        None => MatchVerdict::Unknown,
    }
}

/// Kuhn's augmenting paths; returns for each left vertex the index into
/// its adjacency list.
fn perfect_matching<T>(adj: &[Vec<(usize, T)>], right: usize) -> Option<Vec<usize>> {
    fn augment<T>(u: usize, adj: &[Vec<(usize, T)>], seen: &mut [bool], owner: &mut [Option<(usize, usize)>]) -> bool {
        for (k, (v, _)) in adj[u].iter().enumerate() {
            if seen[*v] {
                continue;
            }
            seen[*v] = true;
            if owner[*v].is_none_or(|(w, _)| augment(w, adj, seen, owner)) {
                owner[*v] = Some((u, k));
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; adj.len()];
    for (u, k) in owner.into_iter().flatten() {
        out[u] = k;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;
    use crate::diagram::{Component, Sign};

    fn graph() -> Vec<Component> {
        vec![Component::path("P", 3), Component::cycle("Q", 2)]
    }

    fn one(e: EdgeRef, agent: VertexRef, sign: Sign) -> GaussDiagram {
        GaussDiagram::new(graph(), [(e, Interaction::new(agent, sign))], []).unwrap()
    }

    #[test]
    fn sum_laws_and_errors() {
        let a = one(EdgeRef::new(0, 0), VertexRef::new(1, 0), Sign::Pos);
        let b = one(EdgeRef::new(0, 1), VertexRef::new(1, 1), Sign::Neg);
        let t = GaussDiagram::trivial(graph()).unwrap();
        assert_eq!(connect_sum(&a, &t).unwrap(), a);
        assert_eq!(
            canonical_code(&connect_sum(&a, &b).unwrap()),
            canonical_code(&connect_sum(&b, &a).unwrap())
        );
        let c = one(EdgeRef::new(0, 1), VertexRef::new(1, 0), Sign::Pos);
        assert!(matches!(connect_sum(&a, &c), Err(SumError::SupportOverlap(_))));
        let d = one(EdgeRef::new(0, 0), VertexRef::new(0, 2), Sign::Pos);
        assert!(matches!(connect_sum(&a, &d), Err(SumError::EdgeCollision(_))));
        let other = GaussDiagram::trivial(vec![Component::path("P", 3)]).unwrap();
        assert_eq!(connect_sum(&a, &other), Err(SumError::GraphMismatch));
    }

    #[test]
    fn split_round_trip() {
        let ab = connect_sum(
            &one(EdgeRef::new(0, 0), VertexRef::new(1, 0), Sign::Pos),
            &one(EdgeRef::new(0, 1), VertexRef::new(1, 1), Sign::Neg),
        )
        .unwrap();
        let all = ab.support();
        let (x, y) = split(&ab, &all).unwrap();
        assert_eq!(x, ab);
        assert!(y.is_trivial());
        let (x, y) = split(&ab, &BTreeSet::new()).unwrap();
        assert!(x.is_trivial());
        assert_eq!(y, ab);
        let first = BTreeSet::from([VertexRef::new(1, 0)]);
        let (x, y) = split(&ab, &first).unwrap();
        assert_eq!(connect_sum(&x, &y).unwrap(), ab);
        assert!(split(&ab, &BTreeSet::from([VertexRef::new(0, 0)])).is_err());
    }

    #[test]
    fn factorize_drops_kink_unit() {
        let linked = one(EdgeRef::new(0, 0), VertexRef::new(1, 0), Sign::Pos);
        let kink = one(EdgeRef::new(1, 0), VertexRef::new(1, 1), Sign::Pos);
        let m = connect_sum(&linked, &kink).unwrap();
        let f = prime_factorize(&m, &SearchBudget::depth(3));
        assert_eq!(f.factors.len(), 1);
        assert!(f.factors[0].verdict.is_no());
        assert_eq!(f.units.len(), 1);
        assert!(f.exhaustive);
        assert_eq!(f.reconstruct(), m);
        assert!(
            prime_factorize(&GaussDiagram::trivial(graph()).unwrap(), &SearchBudget::default())
                .factors
                .is_empty()
        );
    }

    #[test]
    fn matching_itself_and_mismatch() {
        let linked = one(EdgeRef::new(0, 0), VertexRef::new(1, 0), Sign::Pos);
        let b = SearchBudget::depth(2);
        let f = prime_factorize(&linked, &b);
        assert!(factors_match(&f, &f, &b).is_yes());
        let t = prime_factorize(&GaussDiagram::trivial(graph()).unwrap(), &b);
        assert!(factors_match(&f, &t, &b).is_no());
    }
}
