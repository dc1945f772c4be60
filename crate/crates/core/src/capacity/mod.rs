//! Message confusability and capacity over a finite multi-quandle.
//!
//! A message of length `k` is a tuple over the color set. Two messages are
//! confused when one automorphism `α`, shared by every coordinate, carries
//! each letter of the first onto the matching letter of the second, or
//! (when triples are enabled) onto a letter it shares a realized
//! interaction triple with. `Cap_k` is the independence number of the
//! resulting graph.

pub mod graph;
pub mod mis;
pub mod theta;

use std::collections::HashSet;

use thiserror::Error;

use crate::diagram::GaussDiagram;
use crate::invariants::coloring::realized_triples;
use crate::invariants::quandle::MultiQuandle;

pub use graph::{strong_product, SimpleGraph};
pub use mis::{independence_number, maximum_independent_set};
pub use theta::lovasz_theta;

/// Largest message graph built.
pub const MESSAGE_LIMIT: usize = 512;
/// Largest automorphism group enumerated.
pub const AUTOMORPHISM_LIMIT: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CapacityError {
    #[error("{what}: size {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("tolerance {0} is below 1e-8")]
    BadTolerance(f64),
    #[error("interior point did not converge after {iterations} iterations (gap {gap:e})")]
    NumericalFailure { iterations: usize, gap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MessagePolicy {
    pub use_automorphisms: bool,
    pub use_triples: bool,
}

impl MessagePolicy {
    pub const AUT: MessagePolicy = MessagePolicy {
        use_automorphisms: true,
        use_triples: false,
    };
    pub const AUT_TRIPLES: MessagePolicy = MessagePolicy {
        use_automorphisms: true,
        use_triples: true,
    };
    pub const TRIPLES: MessagePolicy = MessagePolicy {
        use_automorphisms: false,
        use_triples: true,
    };
    /// Nothing is confused; only useful as a baseline.
    pub const NONE: MessagePolicy = MessagePolicy {
        use_automorphisms: false,
        use_triples: false,
    };

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "aut" => Some(Self::AUT),
            "aut+triples" => Some(Self::AUT_TRIPLES),
            "triples" => Some(Self::TRIPLES),
            "none" => Some(Self::NONE),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.use_automorphisms, self.use_triples) {
            (true, false) => "aut",
            (true, true) => "aut+triples",
            (false, true) => "triples",
            (false, false) => "none",
        }
    }
}

impl Default for MessagePolicy {
    fn default() -> Self {
        Self::AUT
    }
}

/// Permutations `α` of the color set with `α(x ▷ y) = α(x) ▷ α(y)` for
/// every operation, in lexicographic order.
pub fn automorphisms(q: &MultiQuandle) -> Result<Vec<Vec<usize>>, CapacityError> {
    let n = q.size();
    let mut out = Vec::new();
    let mut alpha = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_automorphism(q, 0, &mut alpha, &mut used, &mut out)?;
    Ok(out)
}

fn consistent(q: &MultiQuandle, i: usize, alpha: &[usize]) -> bool {
    for op in 0..q.op_count() {
        for x in 0..=i {
            for y in 0..=i {
                let z = q.apply(op, x, y);
                if z > i || (x != i && y != i && z != i) {
                    continue;
                }
                if alpha[z] != q.apply(op, alpha[x], alpha[y]) {
                    return false;
                }
            }
        }
    }
    true
}

fn extend_automorphism(
    q: &MultiQuandle,
    i: usize,
    alpha: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) -> Result<(), CapacityError> {
    if i == q.size() {
        if out.len() == AUTOMORPHISM_LIMIT {
            return Err(CapacityError::TooLarge {
                what: "automorphism group",
                size: AUTOMORPHISM_LIMIT + 1,
                limit: AUTOMORPHISM_LIMIT,
            });
        }
        out.push(alpha.clone());
        return Ok(());
    }
    for v in 0..q.size() {
        if used[v] {
            continue;
        }
        alpha[i] = v;
        if consistent(q, i, alpha) {
            used[v] = true;
            extend_automorphism(q, i + 1, alpha, used, out)?;
            used[v] = false;
        }
    }
    alpha[i] = usize::MAX;
    Ok(())
}

/// Pairs of distinct colors that occur together in some realized
/// interaction triple of `d`.
pub fn confusable_pairs(d: &GaussDiagram, q: &MultiQuandle) -> Vec<Vec<bool>> {
    let n = q.size();
    let mut conf = vec![vec![false; n]; n];
    for (x, y, z) in realized_triples(d, q) {
        for (a, b) in [(x, y), (y, z), (x, z)] {
            if a != b {
                conf[a][b] = true;
                conf[b][a] = true;
            }
        }
    }
    conf
}

/// Confusability graph on all `|Q|^k` messages; message `m` has index
/// `Σ m_i |Q|^(k-1-i)`.
pub fn message_graph(
    d: &GaussDiagram,
    q: &MultiQuandle,
    k: usize,
    policy: MessagePolicy,
) -> Result<SimpleGraph, CapacityError> {
    let n = q.size();
    let too_large = CapacityError::TooLarge {
        what: "message graph",
        size: usize::MAX,
        limit: MESSAGE_LIMIT,
    };
    let total = u32::try_from(k)
        .ok()
        .and_then(|k| n.checked_pow(k))
        .ok_or(too_large.clone())?;
    if total > MESSAGE_LIMIT {
        return Err(CapacityError::TooLarge {
            what: "message graph",
            size: total,
            limit: MESSAGE_LIMIT,
        });
    }
    let auts = if policy.use_automorphisms {
        automorphisms(q)?
    } else {
        vec![(0..n).collect()]
    };
    let conf = policy.use_triples.then(|| confusable_pairs(d, q));
    let decode = |mut idx: usize| {
        let mut m = vec![0; k];
        for slot in m.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        m
    };
    let encode = |m: &[usize]| m.iter().fold(0, |acc, &c| acc * n + c);

    let mut g = SimpleGraph::empty(total);
    for idx in 0..total {
        let m = decode(idx);
        let images: HashSet<Vec<usize>> = auts.iter().map(|a| m.iter().map(|&c| a[c]).collect()).collect();
        for u in images {
            match &conf {
                None => g.add_edge(idx, encode(&u)),
                Some(conf) => {
                    let choices: Vec<Vec<usize>> = u
                        .iter()
                        .map(|&c| (0..n).filter(|&b| b == c || conf[c][b]).collect())
                        .collect();
                    let mut pick = vec![0; k];
                    loop {
                        let target: Vec<usize> = (0..k).map(|i| choices[i][pick[i]]).collect();
                        g.add_edge(idx, encode(&target));
                        let mut i = k;
                        loop {
                            if i == 0 {
                                break;
                            }
                            i -= 1;
                            pick[i] += 1;
                            if pick[i] < choices[i].len() {
                                break;
                            }
                            pick[i] = 0;
                        }
                        if pick.iter().all(|&p| p == 0) {
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapReport {
    /// `caps[k - 1]` is `Cap_k`.
    pub caps: Vec<usize>,
    /// `max_k Cap_k^(1/k)`; a certified lower bound on the capacity.
    pub lower_bound: f64,
    /// `|Q|`, the only upper bound claimed.
    pub upper_bound: usize,
    pub policy: MessagePolicy,
}

impl CapReport {
    pub fn cap(&self, k: usize) -> Option<usize> {
        k.checked_sub(1).and_then(|i| self.caps.get(i).copied())
    }
}

pub fn cap_report(
    d: &GaussDiagram,
    q: &MultiQuandle,
    kmax: usize,
    policy: MessagePolicy,
) -> Result<CapReport, CapacityError> {
    let mut caps = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        caps.push(independence_number(&message_graph(d, q, k, policy)?)?);
    }
    let lower_bound = caps
        .iter()
        .enumerate()
        .map(|(i, &c)| (c as f64).powf(1.0 / (i + 1) as f64))
        .fold(0.0, f64::max);
    Ok(CapReport {
        caps,
        lower_bound,
        upper_bound: q.size(),
        policy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Component, EdgeRef, Interaction, Sign, VertexRef};

    fn single() -> GaussDiagram {
        GaussDiagram::new(
            vec![Component::path("P", 2), Component::cycle("Q", 1)],
            [(EdgeRef::new(0, 0), Interaction::new(VertexRef::new(1, 0), Sign::Pos))],
            [],
        )
        .unwrap()
    }

    fn is_automorphism(q: &MultiQuandle, a: &[usize]) -> bool {
        (0..q.op_count())
            .all(|op| (0..q.size()).all(|x| (0..q.size()).all(|y| a[q.apply(op, x, y)] == q.apply(op, a[x], a[y]))))
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn automorphisms_match_brute_force() {
        for q in [
            MultiQuandle::trivial(4),
            MultiQuandle::dihedral(3),
            MultiQuandle::dihedral(4),
            MultiQuandle::dihedral(5),
            MultiQuandle::tetrahedral(),
        ] {
            let mut want: Vec<Vec<usize>> = all_perms(q.size())
                .into_iter()
                .filter(|a| is_automorphism(&q, a))
                .collect();
            want.sort();
            assert_eq!(automorphisms(&q).unwrap(), want, "{}", q.name());
        }
        assert_eq!(automorphisms(&MultiQuandle::dihedral(3)).unwrap().len(), 6);
        assert_eq!(automorphisms(&MultiQuandle::trivial(5)).unwrap().len(), 120);
    }

    #[test]
    fn worked_example() {
        let r = cap_report(&single(), &MultiQuandle::dihedral(3), 2, MessagePolicy::AUT).unwrap();
        assert_eq!(r.caps, vec![1, 2]);
        assert!((r.lower_bound - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn no_confusion_gives_full_alphabet() {
        let g = message_graph(&single(), &MultiQuandle::dihedral(3), 2, MessagePolicy::NONE).unwrap();
        assert_eq!(g.edge_count(), 0);
        let r = cap_report(&single(), &MultiQuandle::trivial(1), 3, MessagePolicy::AUT_TRIPLES).unwrap();
        assert_eq!(r.caps, vec![1, 1, 1]);
    }

    #[test]
    fn message_limit() {
        assert!(matches!(
            message_graph(&single(), &MultiQuandle::dihedral(3), 6, MessagePolicy::AUT),
            Err(CapacityError::TooLarge { .. })
        ));
    }
}
