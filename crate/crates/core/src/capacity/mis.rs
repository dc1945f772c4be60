//! Exact independence number.
//!
//! The graph is split into connected components; on each, a maximum clique
//! of the complement is found by branch and bound with greedy coloring
//! bounds. A color class of the complement is a clique of the original
//! graph, so each bound is a clique cover.

use super::graph::{Bits, SimpleGraph};
use super::CapacityError;

pub const INDEPENDENCE_LIMIT: usize = 512;

pub fn independence_number(g: &SimpleGraph) -> Result<usize, CapacityError> {
    independence_number_with_limit(g, INDEPENDENCE_LIMIT)
}

pub fn independence_number_with_limit(g: &SimpleGraph, limit: usize) -> Result<usize, CapacityError> {
    if g.vertex_count() > limit {
        return Err(CapacityError::TooLarge {
            what: "independence number",
            size: g.vertex_count(),
            limit,
        });
    }
    Ok(g.components()
        .iter()
        .map(|c| {
            if c.len() <= 2 {
                return 1;
            }
            let h = g.induced(c).complement();
            let mut best = 0;
            expand(&h, 0, Bits::full(h.vertex_count()), &mut best);
            best
        })
        .sum())
}

/// A maximum independent set, as sorted vertex indices.
pub fn maximum_independent_set(g: &SimpleGraph) -> Result<Vec<usize>, CapacityError> {
    if g.vertex_count() > INDEPENDENCE_LIMIT {
        return Err(CapacityError::TooLarge {
            what: "independence number",
            size: g.vertex_count(),
            limit: INDEPENDENCE_LIMIT,
        });
    }
    let mut out = Vec::new();
    for c in g.components() {
        let h = g.induced(&c).complement();
        let mut best = Vec::new();
        let mut cur = Vec::new();
        expand_set(&h, &mut cur, Bits::full(h.vertex_count()), &mut best);
        out.extend(best.into_iter().map(|i| c[i]));
    }
    out.sort_unstable();
    Ok(out)
}

fn color_order(h: &SimpleGraph, p: &Bits) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(p.count());
    let mut colors = Vec::with_capacity(order.capacity());
    let mut uncolored = p.clone();
    let mut k = 0;
    while !uncolored.is_empty() {
        k += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q = q.and_not(h.row(v));
            uncolored.remove(v);
            order.push(v);
            colors.push(k);
        }
    }
    (order, colors)
}

fn expand(h: &SimpleGraph, size: usize, mut p: Bits, best: &mut usize) {
    let (order, colors) = color_order(h, &p);
    for i in (0..order.len()).rev() {
        if size + colors[i] <= *best {
            return;
        }
        let v = order[i];
        let next = p.and(h.row(v));
        if next.is_empty() {
            *best = (*best).max(size + 1);
        } else {
            expand(h, size + 1, next, best);
        }
        p.remove(v);
    }
}

fn expand_set(h: &SimpleGraph, cur: &mut Vec<usize>, mut p: Bits, best: &mut Vec<usize>) {
    let (order, colors) = color_order(h, &p);
    for i in (0..order.len()).rev() {
        if cur.len() + colors[i] <= best.len() {
            return;
        }
        let v = order[i];
        cur.push(v);
        let next = p.and(h.row(v));
        if next.is_empty() {
            if cur.len() > best.len() {
                *best = cur.clone();
            }
        } else {
            expand_set(h, cur, next, best);
        }
        cur.pop();
        p.remove(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::graph::strong_product;

    fn brute(g: &SimpleGraph) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|mask| {
                let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                g.is_independent(&set)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_cases() {
        assert_eq!(independence_number(&SimpleGraph::complete(4)).unwrap(), 1);
        assert_eq!(independence_number(&SimpleGraph::empty(6)).unwrap(), 6);
        assert_eq!(independence_number(&SimpleGraph::cycle(5)).unwrap(), 2);
        assert_eq!(independence_number(&SimpleGraph::empty(0)).unwrap(), 0);
    }

    #[test]
    fn c5_strong_square() {
        let c5 = SimpleGraph::cycle(5);
        let sq = strong_product(&c5, &c5).unwrap();
        assert_eq!(independence_number(&sq).unwrap(), 5);
        let set = maximum_independent_set(&sq).unwrap();
        assert_eq!(set.len(), 5);
        assert!(sq.is_independent(&set));
    }

    #[test]
    fn agrees_with_subset_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.random_range(1..=14);
            let p = rng.random_range(0.05..0.9);
            let mut g = SimpleGraph::empty(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.random_bool(p) {
                        g.add_edge(a, b);
                    }
                }
            }
            let want = brute(&g);
            assert_eq!(independence_number(&g).unwrap(), want, "{g:?}");
            let set = maximum_independent_set(&g).unwrap();
            assert_eq!(set.len(), want);
            assert!(g.is_independent(&set));
        }
    }

    #[test]
    fn limit_enforced() {
        let g = SimpleGraph::empty(10);
        assert!(matches!(
            independence_number_with_limit(&g, 5),
            Err(CapacityError::TooLarge { .. })
        ));
    }
}
