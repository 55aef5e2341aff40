//! Maximum clique by branch and bound with a greedy-colouring bound.

use crate::bitset::VertexSet;
use crate::graph::Graph;

/// Greedy sequential colouring of `p`; returns vertices in colour order with
/// their colour numbers (1-based, nondecreasing).
fn colour_sort(g: &Graph, p: &VertexSet) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(p.len());
    let mut uncoloured = p.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.neighbours(v));
            uncoloured.remove(v);
            out.push((v, colour));
        }
    }
    out
}

fn expand(g: &Graph, current: &mut Vec<usize>, mut p: VertexSet, best: &mut Vec<usize>) {
    let coloured = colour_sort(g, &p);
    for &(v, colour) in coloured.iter().rev() {
        if current.len() + colour <= best.len() {
            return;
        }
        current.push(v);
        let np = p.intersection(g.neighbours(v));
        if np.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(g, current, np, best);
        }
        current.pop();
        p.remove(v);
    }
}

/// A maximum clique of `g` and its size.
pub fn max_clique(g: &Graph) -> (usize, VertexSet) {
    max_clique_within(g, &VertexSet::full(g.n()))
}

/// A maximum clique of the subgraph induced on `within`.
pub fn max_clique_within(g: &Graph, within: &VertexSet) -> (usize, VertexSet) {
    let mut best = Vec::new();
    if !within.is_empty() {
        expand(g, &mut Vec::new(), within.clone(), &mut best);
    }
    (best.len(), VertexSet::from_iter(g.n(), best))
}

pub fn clique_number(g: &Graph) -> usize {
    max_clique(g).0
}

/// Whether the graph given by neighbourhood masks has a clique of size `k`
/// inside `cand`. Vertices must be below 64.
pub fn has_clique_mask(adj: &[u64], cand: u64, k: u32) -> bool {
    if k == 0 {
        return true;
    }
    if cand.count_ones() < k {
        return false;
    }
    if k == 1 {
        return true;
    }
    let mut rest = cand;
    while rest.count_ones() >= k {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_clique_mask(adj, adj[v] & rest, k - 1) {
            return true;
        }
    }
    false
}

/// Clique number of the mask graph restricted to `cand`.
pub fn clique_number_mask(adj: &[u64], cand: u64) -> u32 {
    fn go(adj: &[u64], cand: u64, size: u32, best: &mut u32) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        let mut rest = cand;
        while rest != 0 {
            if size + rest.count_ones() <= *best {
                return;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            go(adj, adj[v] & rest, size + 1, best);
        }
    }
    let mut best = 0;
    go(adj, cand, 0, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|&m| {
                let s = VertexSet::from_iter(n, (0..n).filter(|&i| m >> i & 1 == 1));
                g.is_clique(&s)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn examples() {
        let (k, w) = max_clique(&Graph::empty(4));
        assert_eq!(k, 1);
        assert_eq!(w.len(), 1);
        let (k, w) = max_clique(&Graph::complete(5));
        assert_eq!((k, w.len()), (5, 5));
        let c5 = Graph::cycle(5);
        let (k, w) = max_clique(&c5);
        assert_eq!(k, brute(&c5));
        assert_eq!(k, 2);
        assert!(c5.is_clique(&w));
        assert_eq!(max_clique(&Graph::empty(0)).0, 0);
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(1..12);
            let p: f64 = rng.gen_range(0.1..0.9);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
            let (k, w) = max_clique(&g);
            assert_eq!(k, brute(&g));
            assert!(g.is_clique(&w) && w.len() == k);
            let adj: Vec<u64> = (0..n).map(|v| g.neighbours(v).mask()).collect();
            let all = (1u64 << n) - 1;
            assert_eq!(clique_number_mask(&adj, all) as usize, k);
            assert!(has_clique_mask(&adj, all, k as u32));
            assert!(!has_clique_mask(&adj, all, k as u32 + 1));
        }
    }
}
