//! Exact and heuristic computation of the tournament clique number.
//!
//! The exact solver answers "is there an ordering whose backedge graph has
//! clique number at most `k`?" for increasing `k`. Vertices are placed left to
//! right in increasing id order, so the first ordering found is the
//! lexicographically least one achieving the optimum. Edges between placed
//! vertices never change, which makes the prefix clique test exact; every
//! unplaced vertex is also checked against the prefix (forward checking).

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::clique::{clique_number_mask, has_clique_mask};
use super::{Mode, SolverConfig};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Memo of refuted states is only used when the edge key fits in 128 bits.
const MEMO_MAX_N: usize = 16;
const MEMO_MAX_ENTRIES: usize = 1 << 21;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaCertificate {
    pub schema: u32,
    /// The clique number when `mode` is exact, otherwise the best upper bound.
    pub value: usize,
    pub lower: usize,
    /// Ordering whose backedge graph has clique number `value`.
    pub order: Vec<usize>,
    pub lower_witness: String,
    pub mode: Mode,
    pub nodes_expanded: u64,
}

impl OmegaCertificate {
    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }
}

/// Backedge adjacency masks of `order`: `v`'s mask holds every `u` placed
/// before `v` with `v -> u`, and symmetrically.
pub fn backedge_masks(out: &[u64], order: &[usize]) -> Vec<u64> {
    let mut adj = vec![0u64; out.len()];
    let mut placed = 0u64;
    for &v in order {
        let back = out[v] & placed;
        adj[v] = back;
        let mut rest = back;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            adj[u] |= 1 << v;
        }
        placed |= 1 << v;
    }
    adj
}

/// Clique number of the backedge graph of `order` on a mask tournament.
pub fn ordering_clique_mask(out: &[u64], order: &[usize]) -> usize {
    let adj = backedge_masks(out, order);
    let all = order.iter().fold(0u64, |m, &v| m | 1 << v);
    clique_number_mask(&adj, all) as usize
}

/// Clique number of `B(T, order)`.
pub fn ordering_clique(t: &Tournament, order: &[usize]) -> Result<usize> {
    let b = t.backedge_graph(order)?;
    Ok(super::clique::clique_number(b.graph()))
}

fn is_transitive_mask(out: &[u64], n: usize) -> bool {
    let mut seen = 0u64;
    for v in 0..n {
        let d = (out[v] & low_mask(n)).count_ones();
        if seen >> d & 1 == 1 {
            return false;
        }
        seen |= 1 << d;
    }
    true
}

fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn trivial_lower(out: &[u64], n: usize) -> usize {
    match n {
        0 => 0,
        _ if is_transitive_mask(out, n) => 1,
        _ => 2,
    }
}

/// Vertices by decreasing out-degree, ties by id: sources first.
fn degree_order(out: &[u64], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(out[v].count_ones()), v));
    order
}

/// Cheap descent: accept any insertion move that lowers the clique number.
fn improve(out: &[u64], mut order: Vec<usize>, passes: usize) -> (usize, Vec<usize>) {
    let n = order.len();
    let mut best = ordering_clique_mask(out, &order);
    for _ in 0..passes {
        let mut improved = false;
        for i in 0..n {
            for j in 0..n {
                if i == j || best <= 1 {
                    continue;
                }
                let mut cand = order.clone();
                let v = cand.remove(i);
                cand.insert(j, v);
                let w = ordering_clique_mask(out, &cand);
                if w < best {
                    best = w;
                    order = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    (best, order)
}

struct Decide<'a> {
    out: &'a [u64],
    inn: Vec<u64>,
    n: usize,
    k: u32,
    badj: Vec<u64>,
    order: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    memo: HashSet<(u64, usize, u128)>,
    exhausted: bool,
}

impl Decide<'_> {
    fn edge_key(&self, placed: u64) -> u128 {
        let mut key = 0u128;
        let mut shift = 0;
        let mut rest = placed;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let width = self.n - 1 - u;
            if width > 0 {
                let bits = (self.badj[u] >> (u + 1)) & low_mask(width);
                key |= (bits as u128) << shift;
            }
            shift += width;
        }
        key
    }

    fn search(&mut self, placed: u64) -> bool {
        let full = low_mask(self.n);
        if placed == full {
            return true;
        }
        let last = self.order.last().copied().unwrap_or(usize::MAX);
        let memo_key = if self.n <= MEMO_MAX_N {
            Some((placed, last, self.edge_key(placed)))
        } else {
            None
        };
        if let Some(key) = &memo_key {
            if self.memo.contains(key) {
                return false;
            }
        }
        let mut cands = full & !placed;
        while cands != 0 {
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            // Swapping v in front of `last` deletes the edge and is lex-smaller.
            if last != usize::MAX && v < last && self.out[v] >> last & 1 == 1 {
                continue;
            }
            let back = self.out[v] & placed;
            if has_clique_mask(&self.badj, back, self.k) {
                continue;
            }
            // Every unplaced w -> v gains v as a backward neighbour when placed.
            let mut threatened = self.inn[v] & full & !placed;
            let mut ok = true;
            while threatened != 0 {
                let w = threatened.trailing_zeros() as usize;
                threatened &= threatened - 1;
                if has_clique_mask(&self.badj, self.out[w] & back, self.k - 1) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                self.exhausted = true;
                return false;
            }
            self.badj[v] = back;
            let mut rest = back;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                self.badj[u] |= 1 << v;
            }
            self.order.push(v);
            let found = self.search(placed | 1 << v);
            if found {
                return true;
            }
            self.order.pop();
            let mut rest = back;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                self.badj[u] &= !(1 << v);
            }
            self.badj[v] = 0;
            if self.exhausted {
                return false;
            }
        }
        if let Some(key) = memo_key {
            if self.memo.len() < MEMO_MAX_ENTRIES {
                self.memo.insert(key);
            }
        }
        false
    }
}

enum Decision {
    Found(Vec<usize>),
    Refuted,
    Exhausted,
}

fn decide(out: &[u64], n: usize, k: usize, budget: Option<u64>, nodes: &mut u64) -> Decision {
    if k == 0 {
        return if n == 0 { Decision::Found(vec![]) } else { Decision::Refuted };
    }
    let mut inn = vec![0u64; n];
    for (v, &row) in out.iter().enumerate().take(n) {
        let mut rest = row;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            inn[w] |= 1 << v;
        }
    }
    let mut d = Decide {
        out,
        inn,
        n,
        k: k as u32,
        badj: vec![0; n],
        order: Vec::with_capacity(n),
        nodes: *nodes,
        budget,
        memo: HashSet::new(),
        exhausted: false,
    };
    let found = d.search(0);
    *nodes = d.nodes;
    if found {
        Decision::Found(d.order)
    } else if d.exhausted {
        Decision::Exhausted
    } else {
        Decision::Refuted
    }
}

/// Exact clique number of a tournament given as out-neighbourhood masks on
/// `0..n` (`n <= 64`), with no size limit and no budget.
pub fn omega_mask(out: &[u64], n: usize) -> usize {
    solve_mask(out, n, None).value
}

pub(crate) fn solve_mask(out: &[u64], n: usize, budget: Option<u64>) -> OmegaCertificate {
    let lower = trivial_lower(out, n);
    let (upper, heuristic) = if n == 0 {
        (0, vec![])
    } else {
        improve(out, degree_order(out, n), 2)
    };
    let mut nodes = 0;
    for k in lower..=upper {
        match decide(out, n, k, budget, &mut nodes) {
            Decision::Found(order) => {
                return OmegaCertificate {
                    schema: 1,
                    value: k,
                    lower: k,
                    order,
                    lower_witness: "exhaustive".into(),
                    mode: Mode::Exact,
                    nodes_expanded: nodes,
                }
            }
            Decision::Refuted => {}
            Decision::Exhausted => {
                return OmegaCertificate {
                    schema: 1,
                    value: upper,
                    lower: k,
                    order: heuristic,
                    lower_witness: if k > lower { "exhaustive" } else { "trivial" }.into(),
                    mode: Mode::Exceeded,
                    nodes_expanded: nodes,
                }
            }
        }
    }
    unreachable!("the heuristic ordering witnesses k = upper")
}

/// Tournament clique number with an optimal ordering.
///
/// Fails with [`Error::SizeLimit`] beyond the configured exact range. A spent
/// budget is not an error: the certificate then has mode `Exceeded` and
/// carries the bounds established so far.
pub fn omega_dir(t: &Tournament, config: &SolverConfig) -> Result<OmegaCertificate> {
    if t.n() > config.omega_limit.min(64) {
        return Err(Error::SizeLimit {
            what: "exact tournament clique number",
            size: t.n(),
            limit: config.omega_limit.min(64),
        });
    }
    Ok(solve_mask(&t.out_masks(), t.n(), config.budget))
}

/// Exact clique number of `T[s]`, unbounded search. Sets larger than 64
/// vertices are rejected.
pub fn omega_of(t: &Tournament, s: &VertexSet) -> Result<usize> {
    if s.len() > 64 {
        return Err(Error::SizeLimit {
            what: "exact tournament clique number",
            size: s.len(),
            limit: 64,
        });
    }
    let (sub, _) = t.induced(s);
    Ok(omega_mask(&sub.out_masks(), sub.n()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaBounds {
    pub lower: usize,
    pub upper: usize,
    pub order: Vec<usize>,
    pub lower_witness: String,
}

/// Sample size for exact lower bounds inside [`omega_dir_bounds`].
const SAMPLE_SIZE: usize = 12;
const SAMPLES: usize = 24;
const SAMPLE_BUDGET: u64 = 200_000;

/// Certified bounds for tournaments of any size up to 64 vertices.
///
/// The upper bound comes from simulated annealing over orderings, the lower
/// bound from exact values of sampled induced subtournaments. Deterministic.
pub fn omega_dir_bounds(t: &Tournament) -> Result<OmegaBounds> {
    let n = t.n();
    if n > 64 {
        return Err(Error::SizeLimit {
            what: "tournament clique number bounds",
            size: n,
            limit: 64,
        });
    }
    let out = t.out_masks();
    let mut lower = trivial_lower(&out, n);
    let mut lower_witness = "trivial".to_string();
    let (mut upper, mut order) = if n == 0 {
        (0, vec![])
    } else {
        improve(&out, degree_order(&out, n), 2)
    };
    if upper > lower {
        let (u, o) = anneal(&out, order.clone(), 0x5eed ^ n as u64);
        if u < upper {
            upper = u;
            order = o;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0_0d ^ n as u64);
    let try_subset = |verts: Vec<usize>, lower: &mut usize, witness: &mut String| {
        let sub = t.induced_ordered(&verts);
        let cert = solve_mask(&sub.out_masks(), sub.n(), Some(SAMPLE_BUDGET));
        if cert.lower > *lower {
            *lower = cert.lower;
            *witness = format!("induced subtournament on {verts:?}");
        }
    };
    if lower < upper {
        if n <= SAMPLE_SIZE + 2 {
            try_subset((0..n).collect(), &mut lower, &mut lower_witness);
        } else {
            for _ in 0..SAMPLES {
                if lower >= upper {
                    break;
                }
                let mut verts = rand::seq::index::sample(&mut rng, n, SAMPLE_SIZE).into_vec();
                verts.sort_unstable();
                try_subset(verts, &mut lower, &mut lower_witness);
            }
        }
    }
    Ok(OmegaBounds {
        lower,
        upper,
        order,
        lower_witness,
    })
}

fn anneal(out: &[u64], start: Vec<usize>, seed: u64) -> (usize, Vec<usize>) {
    let n = start.len();
    if n < 3 {
        return (ordering_clique_mask(out, &start), start);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Secondary objective: number of backedges, to give the walk a gradient.
    let score = |order: &[usize]| {
        let adj = backedge_masks(out, order);
        let all = low_mask(n);
        let w = clique_number_mask(&adj, all) as usize;
        let e: u32 = adj.iter().map(|m| m.count_ones()).sum();
        (w, (w * n * n) as f64 + e as f64 / 2.0)
    };
    let mut cur = start.clone();
    let (mut best_w, mut cur_s) = score(&cur);
    let mut best = cur.clone();
    let steps = 4000 + 200 * n;
    let mut temp = 2.0f64;
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let mut cand = cur.clone();
        let v = cand.remove(i);
        cand.insert(j, v);
        let (w, s) = score(&cand);
        if s <= cur_s || rng.gen::<f64>() < ((cur_s - s) / temp).exp() {
            cur = cand;
            cur_s = s;
            if w < best_w {
                best_w = w;
                best = cur.clone();
            }
        }
        temp = (temp * 0.999).max(0.05);
    }
    (best_w, best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(t: &Tournament) -> usize {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let out = t.out_masks();
        perms(t.n())
            .iter()
            .map(|p| ordering_clique_mask(&out, p))
            .min()
            .unwrap()
    }

    #[test]
    fn small_values() {
        let cfg = SolverConfig::default();
        assert_eq!(omega_dir(&Tournament::empty(), &cfg).unwrap().value, 0);
        assert_eq!(omega_dir(&Tournament::single(), &cfg).unwrap().value, 1);
        assert_eq!(omega_dir(&Tournament::transitive(5), &cfg).unwrap().value, 1);
        let c3 = omega_dir(&Tournament::cyclic_triangle(), &cfg).unwrap();
        assert_eq!(c3.value, 2);
        assert_eq!(c3.order, vec![0, 1, 2]);
    }

    #[test]
    fn agrees_with_enumeration() {
        let cfg = SolverConfig::default();
        for seed in 0..80 {
            let n = 1 + seed as usize % 7;
            let t = Tournament::random(n, seed);
            let cert = omega_dir(&t, &cfg).unwrap();
            assert_eq!(cert.value, brute(&t), "seed {seed}");
            assert_eq!(ordering_clique(&t, &cert.order).unwrap(), cert.value);
        }
    }

    #[test]
    fn returned_order_is_lex_least_optimal() {
        let cfg = SolverConfig::default();
        for seed in 0..20 {
            let t = Tournament::random(5, seed);
            let cert = omega_dir(&t, &cfg).unwrap();
            let out = t.out_masks();
            let mut best: Option<Vec<usize>> = None;
            let mut p: Vec<usize> = (0..5).collect();
            loop {
                if ordering_clique_mask(&out, &p) == cert.value && best.is_none() {
                    best = Some(p.clone());
                }
                // next lexicographic permutation
                let Some(i) = (0..4).rev().find(|&i| p[i] < p[i + 1]) else { break };
                let j = (i + 1..5).rev().find(|&j| p[j] > p[i]).unwrap();
                p.swap(i, j);
                p[i + 1..].reverse();
            }
            assert_eq!(Some(cert.order), best);
        }
    }

    #[test]
    fn budget_zero_reports_bounds() {
        let t = Tournament::random(9, 3);
        let cert = omega_dir(&t, &SolverConfig { budget: Some(0), ..Default::default() }).unwrap();
        assert_eq!(cert.mode, Mode::Exceeded);
        assert!(cert.lower <= cert.value);
        assert_eq!(ordering_clique(&t, &cert.order).unwrap(), cert.value);
    }

    #[test]
    fn size_limit() {
        let t = Tournament::transitive(15);
        assert!(matches!(
            omega_dir(&t, &SolverConfig::default()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn bounds_bracket_exact() {
        assert_eq!(
            {
                let b = omega_dir_bounds(&Tournament::transitive(20)).unwrap();
                (b.lower, b.upper)
            },
            (1, 1)
        );
        for seed in 0..10 {
            let t = Tournament::random(9, seed);
            let exact = omega_dir(&t, &SolverConfig::default()).unwrap().value;
            let b = omega_dir_bounds(&t).unwrap();
            assert!(b.lower <= exact && exact <= b.upper);
        }
    }
}
