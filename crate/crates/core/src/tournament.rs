//! Tournaments, ordered backedge graphs and the structural operations on them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A complete loop-free orientation on vertices `0..n`.
///
/// Both out- and in-neighbourhood rows are stored; the in-rows are derived and
/// always kept consistent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    out: Vec<VertexSet>,
    inn: Vec<VertexSet>,
}

impl Tournament {
    /// Builds a tournament from a rule deciding, for each pair `i < j`, whether
    /// the arc is `i -> j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let mut out = vec![VertexSet::new(n); n];
        let mut inn = vec![VertexSet::new(n); n];
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = if forward(i, j) { (i, j) } else { (j, i) };
                out[a].insert(b);
                inn[b].insert(a);
            }
        }
        Tournament { out, inn }
    }

    /// Builds a tournament from a 0/1 adjacency grid, rejecting loops,
    /// digons and missing arcs.
    pub fn from_matrix<R: AsRef<[u8]>>(n: usize, cells: &[R]) -> Result<Self> {
        if cells.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: cells.len(),
            });
        }
        for row in cells {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(bad) = row.iter().find(|&&c| c > 1) {
                return Err(Error::InvalidArgument(format!("cell value {bad} is not 0 or 1")));
            }
        }
        let cell = |i: usize, j: usize| cells[i].as_ref()[j] == 1;
        for i in 0..n {
            if cell(i, i) {
                return Err(Error::Loop(i));
            }
            for j in i + 1..n {
                match (cell(i, j), cell(j, i)) {
                    (true, true) => return Err(Error::Digon(i, j)),
                    (false, false) => return Err(Error::MissingArc(i, j)),
                    _ => {}
                }
            }
        }
        Ok(Self::from_fn(n, cell))
    }

    pub fn empty() -> Self {
        Self::from_fn(0, |_, _| true)
    }

    pub fn single() -> Self {
        Self::from_fn(1, |_, _| true)
    }

    /// Transitive tournament with `i -> j` whenever `i < j`.
    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    /// The directed triangle `0 -> 1 -> 2 -> 0`.
    pub fn cyclic_triangle() -> Self {
        Self::from_fn(3, |i, j| !(i == 0 && j == 2))
    }

    /// Each unordered pair oriented by an independent fair coin drawn from a
    /// ChaCha8 stream seeded with `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(n, |_, _| rng.gen_bool(0.5))
    }

    pub fn random_with<R: Rng>(n: usize, rng: &mut R) -> Self {
        Self::from_fn(n, |_, _| rng.gen_bool(0.5))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    /// Whether the arc `u -> v` exists.
    #[inline]
    pub fn arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    #[inline]
    pub fn out_neighbours(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    #[inline]
    pub fn in_neighbours(&self, v: usize) -> &VertexSet {
        &self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Out-neighbourhood masks; requires `n <= 64`.
    pub fn out_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "mask view needs at most 64 vertices");
        self.out.iter().map(VertexSet::mask).collect()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    pub fn matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.arc(i, j) as u8).collect())
            .collect()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.universe() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "vertex set over universe {} used with tournament on {} vertices",
                s.universe(),
                self.n()
            )));
        }
        Ok(())
    }

    /// The subtournament on `vertices`, listed in the given order; vertex `i`
    /// of the result is `vertices[i]`.
    pub fn induced_ordered(&self, vertices: &[usize]) -> Tournament {
        Tournament::from_fn(vertices.len(), |i, j| self.arc(vertices[i], vertices[j]))
    }

    /// The subtournament on `s` with vertices renumbered increasingly; the
    /// returned map sends new ids to old ids.
    pub fn induced(&self, s: &VertexSet) -> (Tournament, Vec<usize>) {
        let map = s.to_vec();
        (self.induced_ordered(&map), map)
    }

    /// Same tournament with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Tournament> {
        let inv = invert_permutation(perm, self.n())?;
        Ok(Tournament::from_fn(self.n(), |i, j| self.arc(inv[i], inv[j])))
    }

    /// All arcs reversed.
    pub fn reversed(&self) -> Tournament {
        Tournament {
            out: self.inn.clone(),
            inn: self.out.clone(),
        }
    }

    /// `X => Y`: every vertex of `x` has an arc to every vertex of `y`.
    pub fn is_out_complete(&self, x: &VertexSet, y: &VertexSet) -> Result<bool> {
        self.check_set(x)?;
        self.check_set(y)?;
        if x.intersects(y) {
            return Err(Error::Overlap);
        }
        Ok(x.iter().all(|u| y.is_subset(&self.out[u])))
    }

    /// Whether `s` induces a transitive (equivalently acyclic) subtournament.
    pub fn is_transitive_on(&self, s: &VertexSet) -> bool {
        // A tournament is transitive iff its out-degrees are pairwise distinct.
        let mut seen = VertexSet::new(s.len().max(1));
        for v in s {
            let d = self.out[v].intersection_len(s);
            if !seen.insert(d) {
                return false;
            }
        }
        true
    }

    pub fn is_transitive(&self) -> bool {
        self.is_transitive_on(&self.vertices())
    }

    /// `Δ(t1, t2, t3)`: disjoint union with `t1 => t2 => t3 => t1`, vertices of
    /// `t1` first, then `t2`, then `t3`.
    pub fn delta_compose(t1: &Tournament, t2: &Tournament, t3: &Tournament) -> Tournament {
        let (a, b) = (t1.n(), t2.n());
        let n = a + b + t3.n();
        let part = |v: usize| {
            if v < a {
                (0, v)
            } else if v < a + b {
                (1, v - a)
            } else {
                (2, v - a - b)
            }
        };
        Tournament::from_fn(n, |i, j| match (part(i), part(j)) {
            ((0, x), (0, y)) => t1.arc(x, y),
            ((1, x), (1, y)) => t2.arc(x, y),
            ((2, x), (2, y)) => t3.arc(x, y),
            ((p, _), (q, _)) => (p + 1) % 3 == q,
        })
    }

    /// Replaces vertex `v` by a copy of `inner`. The copy occupies ids
    /// `v..v + inner.n()`; vertices after `v` shift up. Returns the result and,
    /// for each old vertex other than `v`, its new id (`None` at `v`).
    pub fn substitute(&self, v: usize, inner: &Tournament) -> Result<(Tournament, Vec<Option<usize>>)> {
        self.check_vertex(v)?;
        let k = inner.n();
        let n = self.n() - 1 + k;
        // new id -> (Some(old vertex)) or inner index
        let origin = |x: usize| -> std::result::Result<usize, usize> {
            if x < v {
                Ok(x)
            } else if x < v + k {
                Err(x - v)
            } else {
                Ok(x + 1 - k)
            }
        };
        let t = Tournament::from_fn(n, |i, j| match (origin(i), origin(j)) {
            (Ok(x), Ok(y)) => self.arc(x, y),
            (Err(x), Err(y)) => inner.arc(x, y),
            (Ok(x), Err(_)) => self.arc(x, v),
            (Err(_), Ok(y)) => self.arc(v, y),
        });
        let map = (0..self.n())
            .map(|x| match x.cmp(&v) {
                std::cmp::Ordering::Less => Some(x),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(x + k - 1),
            })
            .collect();
        Ok((t, map))
    }

    /// The backedge graph with respect to `order` (a list of all vertices,
    /// earliest first).
    pub fn backedge_graph(&self, order: &[usize]) -> Result<OrderedBackedgeGraph> {
        let pos = invert_permutation(order, self.n())?;
        let mut g = Graph::empty(self.n());
        for (u, v) in self.arcs() {
            if pos[u] > pos[v] {
                g.add_edge(u, v);
            }
        }
        Ok(OrderedBackedgeGraph {
            order: order.to_vec(),
            graph: g,
        })
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Tournament({})", self.n())?;
        for row in self.matrix() {
            let s: String = row.iter().map(|&c| if c == 1 { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Position of each vertex in `order`, validating that `order` is a
/// permutation of `0..n`.
pub fn invert_permutation(order: &[usize], n: usize) -> Result<Vec<usize>> {
    if order.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::NotAPermutation(n));
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// An undirected graph together with a total order of its vertices: the
/// backedge graph `B(T, <)` of some tournament.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedBackedgeGraph {
    order: Vec<usize>,
    graph: Graph,
}

impl OrderedBackedgeGraph {
    pub fn new(order: Vec<usize>, graph: Graph) -> Result<Self> {
        invert_permutation(&order, graph.n())?;
        if !graph.is_valid() {
            return Err(Error::InvalidArgument("graph is not symmetric and loop-free".into()));
        }
        Ok(OrderedBackedgeGraph { order, graph })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// The unique tournament having this ordered graph as backedge graph:
    /// forward arcs where there is no edge, backward arcs where there is one.
    pub fn tournament(&self) -> Tournament {
        let pos = invert_permutation(&self.order, self.n()).expect("validated on construction");
        Tournament::from_fn(self.n(), |i, j| {
            let forward_in_order = pos[i] < pos[j];
            forward_in_order != self.graph.has_edge(i, j)
        })
    }
}
