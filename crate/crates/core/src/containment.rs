//! Induced subtournament search, family indices, modules and primality.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::bitset::VertexSet;
use crate::canon::{canonical_code, MAX_CANON_N};
use crate::constructions::{self, Family};
use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// `map[q]` is the host vertex playing pattern vertex `q`.
pub type Embedding = Vec<usize>;

/// Whether `map` is an injective map from `V(q)` into `V(t)` preserving every
/// arc and non-arc.
pub fn verify_embedding(t: &Tournament, q: &Tournament, map: &[usize]) -> bool {
    if map.len() != q.n() || map.iter().any(|&v| v >= t.n()) {
        return false;
    }
    let image = VertexSet::from_iter(t.n(), map.iter().copied());
    if image.len() != map.len() {
        return false;
    }
    (0..q.n()).all(|a| (a + 1..q.n()).all(|b| q.arc(a, b) == t.arc(map[a], map[b])))
}

struct Embed<'a> {
    t: &'a Tournament,
    q: &'a Tournament,
    map: Vec<usize>,
}

impl Embed<'_> {
    fn search(&mut self, i: usize, domains: &[VertexSet]) -> bool {
        let k = self.q.n();
        if i == k {
            return true;
        }
        for v in domains[i].iter() {
            let mut next = Vec::with_capacity(k - i - 1);
            let mut ok = true;
            for j in i + 1..k {
                let side = if self.q.arc(i, j) {
                    self.t.out_neighbours(v)
                } else {
                    self.t.in_neighbours(v)
                };
                let d = domains[j].intersection(side);
                if d.is_empty() {
                    ok = false;
                    break;
                }
                next.push(d);
            }
            if !ok {
                continue;
            }
            self.map.push(v);
            // `next` is indexed from i + 1; pad so the recursion can index by j.
            let mut padded = vec![VertexSet::new(0); i + 1];
            padded.extend(next);
            if self.search(i + 1, &padded) {
                return true;
            }
            self.map.pop();
        }
        false
    }
}

/// Lexicographically least embedding of `q` into `t` as an induced
/// subtournament, or `None` when `t` is `q`-free.
///
/// Pattern vertices are matched in id order against degree-filtered domains,
/// and every assignment immediately narrows the domains of all later pattern
/// vertices (forward checking).
pub fn contains_copy(t: &Tournament, q: &Tournament) -> Option<Embedding> {
    contains_copy_within(t, q, &t.vertices())
}

/// As [`contains_copy`], with the image restricted to `within`.
pub fn contains_copy_within(t: &Tournament, q: &Tournament, within: &VertexSet) -> Option<Embedding> {
    let k = q.n();
    if k == 0 {
        return Some(vec![]);
    }
    if k > within.len() {
        return None;
    }
    let mut domains = Vec::with_capacity(k);
    for a in 0..k {
        let need_out = q.out_degree(a);
        let need_in = k - 1 - need_out;
        let d = VertexSet::from_iter(
            t.n(),
            within.iter().filter(|&v| {
                t.out_neighbours(v).intersection_len(within) >= need_out
                    && t.in_neighbours(v).intersection_len(within) >= need_in
            }),
        );
        if d.is_empty() {
            return None;
        }
        domains.push(d);
    }
    let mut e = Embed {
        t,
        q,
        map: Vec::with_capacity(k),
    };
    e.search(0, &domains).then_some(e.map)
}

type IndexCache = Mutex<HashMap<(Vec<u8>, Family), usize>>;

fn index_cache() -> &'static IndexCache {
    static CACHE: OnceLock<IndexCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Largest `n` with `F_n` contained in `t` (`ω_A` or `ω_D`); 0 for the empty
/// tournament. Results for tournaments within canonical-code range are
/// cached by isomorphism class.
pub fn family_index(t: &Tournament, family: Family) -> Result<usize> {
    let max = match family {
        Family::A => constructions::MAX_A,
        Family::D => constructions::MAX_D,
        Family::U => {
            return Err(Error::InvalidArgument(
                "family index is defined for A and D only".into(),
            ))
        }
    };
    if t.is_empty() {
        return Ok(0);
    }
    let key = if t.n() <= MAX_CANON_N {
        let key = (canonical_code(t)?, family);
        if let Some(&hit) = index_cache().lock().expect("cache lock").get(&key) {
            return Ok(hit);
        }
        Some(key)
    } else {
        None
    };
    let mut best = 1;
    for n in 2..=max {
        let pattern = constructions::build(family, n)?;
        if pattern.n() > t.n() || contains_copy(t, &pattern).is_none() {
            break;
        }
        best = n;
    }
    if best == max {
        let next = match family {
            Family::A => constructions::size_a(max + 1)?,
            _ => constructions::size_d(max + 1)?,
        };
        if next <= t.n().into() {
            return Err(Error::SizeLimit {
                what: "family index search",
                size: t.n(),
                limit: max,
            });
        }
    }
    if let Some(key) = key {
        index_cache().lock().expect("cache lock").insert(key, best);
    }
    Ok(best)
}

/// Least set containing `seed` that is a module: repeatedly absorbs every
/// outside vertex that sees the set from both sides.
pub fn module_closure(t: &Tournament, seed: &VertexSet) -> VertexSet {
    let mut m = seed.clone();
    loop {
        let splitters: Vec<usize> = m
            .complement()
            .iter()
            .filter(|&x| t.out_neighbours(x).intersects(&m) && t.in_neighbours(x).intersects(&m))
            .collect();
        if splitters.is_empty() {
            return m;
        }
        for x in splitters {
            m.insert(x);
        }
    }
}

pub fn is_module(t: &Tournament, m: &VertexSet) -> bool {
    m.complement()
        .iter()
        .all(|x| !(t.out_neighbours(x).intersects(m) && t.in_neighbours(x).intersects(m)))
}

/// A smallest non-trivial module (ties broken by sorted member sequence), or
/// `None` when `t` is prime.
pub fn find_module(t: &Tournament) -> Option<VertexSet> {
    let n = t.n();
    let mut best: Option<VertexSet> = None;
    for a in 0..n {
        for b in a + 1..n {
            let m = module_closure(t, &VertexSet::from_iter(n, [a, b]));
            if m.len() < n
                && best
                    .as_ref()
                    .is_none_or(|cur| (m.len(), &m) < (cur.len(), cur))
            {
                best = Some(m);
            }
        }
    }
    best
}

/// No module other than singletons and the whole vertex set.
pub fn is_prime(t: &Tournament) -> bool {
    find_module(t).is_none()
}
